"""Trajectories, Hankel matrices, hull-typed finite-horizon behaviors.

A finite-horizon behavior is stored as a generator matrix together with a
hull type; a stacked window belongs to the behavior when it is a linear,
affine, conical, or convex combination of the generator columns.  Membership
queries dispatch to the matching solver from :mod:`behavior_cones.linalg`.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import affine_nonneg_feasible, least_squares, nnls


class Hull(str, Enum):
    """Hull type attached to a generator matrix."""

    LINEAR = "linear"
    AFFINE = "affine"
    CONVEX_CONE = "ccone"
    CONVEX = "conv"


@dataclass(frozen=True)
class Trajectory:
    """A length-T sampled signal; row t holds the m inputs then the p outputs."""

    m: int
    p: int
    samples: np.ndarray

    def __post_init__(self):
        if self.m < 0 or self.p < 0 or self.m + self.p < 1:
            raise ValueError("need non-negative dimensions with m + p >= 1")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1 and self.m + self.p == 1:
            samples = samples.reshape(-1, 1)
        if samples.ndim != 2 or samples.shape[1] != self.m + self.p:
            raise ValueError(
                f"samples must be T x {self.m + self.p}, got shape {samples.shape}"
            )
        if samples.shape[0] < 1:
            raise ValueError("a trajectory needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trajectory entries must be finite")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def q(self) -> int:
        return self.m + self.p

    @property
    def T(self) -> int:
        return self.samples.shape[0]

    @property
    def inputs(self) -> np.ndarray:
        return self.samples[:, : self.m]

    @property
    def outputs(self) -> np.ndarray:
        return self.samples[:, self.m :]


@dataclass(frozen=True)
class HankelMatrix:
    """Depth-L block-Hankel matrix; column j stacks samples j .. j+L-1."""

    L: int
    q: int
    entries: np.ndarray

    @property
    def num_cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class FiniteBehavior:
    """Horizon-L behavior given as a hull of generator columns."""

    L: int
    q: int
    generators: np.ndarray
    hull: Hull

    def __post_init__(self):
        G = np.asarray(self.generators, dtype=float)
        if G.ndim != 2 or G.shape[0] != self.q * self.L or G.shape[1] < 1:
            raise ValueError(
                f"generators must be {self.q * self.L} x N with N >= 1, got {G.shape}"
            )
        if not np.all(np.isfinite(G)):
            raise ValueError("generator entries must be finite")
        G = G.copy()
        G.setflags(write=False)
        object.__setattr__(self, "generators", G)


@dataclass(frozen=True)
class MembershipCertificate:
    feasible: bool
    coefficients: np.ndarray | None
    residual_norm: float
    tol_used: float


def build_hankel(w: Trajectory, L: int) -> HankelMatrix:
    """Hankel matrix of depth L; column j is the stacked window w(j..j+L-1)."""
    if not 1 <= L <= w.T:
        raise ValueError(f"depth L={L} must satisfy 1 <= L <= T={w.T}")
    cols = [w.samples[j : j + L].reshape(-1) for j in range(w.T - L + 1)]
    return HankelMatrix(L, w.q, np.column_stack(cols))


def shift(w: Trajectory, t: int) -> Trajectory:
    """Drop the first t samples."""
    if not 0 <= t < w.T:
        raise ValueError(f"shift t={t} must satisfy 0 <= t < T={w.T}")
    return Trajectory(w.m, w.p, w.samples[t:])


def restrict(w: Trajectory, t1: int, t2: int) -> Trajectory:
    """Keep samples t1 .. t2 inclusive."""
    if not 0 <= t1 <= t2 < w.T:
        raise ValueError(f"window [{t1}, {t2}] out of range for T={w.T}")
    return Trajectory(w.m, w.p, w.samples[t1 : t2 + 1])


def behavior_from_hankel(H: HankelMatrix, hull: Hull) -> FiniteBehavior:
    return FiniteBehavior(H.L, H.q, H.entries, hull)


def membership(B: FiniteBehavior, w, tol: float = 1e-8) -> MembershipCertificate:
    """Decide whether the stacked window w lies in the behavior's hull.

    Feasible iff the solver residual is at most ``tol * max(1, ||w||)``.
    """
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape[0] != B.q * B.L:
        raise ValueError(f"window length {w.shape[0]} != q*L = {B.q * B.L}")
    if not np.all(np.isfinite(w)):
        raise ValueError("window entries must be finite")
    G = B.generators
    if B.hull is Hull.LINEAR:
        res = least_squares(G, w)
    elif B.hull is Hull.AFFINE:
        res = least_squares(G, w, sum_to_one=True)
    elif B.hull is Hull.CONVEX_CONE:
        res = nnls(G, w)
    else:
        res = affine_nonneg_feasible(G, w, sum_to_one=True)
    tol_used = tol * max(1.0, float(np.linalg.norm(w)))
    feasible = res.residual_norm <= tol_used
    return MembershipCertificate(
        feasible, res.coefficients if feasible else None, res.residual_norm, tol_used
    )


def behavior_included(B1: FiniteBehavior, B2: FiniteBehavior, tol: float = 1e-8) -> bool:
    """True iff every generator column of B1 is a member of B2.

    Valid because each hull type is closed under its own combinations of
    generators, so containment of the generators implies containment of
    the hull.
    """
    if B1.q * B1.L != B2.q * B2.L:
        raise ValueError("behaviors live in different ambient dimensions")
    return all(membership(B2, col, tol).feasible for col in B1.generators.T)


def sector_membership(w: Trajectory, alpha: float, beta: float, tol: float = 1e-8) -> bool:
    """Check the pointwise sector inequality (y - alpha*u)(y - beta*u) <= tol.

    Infinite bounds degenerate to the one-sided checks (y - beta*u)*u <= tol
    for alpha = -inf and (y - alpha*u)*u >= -tol for beta = +inf.
    """
    if w.m != 1 or w.p != 1:
        raise ValueError("sector conditions apply to scalar input/output pairs (q = 2)")
    if not alpha < beta:
        raise ValueError("need alpha < beta")
    u = w.samples[:, 0]
    y = w.samples[:, 1]
    lo_inf = math.isinf(alpha)
    hi_inf = math.isinf(beta)
    if lo_inf and hi_inf:
        return True
    if lo_inf:
        return bool(np.all((y - beta * u) * u <= tol))
    if hi_inf:
        return bool(np.all((y - alpha * u) * u >= -tol))
    return bool(np.all((y - alpha * u) * (y - beta * u) <= tol))


# --- wire formats -----------------------------------------------------------

_HEADER_RE = re.compile(r"^([uy])(\d+)$")


def trajectory_to_csv(w: Trajectory) -> str:
    """Serialize as CSV with header u1..um,y1..yp and one row per time step."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"u{i + 1}" for i in range(w.m)] + [f"y{i + 1}" for i in range(w.p)])
    for row in w.samples:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def trajectory_from_csv(text: str) -> Trajectory:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise ValueError("empty trajectory CSV")
    header = [name.strip() for name in rows[0]]
    m = p = 0
    for idx, name in enumerate(header):
        match = _HEADER_RE.match(name)
        if not match:
            raise ValueError(f"bad column name {name!r}; expected u1..um,y1..yp")
        kind, num = match.group(1), int(match.group(2))
        if kind == "u":
            if p or num != m + 1:
                raise ValueError("input columns must come first as u1..um")
            m += 1
        else:
            if num != p + 1:
                raise ValueError("output columns must follow as y1..yp")
            p += 1
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not data:
        raise ValueError("trajectory CSV has no data rows")
    return Trajectory(m, p, np.array(data))


def behavior_to_json_dict(B: FiniteBehavior) -> dict:
    return {
        "L": B.L,
        "q": B.q,
        "hull": B.hull.value,
        "generators": B.generators.tolist(),
    }


def behavior_from_json_dict(doc: dict) -> FiniteBehavior:
    try:
        hull = Hull(doc["hull"])
        return FiniteBehavior(int(doc["L"]), int(doc["q"]), np.array(doc["generators"], dtype=float), hull)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed behavior document: {exc}") from None
