"""Persistence-of-excitation verdicts and data-driven representations.

For each of the four model classes (linear, affine, and their internally
positive counterparts) the Hankel matrix of the measured trajectory is
tested against the class's rank condition; when the condition is certified
the matching hull of the Hankel columns represents the length-L restricted
behavior.  Positive classes rely on non-negative rank bounds, which may
fail to pin the exact value, hence the explicit UNDECIDED verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .behavior import (
    FiniteBehavior,
    HankelMatrix,
    Hull,
    Trajectory,
    behavior_from_hankel,
    build_hankel,
)
from .linalg import numeric_rank
from .nnrank import (
    CombinatorialCapError,
    MonomialCertificate,
    NnRankBounds,
    NnRankConfig,
    monomial_submatrix,
    nonneg_rank_bounds,
)
from .statespace import StateTrajectory


class ModelClass(str, Enum):
    LINEAR = "linear"
    AFFINE = "affine"
    POSITIVE_LINEAR = "positiveLinear"
    POSITIVE_AFFINE = "positiveAffine"

    @property
    def hull(self) -> Hull:
        return _HULLS[self]

    @property
    def is_affine(self) -> bool:
        return self in (ModelClass.AFFINE, ModelClass.POSITIVE_AFFINE)

    @property
    def is_positive(self) -> bool:
        return self in (ModelClass.POSITIVE_LINEAR, ModelClass.POSITIVE_AFFINE)


_HULLS = {
    ModelClass.LINEAR: Hull.LINEAR,
    ModelClass.AFFINE: Hull.AFFINE,
    ModelClass.POSITIVE_LINEAR: Hull.CONVEX_CONE,
    ModelClass.POSITIVE_AFFINE: Hull.CONVEX,
}


class Verdict(str, Enum):
    REPRESENTATIVE = "REPRESENTATIVE"
    NOT_REPRESENTATIVE = "NOT_REPRESENTATIVE"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class PEReport:
    """Verdict plus the evidence it was derived from."""

    model_class: ModelClass
    L: int
    m: int
    n: int
    required_rank: int
    ordinary_rank: int
    nn_bounds: NnRankBounds | None
    monomial: MonomialCertificate | None
    monomial_checked: bool
    verdict: Verdict
    representation: FiniteBehavior | None


def _resolve_m(w: Trajectory, m: int | None) -> int:
    if m is None:
        return w.m
    if m != w.m:
        raise ValueError(f"declared m={m} conflicts with the trajectory's m={w.m}")
    return m


def _with_ones_row(H: HankelMatrix) -> np.ndarray:
    return np.vstack([H.entries, np.ones((1, H.num_cols))])


def pe_check_linear(
    w: Trajectory, n: int, L: int, m: int | None = None, tol: float = 0.0
) -> PEReport:
    """Rank test rank H_L(w) = mL + n for the span representation."""
    m = _resolve_m(w, m)
    H = build_hankel(w, L)
    required = m * L + n
    rank = numeric_rank(H.entries, tol)
    verdict = Verdict.REPRESENTATIVE if rank == required else Verdict.NOT_REPRESENTATIVE
    rep = behavior_from_hankel(H, Hull.LINEAR) if verdict is Verdict.REPRESENTATIVE else None
    return PEReport(ModelClass.LINEAR, L, m, n, required, rank, None, None, False, verdict, rep)


def pe_check_affine(
    w: Trajectory, n: int, L: int, m: int | None = None, tol: float = 0.0
) -> PEReport:
    """Rank test on the ones-row-extended Hankel matrix for the affine hull."""
    m = _resolve_m(w, m)
    H = build_hankel(w, L)
    required = m * L + n + 1
    rank = numeric_rank(_with_ones_row(H), tol)
    verdict = Verdict.REPRESENTATIVE if rank == required else Verdict.NOT_REPRESENTATIVE
    rep = behavior_from_hankel(H, Hull.AFFINE) if verdict is Verdict.REPRESENTATIVE else None
    return PEReport(ModelClass.AFFINE, L, m, n, required, rank, None, None, False, verdict, rep)


def _check_nonneg_data(w: Trajectory, x: StateTrajectory) -> None:
    if float(w.samples.min()) < 0.0:
        raise ValueError("positive model classes need entrywise non-negative trajectories")
    if x.samples.size and float(x.samples.min()) < 0.0:
        raise ValueError("positive model classes need entrywise non-negative states")


def _input_state_matrix(w: Trajectory, x: StateTrajectory, L: int) -> np.ndarray:
    """Stack H_L of the inputs over the first T-L+1 states (one state per column)."""
    ncols = w.T - L + 1
    if x.T < ncols:
        raise ValueError("state trajectory too short for the requested depth")
    if w.m > 0:
        Hu = build_hankel(Trajectory(w.m, 0, w.inputs), L).entries
    else:
        Hu = np.zeros((0, ncols))
    return np.vstack([Hu, x.samples[:ncols].T])


def _positive_verdict(
    bounds: NnRankBounds,
    required: int,
    stacked: np.ndarray,
    monomial_order: int,
    cap: int,
) -> tuple[Verdict, MonomialCertificate | None, bool]:
    if bounds.lower > required or (bounds.upper is not None and bounds.upper < required):
        return Verdict.NOT_REPRESENTATIVE, None, False
    try:
        cert = monomial_submatrix(stacked, monomial_order, cap=cap)
        checked = True
    except CombinatorialCapError:
        cert, checked = None, False
    if checked and cert is None:
        return Verdict.NOT_REPRESENTATIVE, None, True
    pinned = bounds.lower == bounds.upper == required
    if pinned and cert is not None:
        return Verdict.REPRESENTATIVE, cert, True
    return Verdict.UNDECIDED, cert, checked


def pe_check_positive(
    w: Trajectory,
    x: StateTrajectory,
    n: int,
    L: int,
    m: int | None = None,
    config: NnRankConfig | None = None,
) -> PEReport:
    """Non-negative rank test rank+ H_L(w) = mL + n plus the monomial-submatrix
    requirement on the stacked input/state matrix, for the conical hull.

    ``n`` is the caller's claimed order; it need not match the width of the
    supplied state measurements."""
    m = _resolve_m(w, m)
    _check_nonneg_data(w, x)
    cfg = config or NnRankConfig()
    H = build_hankel(w, L)
    required = m * L + n
    rank = numeric_rank(H.entries)
    bounds = nonneg_rank_bounds(H.entries, cfg)
    stacked = _input_state_matrix(w, x, L)
    verdict, cert, checked = _positive_verdict(
        bounds, required, stacked, required, cfg.combinatorial_cap
    )
    rep = (
        behavior_from_hankel(H, Hull.CONVEX_CONE)
        if verdict is Verdict.REPRESENTATIVE
        else None
    )
    return PEReport(
        ModelClass.POSITIVE_LINEAR, L, m, n, required, rank, bounds, cert, checked, verdict, rep
    )


def pe_check_positive_affine(
    w: Trajectory,
    x: StateTrajectory,
    n: int,
    L: int,
    m: int | None = None,
    config: NnRankConfig | None = None,
) -> PEReport:
    """Non-negative rank test on the ones-row-extended Hankel matrix (target
    mL + n + 1) plus the order mL + n monomial requirement, for the convex hull."""
    m = _resolve_m(w, m)
    _check_nonneg_data(w, x)
    cfg = config or NnRankConfig()
    H = build_hankel(w, L)
    extended = _with_ones_row(H)
    required = m * L + n + 1
    rank = numeric_rank(extended)
    bounds = nonneg_rank_bounds(extended, cfg)
    stacked = _input_state_matrix(w, x, L)
    verdict, cert, checked = _positive_verdict(
        bounds, required, stacked, m * L + n, cfg.combinatorial_cap
    )
    rep = behavior_from_hankel(H, Hull.CONVEX) if verdict is Verdict.REPRESENTATIVE else None
    return PEReport(
        ModelClass.POSITIVE_AFFINE, L, m, n, required, rank, bounds, cert, checked, verdict, rep
    )


def data_driven_representation(w: Trajectory, cls: ModelClass, L: int) -> FiniteBehavior:
    """Hull of the Hankel columns for the class, built unconditionally.

    The pe_check functions certify when this equals the true restricted
    behavior.
    """
    if cls.is_positive and float(w.samples.min()) < 0.0:
        raise ValueError("positive model classes need entrywise non-negative trajectories")
    return behavior_from_hankel(build_hankel(w, L), cls.hull)


def pe_report_to_json_dict(report: PEReport, embed_representation: bool = False) -> dict:
    from .behavior import behavior_to_json_dict

    doc = {
        "class": report.model_class.value,
        "L": report.L,
        "m": report.m,
        "n": report.n,
        "requiredRank": report.required_rank,
        "ordinaryRank": report.ordinary_rank,
        "nnLower": report.nn_bounds.lower if report.nn_bounds else None,
        "nnUpper": report.nn_bounds.upper if report.nn_bounds else None,
        "monomialFound": (report.monomial is not None) if report.monomial_checked else None,
        "verdict": report.verdict.value,
    }
    if embed_representation and report.representation is not None:
        doc["representation"] = behavior_to_json_dict(report.representation)
    return doc
