"""Discrete-time state-space models, simulation, and structure matrices.

Covers both the linear recursion x+ = Ax + Bu, y = Cx + Du and its affine
variant with constant offsets E and F.  Besides simulation, the module
builds the observability and convolution matrices, the combined model
matrix whose columns generate every length-L output window, and checks the
factorization identity tying the trajectory Hankel matrix to the model
matrix applied to input windows and initial states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .behavior import Trajectory, build_hankel
from .linalg import as_matrix, numeric_rank


@dataclass(frozen=True)
class StateSpaceModel:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray | None = None
    F: np.ndarray | None = None
    affine: bool = False

    def __post_init__(self):
        A = as_matrix(self.A)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError(f"A must be square, got {A.shape}")
        B = as_matrix(self.B)
        if B.shape[0] != n:
            raise ValueError(f"B must have {n} rows, got {B.shape}")
        C = as_matrix(self.C)
        if C.shape[1] != n:
            raise ValueError(f"C must have {n} columns, got {C.shape}")
        D = as_matrix(self.D)
        if D.shape != (C.shape[0], B.shape[1]):
            raise ValueError(f"D must be {C.shape[0]} x {B.shape[1]}, got {D.shape}")
        for name, value in (("A", A), ("B", B), ("C", C), ("D", D)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if self.affine:
            E = np.zeros(n) if self.E is None else np.asarray(self.E, dtype=float).reshape(-1)
            F = np.zeros(C.shape[0]) if self.F is None else np.asarray(self.F, dtype=float).reshape(-1)
            if E.shape != (n,) or F.shape != (C.shape[0],):
                raise ValueError("offsets must have shapes (n,) and (p,)")
            if not (np.all(np.isfinite(E)) and np.all(np.isfinite(F))):
                raise ValueError("offset entries must be finite")
            E.setflags(write=False)
            F.setflags(write=False)
            object.__setattr__(self, "E", E)
            object.__setattr__(self, "F", F)
        elif self.E is not None or self.F is not None:
            raise ValueError("offsets E/F require affine=True")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class StateTrajectory:
    samples: np.ndarray  # T x n

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[0] < 1:
            raise ValueError("state samples must be a T x n array with T >= 1")
        if not np.all(np.isfinite(samples)):
            raise ValueError("state entries must be finite")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def T(self) -> int:
        return self.samples.shape[0]


def simulate(
    ss: StateSpaceModel, x0, T: int, u=None
) -> tuple[Trajectory, StateTrajectory]:
    """Iterate the recursion for T steps from x0, optionally driven by inputs u.

    Returns the combined (input, output) trajectory and the visited states.
    """
    if T < 1:
        raise ValueError("need T >= 1")
    x = np.asarray(x0, dtype=float).reshape(-1)
    if x.shape != (ss.n,):
        raise ValueError(f"x0 must have length n={ss.n}")
    if ss.m > 0:
        if u is None:
            raise ValueError("model has inputs; an input sequence is required")
        u = np.asarray(u, dtype=float)
        if u.ndim == 1 and ss.m == 1:
            u = u.reshape(-1, 1)
        if u.ndim != 2 or u.shape[1] != ss.m or u.shape[0] < T:
            raise ValueError(f"inputs must be at least {T} x {ss.m}")
    else:
        u = np.zeros((T, 0))
    X = np.empty((T, ss.n))
    W = np.empty((T, ss.m + ss.p))
    for t in range(T):
        X[t] = x
        y = ss.C @ x + ss.D @ u[t]
        if ss.affine:
            y = y + ss.F
        W[t, : ss.m] = u[t]
        W[t, ss.m :] = y
        x = ss.A @ x + ss.B @ u[t]
        if ss.affine:
            x = x + ss.E
    return Trajectory(ss.m, ss.p, W), StateTrajectory(X)


def is_internally_positive(ss: StateSpaceModel) -> bool:
    """True iff every defining matrix is entrywise non-negative.

    For this model class that is equivalent to forward invariance of the
    non-negative orthant for states and outputs.
    """
    parts = [ss.A, ss.B, ss.C, ss.D]
    if ss.affine:
        parts += [ss.E, ss.F]
    return all(part.size == 0 or float(part.min()) >= 0.0 for part in parts)


def observability_matrix(ss: StateSpaceModel, L: int) -> np.ndarray:
    """Stack C, CA, ..., CA^(L-1) into a (pL) x n matrix."""
    if L < 1:
        raise ValueError("need L >= 1")
    blocks = []
    CAk = ss.C
    for _ in range(L):
        blocks.append(CAk)
        CAk = CAk @ ss.A
    return np.vstack(blocks)


def lag(ss: StateSpaceModel) -> int | None:
    """Smallest depth at which the observability matrix reaches full column rank.

    None when no depth up to n achieves rank n (then the pair is unobservable
    and the notion is undefined for this model).
    """
    for ell in range(1, ss.n + 1):
        if numeric_rank(observability_matrix(ss, ell)) == ss.n:
            return ell
    return None


def convolution_matrix(ss: StateSpaceModel, L: int) -> np.ndarray:
    """Lower block-triangular (pL) x (mL) matrix of impulse-response blocks."""
    if L < 1:
        raise ValueError("need L >= 1")
    p, m = ss.p, ss.m
    markov = [ss.D]
    CAk = ss.C
    for _ in range(L - 1):
        markov.append(CAk @ ss.B)
        CAk = CAk @ ss.A
    T_L = np.zeros((p * L, m * L))
    for i in range(L):
        for j in range(i + 1):
            T_L[i * p : (i + 1) * p, j * m : (j + 1) * m] = markov[i - j]
    return T_L


def model_matrix(ss: StateSpaceModel, L: int) -> np.ndarray:
    """(qL) x (mL + n) matrix mapping stacked inputs and the initial state
    to the stacked length-L window (u(0), y(0), u(1), y(1), ...).

    Rows are permuted from the two-block form [I 0; T_L O_L] into the
    per-time interleaved order used by the Hankel stacking.
    """
    if L < 1:
        raise ValueError("need L >= 1")
    m, p, n = ss.m, ss.p, ss.n
    top = np.hstack([np.eye(m * L), np.zeros((m * L, n))])
    bottom = np.hstack([convolution_matrix(ss, L), observability_matrix(ss, L)])
    stacked = np.vstack([top, bottom])
    order = []
    for t in range(L):
        order.extend(range(t * m, (t + 1) * m))
        order.extend(range(m * L + t * p, m * L + (t + 1) * p))
    return stacked[order, :]


def _augmented(ss: StateSpaceModel) -> StateSpaceModel:
    """Fold the affine offsets into one extra always-one state coordinate."""
    n, m, p = ss.n, ss.m, ss.p
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = ss.A
    A[:n, n] = ss.E
    A[n, n] = 1.0
    B = np.vstack([ss.B, np.zeros((1, m))])
    C = np.hstack([ss.C, ss.F.reshape(-1, 1)])
    return StateSpaceModel(A, B, C, ss.D)


def factorization_check(
    ss: StateSpaceModel,
    w: Trajectory,
    x: StateTrajectory,
    L: int,
    tol: float = 1e-9,
) -> bool:
    """Verify H_L(w) = M_L [H_L(u); H_1(x)] for a simulated trajectory.

    Affine models are checked through the constant-state augmentation, which
    turns the offset recursion into the plain linear form.
    """
    if w.m != ss.m or w.p != ss.p or x.n != ss.n:
        raise ValueError("trajectory dimensions do not match the model")
    if not 1 <= L <= w.T:
        raise ValueError(f"depth L={L} must satisfy 1 <= L <= T={w.T}")
    ncols = w.T - L + 1
    if x.T < ncols:
        raise ValueError("state trajectory too short for the requested depth")
    if ss.affine:
        model = _augmented(ss)
        states = np.hstack([x.samples[:ncols], np.ones((ncols, 1))])
    else:
        model = ss
        states = x.samples[:ncols]
    if ss.m > 0:
        Hu = build_hankel(Trajectory(ss.m, 0, w.inputs), L).entries
    else:
        Hu = np.zeros((0, ncols))
    lhs = build_hankel(w, L).entries
    rhs = model_matrix(model, L) @ np.vstack([Hu, states.T])
    return float(np.linalg.norm(lhs - rhs)) <= tol * max(1.0, float(np.linalg.norm(lhs)))


def leslie_model(fertility, survival, k: int) -> StateSpaceModel:
    """Age-structured population model: fertility first row, survival sub-diagonal.

    The single output counts the individuals in the last k age classes.
    """
    fertility = np.asarray(fertility, dtype=float).reshape(-1)
    survival = np.asarray(survival, dtype=float).reshape(-1)
    n = fertility.shape[0]
    if n < 1:
        raise ValueError("need at least one age class")
    if survival.shape[0] != n - 1:
        raise ValueError(f"need {n - 1} survival rates for {n} age classes")
    if np.any(fertility < 0):
        raise ValueError("fertility rates must be non-negative")
    if np.any((survival < 0) | (survival > 1)):
        raise ValueError("survival rates must lie in [0, 1]")
    if not 1 <= k <= n:
        raise ValueError(f"output class count k={k} must satisfy 1 <= k <= {n}")
    A = np.zeros((n, n))
    A[0, :] = fertility
    A[np.arange(1, n), np.arange(0, n - 1)] = survival
    C = np.zeros((1, n))
    C[0, n - k :] = 1.0
    return StateSpaceModel(A, np.zeros((n, 0)), C, np.zeros((1, 0)))


# --- wire format -------------------------------------------------------------


def model_to_json_dict(ss: StateSpaceModel) -> dict:
    doc = {
        "n": ss.n,
        "m": ss.m,
        "p": ss.p,
        "affine": ss.affine,
        "A": ss.A.tolist(),
        "B": ss.B.tolist(),
        "C": ss.C.tolist(),
        "D": ss.D.tolist(),
    }
    if ss.affine:
        doc["E"] = ss.E.tolist()
        doc["F"] = ss.F.tolist()
    return doc


def model_from_json_dict(doc: dict) -> StateSpaceModel:
    try:
        n, m, p = int(doc["n"]), int(doc["m"]), int(doc["p"])
        affine = bool(doc.get("affine", False))
        A = np.array(doc["A"], dtype=float).reshape(n, n)
        B = np.array(doc["B"], dtype=float).reshape(n, m)
        C = np.array(doc["C"], dtype=float).reshape(p, n)
        D = np.array(doc["D"], dtype=float).reshape(p, m)
        E = np.array(doc["E"], dtype=float).reshape(n) if affine and "E" in doc else None
        F = np.array(doc["F"], dtype=float).reshape(p) if affine and "F" in doc else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model document: {exc}") from None
    return StateSpaceModel(A, B, C, D, E, F, affine)


def state_trajectory_to_csv(x: StateTrajectory) -> str:
    lines = [",".join(f"x{i + 1}" for i in range(x.n))]
    for row in x.samples:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def state_trajectory_from_csv(text: str) -> StateTrajectory:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if len(rows) < 2:
        raise ValueError("state CSV needs a header and at least one data row")
    header = [name.strip() for name in rows[0].split(",")]
    if header != [f"x{i + 1}" for i in range(len(header))]:
        raise ValueError("state CSV header must be x1,...,xn")
    try:
        data = [[float(v) for v in line.split(",")] for line in rows[1:]]
    except ValueError as exc:
        raise ValueError(f"bad state CSV value: {exc}") from None
    if any(len(row) != len(header) for row in data):
        raise ValueError("ragged state CSV")
    return StateTrajectory(np.array(data))
