"""Finite-horizon most-powerful-unfalsified-model construction.

At horizon L the construction is the hull of all length-L windows of the
measurement, i.e. of the Hankel columns; the hull type is picked by the
model class.  With finitely many generators every such hull is closed, so
no closure operator appears.
"""

from __future__ import annotations

from dataclasses import dataclass

from .behavior import FiniteBehavior, Trajectory, behavior_from_hankel, behavior_included, build_hankel, membership
from .pecheck import ModelClass


@dataclass(frozen=True)
class MpumResult:
    """The constructed behavior; generators are the source's windows in shift order."""

    behavior: FiniteBehavior
    generators_are_windows: bool
    source_length: int


def mpum_finite(w: Trajectory, L: int, cls: ModelClass) -> MpumResult:
    """Hull of every length-L window of w, typed by the model class."""
    H = build_hankel(w, L)
    return MpumResult(behavior_from_hankel(H, cls.hull), True, w.T)


def unfalsified_check(result: MpumResult, w: Trajectory, tol: float = 1e-8) -> bool:
    """True iff every length-L window of w belongs to the constructed behavior."""
    B = result.behavior
    if w.q != B.q:
        raise ValueError(f"trajectory signal dimension {w.q} != behavior's {B.q}")
    H = build_hankel(w, B.L)
    return all(membership(B, col, tol).feasible for col in H.entries.T)


def minimality_check(result: MpumResult, other: FiniteBehavior, tol: float = 1e-8) -> bool:
    """True iff the constructed behavior is contained in ``other``.

    ``other`` must carry the same hull type (same model class); any behavior in
    the class containing the data windows must contain the construction.
    """
    if other.hull is not result.behavior.hull:
        raise ValueError("containment is only meaningful within one model class")
    return behavior_included(result.behavior, other, tol)
