"""Orbital stability verdicts from index bookkeeping.

The criterion compares the Morse index n of the linearized pair (all of it
carried by L1, since L2 is nonnegative with a simple kernel) to the slope
index p: equality means orbitally stable, an odd difference means orbitally
unstable, and an even nonzero difference is outside the criterion's reach.

For a negative defect the second negative eigenfunction of L1 is odd, so it
drops out when the dynamics is restricted to even fields; in that sector the
index is 1 and the bookkeeping closes again.  When the full-space difference
is even and nonzero, instability established in the invariant even sector is
inherited by the full space (an even field escaping the orbit witnesses
escape in the full norm), which is how the unstable strengths below the
threshold are classified.

`classify_numeric` derives both indices from the discretized operators and
the charge slope; `classify_analytic` is a lookup of the proven
classification: for unit coefficients, stable for Z >= 0, unstable on
(z*, 0), stable in the even sector for Z > z*, unstable in both spaces below
z*; for a focusing cubic with defocusing quintic, stable for Z > 0, unstable
(full) / stable (even) for Z < 0.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

from . import spectral, vk
from .errors import DegenerateError, PreconditionError
from .profile import Regime, WaveParameters
from .spectral import GridSpec, OperatorKind, Sector

__all__ = [
    "Space",
    "Outcome",
    "Provenance",
    "Verdict",
    "classify_numeric",
    "classify_analytic",
    "compare",
]


class Space(enum.Enum):
    FULL_H1 = "full"
    EVEN_H1 = "even"


class Outcome(enum.Enum):
    ORBITALLY_STABLE = "OrbitallyStable"
    ORBITALLY_UNSTABLE = "OrbitallyUnstable"
    INDETERMINATE = "Indeterminate"


class Provenance(enum.Enum):
    NUMERIC_PIPELINE = "numeric"
    ANALYTIC_TABLE = "analytic"


@dataclass(frozen=True)
class Verdict:
    """Stability verdict with the indices that produced it.

    `n_hessian` or `p_index` is -1 when the analytic table does not pin the
    value (general attractive-attractive coefficients without a proven
    threshold).
    """

    space: Space
    n_hessian: int
    p_index: int
    outcome: Outcome
    provenance: Provenance
    note: str = ""


#: Half-width of the strength interval around the threshold excluded from
#: classification (slope index degenerates there).
ZSTAR_EXCLUSION = 1e-6


def _bookkeep(n: int, p: int) -> Outcome:
    if n == p:
        return Outcome.ORBITALLY_STABLE
    if (n - p) % 2 == 1:
        return Outcome.ORBITALLY_UNSTABLE
    return Outcome.INDETERMINATE


@functools.lru_cache(maxsize=1)
def _reference_zstar() -> float:
    return vk.find_zstar()


def _check_preconditions(p: WaveParameters, grid: GridSpec) -> None:
    if p.z == 0.0:
        raise PreconditionError(
            "Z = 0 carries a translation zero mode of L1; the phase-only criterion does not apply"
        )
    report = spectral.kernel_residual(p, grid)
    zero_tol = 1e-2 * max(1.0, abs(p.omega))
    if report.l2_zero_abs > zero_tol:
        raise PreconditionError(
            f"L2 lowest eigenvalue {report.l2_zero_abs} too far from 0 (tol {zero_tol}); "
            "kernel check failed at this grid"
        )
    gap_tol = spectral.zero_exclusion_shift(grid, p)
    if report.l1_distance_to_zero <= gap_tol:
        raise PreconditionError(
            f"L1 spectrum approaches 0 within {report.l1_distance_to_zero}; "
            "trivial-kernel check failed at this grid"
        )


def _indices(p: WaveParameters, grid: GridSpec, space: Space) -> int:
    g = grid if space is Space.FULL_H1 else grid.even_half()
    n1 = spectral.morse_index(OperatorKind.L1, p, g)
    n2 = spectral.morse_index(OperatorKind.L2, p, g)
    return n1 + n2


def classify_numeric(p: WaveParameters, space: Space, grid: GridSpec | None = None) -> Verdict:
    """Verdict from discretized Morse indices and the measured charge slope."""
    if grid is None:
        grid = spectral.default_grid(p, n_points=2001)
    if grid.sector is not Sector.FULL_LINE:
        raise PreconditionError("classification grids are full-line; the even sector is derived internally")
    _check_preconditions(p, grid)
    p_idx = vk.p_index(p)
    n = _indices(p, grid, space)
    outcome = _bookkeep(n, p_idx)
    note = ""
    if outcome is Outcome.ORBITALLY_UNSTABLE:
        note = "index difference odd: nonlinear instability inferred from the linearized flow"
    if outcome is Outcome.INDETERMINATE and space is Space.FULL_H1:
        n_even = _indices(p, grid, Space.EVEN_H1)
        if _bookkeep(n_even, p_idx) is Outcome.ORBITALLY_UNSTABLE:
            outcome = Outcome.ORBITALLY_UNSTABLE
            note = (
                "full-space index difference is even; instability inherited from the "
                "invariant even sector"
            )
    return Verdict(space, n, p_idx, outcome, Provenance.NUMERIC_PIPELINE, note)


def classify_analytic(p: WaveParameters, space: Space, zstar: float | None = None) -> Verdict:
    """Verdict from the proven classification tables."""
    if p.regime is Regime.ATTRACTIVE_REPULSIVE:
        if p.z == 0.0:
            raise DegenerateError("the attractive-repulsive classification covers Z != 0 only")
        n_full = 1 if p.z > 0.0 else 2
        n = n_full if space is Space.FULL_H1 else 1
        if p.z > 0.0:
            note = "" if space is Space.FULL_H1 else "even-sector stability follows from full-space stability"
            return Verdict(space, n, 1, Outcome.ORBITALLY_STABLE, Provenance.ANALYTIC_TABLE, note)
        if space is Space.FULL_H1:
            return Verdict(space, n, 1, Outcome.ORBITALLY_UNSTABLE, Provenance.ANALYTIC_TABLE,
                           "index difference odd: nonlinear instability inferred from the linearized flow")
        return Verdict(space, n, 1, Outcome.ORBITALLY_STABLE, Provenance.ANALYTIC_TABLE, "")
    if p.lambda1 != 1.0 or p.lambda2 != 1.0:
        n_full = 1 if p.z > 0.0 else 2
        n = n_full if space is Space.FULL_H1 else 1
        return Verdict(
            space, n, -1, Outcome.INDETERMINATE, Provenance.ANALYTIC_TABLE,
            "threshold for general focusing-focusing coefficients is conjectural; "
            "only the unit-coefficient table is proven",
        )
    zs = _reference_zstar() if zstar is None else zstar
    if abs(p.z - zs) <= ZSTAR_EXCLUSION:
        raise DegenerateError(f"Z = {p.z} within {ZSTAR_EXCLUSION} of the threshold {zs}")
    p_idx = 1 if p.z > zs else 0
    n_full = 1 if p.z >= 0.0 else 2
    n = n_full if space is Space.FULL_H1 else 1
    if space is Space.FULL_H1:
        if p.z >= 0.0:
            return Verdict(space, n, p_idx, Outcome.ORBITALLY_STABLE, Provenance.ANALYTIC_TABLE, "")
        note = ("index difference odd: nonlinear instability inferred from the linearized flow"
                if p.z > zs else
                "instability inherited from the invariant even sector")
        return Verdict(space, n, p_idx, Outcome.ORBITALLY_UNSTABLE, Provenance.ANALYTIC_TABLE, note)
    if p.z > zs:
        return Verdict(space, n, p_idx, Outcome.ORBITALLY_STABLE, Provenance.ANALYTIC_TABLE, "")
    return Verdict(space, n, p_idx, Outcome.ORBITALLY_UNSTABLE, Provenance.ANALYTIC_TABLE,
                   "index difference odd: nonlinear instability inferred from the linearized flow")


def compare(p: WaveParameters, grid: GridSpec | None = None) -> bool:
    """True when the numeric and analytic classifiers agree in both spaces.

    Raises DegenerateError near the threshold (both classifiers decline
    there, which is a shared exclusion, not a disagreement).
    """
    for space in (Space.FULL_H1, Space.EVEN_H1):
        numeric = classify_numeric(p, space, grid)
        analytic = classify_analytic(p, space)
        if numeric.outcome is not analytic.outcome:
            return False
    return True
