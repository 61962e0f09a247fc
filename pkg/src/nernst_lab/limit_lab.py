"""Low-temperature limits, heat capacities, iterated N/J limits and the
third-law audit of a model over a grid of work coordinates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (NEG_INFINITY, EntropyModel, EntropyTable, check_third_law_table,
                   planck_spread)
from .errors import InputError, NernstLabError
from .numerics import Classification, LimitEstimate, extrapolate_limit, finite_diff
from .spin_models import pm_printed_entropy, pm_quantum_entropy, rotor_classical_entropy

DEFAULT_K = 12
DEFAULT_TOLERANCE = 1e-6


class Verdict(str, enum.Enum):
    COMPLIANT = "COMPLIANT"
    PLANCK_VIOLATION = "PLANCK_VIOLATION"
    CONTINUITY_FAILURE = "CONTINUITY_FAILURE"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


def entropy_slope(model: EntropyModel, Z, T: float) -> float:
    """(dS/dT)_Z by a Richardson-refined central difference with step 1e-4 T."""
    Z = tuple(np.atleast_1d(Z).astype(float))
    return finite_diff(lambda t: model.entropy(Z, t), T, 1e-4 * T, richardson=True)


def heat_capacity(model: EntropyModel, Z, T: float) -> float:
    """C_Z = T (dS/dT)_Z."""
    return T * entropy_slope(model, Z, T)


def thermodynamic_temperature(model: EntropyModel, Z, T: float) -> float:
    """T recovered as (dU/dT)_Z / (dS/dT)_Z, i.e. 1/T = (dS/dU)_Z.

    Needs a model exposing ``energy(Z, T)``.
    """
    if not hasattr(model, "energy"):
        raise InputError(f"model {model.name!r} has no energy function")
    Z = tuple(np.atleast_1d(Z).astype(float))
    dU = finite_diff(lambda t: model.energy(Z, t), T, 1e-4 * T, richardson=True)
    return dU / entropy_slope(model, Z, T)


def z_derivatives(model: EntropyModel, Z, T: float) -> list:
    """(dS/dZ_k)_T for each coordinate; None where the stencil leaves the domain."""
    Z = tuple(np.atleast_1d(Z).astype(float))
    out = []
    for k, z in enumerate(Z):
        h = 1e-4 * max(abs(z), 1.0)

        def f(v, k=k):
            return model.entropy(Z[:k] + (v,) + Z[k + 1:], T)

        try:
            out.append(finite_diff(f, z, h, richardson=True))
        except NernstLabError:
            out.append(None)
    return out


def default_t_sequence(t0: float, k: int = DEFAULT_K) -> list[float]:
    """Geometric temperatures t0 * 2^-j, j = 0..k."""
    if not t0 > 0:
        raise InputError(f"t0 must be positive, got {t0}")
    if k < 5:
        raise InputError(f"need k >= 5 for at least six temperatures, got {k}")
    return [t0 * 2.0 ** -j for j in range(k + 1)]


def _check_t_sequence(ts):
    ts = [float(t) for t in ts]
    if len(ts) < 6:
        raise InputError(f"temperature sequence needs at least 6 entries, got {len(ts)}")
    if any(t <= 0 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise InputError("temperature sequence must be positive and strictly decreasing")
    return ts


def t0_classify(model: EntropyModel, Z, t_sequence: Sequence[float]) -> LimitEstimate:
    """Extrapolate S(Z, T) along ``t_sequence`` toward T = 0.

    A FINITE estimate carries the zero-temperature entropy S(Z, 0).
    """
    ts = _check_t_sequence(t_sequence)
    Z = tuple(np.atleast_1d(Z).astype(float))
    return extrapolate_limit([(t, model.entropy(Z, t)) for t in ts])


@dataclass
class AuditReport:
    model: str
    verdict: Verdict
    residual_table: list
    planck_spread: Optional[float]
    heat_capacity_trace: list
    stability_diagnostic: bool
    notes: str
    z_derivatives: list = field(default_factory=list)
    estimates: list = field(default_factory=list, repr=False)
    table: Optional[EntropyTable] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "verdict": self.verdict.value,
            "residual_table": [{"Z": list(z), "S0": s} for z, s in self.residual_table],
            "planck_spread": self.planck_spread,
            "heat_capacity": [{"T": t, "C": c} for t, c in self.heat_capacity_trace],
            "stability": self.stability_diagnostic,
            "z_derivatives": [{"Z": list(z), "dS_dZ": d} for z, d in self.z_derivatives],
            "notes": self.notes,
        }


def audit_model(model: EntropyModel, z_grid, t_sequence: Optional[Sequence[float]] = None,
                tolerance: float = DEFAULT_TOLERANCE) -> AuditReport:
    """Third-law audit of ``model`` over ``z_grid``.

    Each Z is classified as T -> 0. Any divergence gives CONTINUITY_FAILURE.
    Otherwise the zero-temperature row closes an :class:`EntropyTable`, the
    tabulated third-law inequality is checked, and the per-site Planck
    spread decides between COMPLIANT and PLANCK_VIOLATION. When
    ``t_sequence`` is omitted it defaults to ``t0 * 2^-k`` (k = 0..12) with
    ``t0`` the smallest model temperature scale over the grid.
    """
    zs = [tuple(np.atleast_1d(z).astype(float)) for z in z_grid]
    if not zs:
        raise InputError("Z grid is empty")
    if t_sequence is None:
        t_sequence = default_t_sequence(min(model.t_scale(z) for z in zs))
    ts = _check_t_sequence(t_sequence)

    notes = []
    estimates = [t0_classify(model, z, ts) for z in zs]
    residuals = []
    for z, est in zip(zs, estimates):
        if est.classification is Classification.FINITE:
            residuals.append((z, est.value + 0.0))
        elif est.classification is Classification.DIVERGES_NEG:
            residuals.append((z, NEG_INFINITY))
        elif est.classification is Classification.DIVERGES_POS:
            residuals.append((z, math.inf))
        else:
            residuals.append((z, None))

    slopes = [[entropy_slope(model, z, t) for t in ts] for z in zs]
    trace = [(t, t * d) for t, d in zip(ts, slopes[0])]
    # slopes that underflow to exactly 0 deep in the frozen regime are not counted
    stability = (all(d >= 0 for row in slopes for d in row)
                 and all(any(d > 0 for d in row) for row in slopes))

    # reported only: vanishing Z-derivatives at low T carry no verdict
    zder = [(z, z_derivatives(model, z, ts[-1])) for z in zs]

    if not model.extensive:
        notes.append("model is not extensive and its entropy is not monotone under adiabatic "
                     "processes; equivalence of zero-temperature states is not implied, and the "
                     "verdict describes the computed residuals only")

    divergent = [est for est in estimates if est.is_divergent]
    if divergent:
        notes.append(f"{len(divergent)} of {len(zs)} grid points diverge as T -> 0 "
                     f"(log-slope {divergent[0].slope:.6g})")
        return AuditReport(model.name, Verdict.CONTINUITY_FAILURE, residuals, None, trace,
                           stability, "; ".join(notes), zder, estimates)
    if any(est.classification is Classification.INCONCLUSIVE for est in estimates):
        notes.append("extrapolation inconclusive at some grid point")
        return AuditReport(model.name, Verdict.INCONCLUSIVE, residuals, None, trace,
                           stability, "; ".join(notes), zder, estimates)

    values = [[model.entropy(z, t) for t in ts] + [s0] for z, (_, s0) in zip(zs, residuals)]
    table = EntropyTable(model=model.name, z_names=model.z_names, z_grid=zs,
                         t_grid=ts + [0.0], values=values, size=model.size)
    check = check_third_law_table(table)
    if check.holds:
        notes.append("tabulated third-law inequality holds")
    else:
        z, zp, t1 = check.witness
        notes.append(f"tabulated third-law inequality fails: S({list(z)}, 0) > S({list(zp)}, {t1:.6g})")
    spread = planck_spread(table)
    verdict = (Verdict.COMPLIANT if spread.per_site_spread <= tolerance
               else Verdict.PLANCK_VIOLATION)
    return AuditReport(model.name, verdict, residuals, spread.spread, trace, stability,
                       "; ".join(notes), zder, estimates, table)


# ---------------------------------------------------------------------------
# Iterated N / J limits for the paramagnet family
# ---------------------------------------------------------------------------

DEFAULT_N_GRID = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_TWO_J_GRID = (1, 2, 4, 8, 16, 32, 64, 100)
ORDERS = ("N_then_J", "J_then_N")
_ORDER_ALIASES = {"NJ": "N_then_J", "JN": "J_then_N"}


def _derived_per_spin(N, two_j, b):
    return N * pm_quantum_entropy(two_j / 2.0, b) / N


def _printed_per_spin(N, two_j, b):
    return pm_printed_entropy(N, two_j / 2.0, b) / N


EXPRESSIONS = {"derived": _derived_per_spin, "printed": _printed_per_spin}


@dataclass
class ExpressionLimits:
    expression: str
    inner: list          # (grid value, LimitEstimate)
    outer: LimitEstimate
    min_value: float
    max_value: float


@dataclass
class IteratedLimitReport:
    order: str
    b: float
    N_grid: list
    two_j_grid: list
    expressions: dict
    classical_value: float
    classical_gaps: list  # (J, s_J(b) - ln(2J+1) - rotor(b))

    @property
    def sign_bounds_hold(self) -> bool:
        return self.expressions["derived"].min_value >= 0.0 and self.classical_value <= 0.0

    def rows(self):
        """Flat (expression, stage, parameter, classification, value, slope, residual) rows."""
        inner_name, outer_name = (("N", "J") if self.order == "N_then_J" else ("J", "N"))
        out = []
        for name, res in self.expressions.items():
            for g, est in res.inner:
                out.append((name, f"{inner_name}-limit", f"{outer_name}={g}", est))
            out.append((name, f"{outer_name}-limit", "outer", res.outer))
        return out


def _propagate(inner):
    classes = {est.classification for _, est in inner}
    if len(classes) == 1 and next(iter(classes)) is not Classification.FINITE:
        return LimitEstimate(next(iter(classes)), model="propagated")
    return LimitEstimate(Classification.INCONCLUSIVE, model="propagated")


def iterated_limit_experiment(order: str, b: float = 1.0,
                              N_grid: Sequence[int] = DEFAULT_N_GRID,
                              two_j_grid: Sequence[int] = DEFAULT_TWO_J_GRID,
                              family: str = "paramagnet") -> IteratedLimitReport:
    """Per-spin paramagnet entropy taken to N -> infinity and J -> infinity in
    the given order, for both the factorized form and the non-factorized
    ("printed") closed form.

    The J stage is parametrized by the level count 2J+1, so slopes are per
    unit of ln(2J+1). When every inner limit diverges in the same direction
    the outer stage inherits that classification.
    """
    if family != "paramagnet":
        raise InputError(f"unsupported family {family!r}")
    order = _ORDER_ALIASES.get(order, order)
    if order not in ORDERS:
        raise InputError(f"order must be one of {ORDERS} or NJ/JN, got {order!r}")
    Ns = sorted(int(n) for n in N_grid)
    tjs = sorted(int(t) for t in two_j_grid)
    if len(Ns) < 4 or len(tjs) < 4:
        raise InputError("each grid needs at least 4 points")
    if Ns[-1] > 64 or tjs[-1] > 100:
        raise InputError("grids are limited to N <= 64 and J <= 50")

    results = {}
    for name, fn in EXPRESSIONS.items():
        grid = np.array([[fn(N, tj, b) for tj in tjs] for N in Ns])
        inner = []
        if order == "N_then_J":
            for j, tj in enumerate(tjs):
                est = extrapolate_limit([(1.0 / N, grid[i, j]) for i, N in enumerate(Ns)])
                inner.append((tj / 2.0, est))
            if all(est.is_finite for _, est in inner):
                outer = extrapolate_limit([(tj + 1.0, est.value) for tj, (_, est)
                                           in zip(tjs, inner)], toward_infinity=True)
            else:
                outer = _propagate(inner)
        else:
            for i, N in enumerate(Ns):
                est = extrapolate_limit([(tj + 1.0, grid[i, j]) for j, tj in enumerate(tjs)],
                                        toward_infinity=True)
                inner.append((N, est))
            if all(est.is_finite for _, est in inner):
                outer = extrapolate_limit([(1.0 / N, est.value) for N, (_, est)
                                           in zip(Ns, inner)])
            else:
                outer = _propagate(inner)
        results[name] = ExpressionLimits(name, inner, outer, float(grid.min()), float(grid.max()))

    classical = rotor_classical_entropy(b)
    gaps = [(tj / 2.0, pm_quantum_entropy(tj / 2.0, b) - math.log(tj + 1) - classical)
            for tj in tjs]
    return IteratedLimitReport(order, float(b), Ns, tjs, results, classical, gaps)
