"""Quantum and classical spin models with closed-form entropies and oracles.

Conventions
-----------
* k = 1. ``b = B/T`` for the field models and ``x = lambda/T`` for the chains.
* Classical entropies use the normalized single-spin measure
  ``sin(theta) dtheta dphi / 4pi``. Under this measure a classical entropy is
  never positive. Expressions written with an extra ``ln 4pi`` per site
  differ from these by :data:`MEASURE_OFFSET`.
* Spin quantum numbers are carried as ``two_j = 2J`` (a positive integer).
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .core import Coordinate, EntropyModel
from .errors import DomainError, InputError
from .numerics import bessel_i_sph, gauss_legendre, sym_eigenvalues

MEASURE_OFFSET = math.log(4.0 * math.pi)

PARAMAGNET_TRACE_MAX_DIM = 4096
HEISENBERG_QUANTUM_MAX_DIM = 1024


def two_j_of(J) -> int:
    """Convert a spin quantum number (0.5, 1, 1.5, ...) to the integer 2J."""
    twice = 2.0 * float(J)
    k = int(round(twice))
    if k < 1 or abs(twice - k) > 1e-12:
        raise DomainError(f"J must be a positive half-integer, got {J!r}", "J")
    return k


def _check_two_j(two_j) -> int:
    if isinstance(two_j, bool) or not isinstance(two_j, (int, np.integer)) or two_j < 1:
        raise DomainError(f"twoJ must be a positive integer, got {two_j!r}", "twoJ")
    return int(two_j)


def gibbs_entropy(energies, beta: float) -> float:
    """Von Neumann entropy -sum p ln p of Gibbs weights over a spectrum.

    The partition sum is written as ``1 + x`` with ``x`` the weight of every
    level but one ground level, so entropies near zero keep their relative
    accuracy.
    """
    E = np.asarray(energies, dtype=float).ravel()
    i0 = int(np.argmin(E))
    d = beta * (E - E[i0])
    w = np.exp(-d)
    x = float(np.sum(np.delete(w, i0)))
    mean_d = float(np.dot(w, d)) / (1.0 + x)
    return math.log1p(x) + mean_d


# ---------------------------------------------------------------------------
# Quantum paramagnet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamagnetSpec:
    N: int
    two_j: int
    B: float

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}", "N")
        _check_two_j(self.two_j)
        if not self.B > 0:
            raise DomainError(f"field must be positive, got B={self.B}", "B")

    @property
    def J(self) -> float:
        return self.two_j / 2.0

    @property
    def dim(self) -> int:
        return (self.two_j + 1) ** self.N


def _log1mexp(z: float) -> float:
    """ln(1 - exp(-z)) for z > 0."""
    return math.log1p(-math.exp(-z)) if z > math.log(2.0) else math.log(-math.expm1(-z))


def _level_stats(two_j: int, b: float):
    """ln(sum q^k), <k> for weights q^k, q = exp(-b/J), k = 0..2J."""
    n = two_j + 1
    y = 2.0 * b / two_j
    if y == 0.0:
        return math.log(n), two_j / 2.0
    log_sum = _log1mexp(n * y) - _log1mexp(y)
    mean_k = math.exp(-y) / -math.expm1(-y) - n * math.exp(-n * y) / -math.expm1(-n * y)
    return log_sum, mean_k


def pm_quantum_entropy(J, b: float) -> float:
    """Per-spin entropy of the spin-J paramagnet at ``b = B/T``.

    Uses the single-spin sum ``z_J(b) = sum_m exp(b m / J)`` written as a
    geometric series in ``exp(-b/J)``; the additive energy constant drops out.
    """
    two_j = two_j_of(J)
    b = float(b)
    if not b >= 0:
        raise DomainError(f"b must be >= 0, got {b}", "b")
    if math.isinf(b):
        return 0.0
    log_sum, mean_k = _level_stats(two_j, b)
    return log_sum + (2.0 * b / two_j) * mean_k


def pm_quantum_energy(J, B: float, T: float) -> float:
    """Per-spin mean energy ``-B (<m>/J + 1)``."""
    two_j = two_j_of(J)
    _, mean_k = _level_stats(two_j, B / T)
    return -B * (2.0 - 2.0 * mean_k / two_j)


def pm_spectrum(spec: ParamagnetSpec) -> np.ndarray:
    """All (2J+1)^N eigenvalues of the diagonal paramagnet Hamiltonian."""
    if spec.dim > PARAMAGNET_TRACE_MAX_DIM:
        raise DomainError(f"(2J+1)^N = {spec.dim} exceeds {PARAMAGNET_TRACE_MAX_DIM}", "N")
    J = spec.J
    m = -J + np.arange(spec.two_j + 1)
    single = -spec.B * (m / J + 1.0)
    total = np.zeros(1)
    for _ in range(spec.N):
        total = (total[:, None] + single[None, :]).ravel()
    return total


def pm_quantum_entropy_trace(spec: ParamagnetSpec, T: float) -> float:
    """Total paramagnet entropy from the explicit N-spin spectrum."""
    if not T > 0:
        raise DomainError(f"temperature must be > 0, got T={T}", "T")
    return gibbs_entropy(pm_spectrum(spec), 1.0 / T)


def _ln_expm1(X):
    return X + math.log1p(-math.exp(-X)) if X > 1.0 else math.log(math.expm1(X))


def pm_printed_entropy(N: int, J, b: float) -> float:
    """Total N-spin entropy from the closed form with N inside the
    exponentials, evaluated as written, for comparison against
    :func:`pm_quantum_entropy`. This
    expression is not intensive in N and is not the factorized result."""
    two_j = two_j_of(J)
    Jf = two_j / 2.0
    if not b > 0:
        raise DomainError(f"b must be > 0, got {b}", "b")
    X = N * b * (2.0 + 1.0 / Jf)
    Y = N * b / Jf
    return (_ln_expm1(X) - _ln_expm1(Y)
            - X / -math.expm1(-X)
            + Y * math.exp(-Y) / -math.expm1(-2.0 * Y))


# ---------------------------------------------------------------------------
# Classical rotors and the classical Heisenberg chain
# ---------------------------------------------------------------------------

def _langevin_coefficients(terms=14):
    # ln(sinh x/x) - x coth x = sum_n 4^n B_2n / (2n)! (1/(2n) - 1) x^{2n},
    # Bernoulli numbers built exactly so every coefficient is correctly rounded
    B = [Fraction(1)]
    for m in range(1, 2 * terms + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    c = [Fraction(4) ** n * B[2 * n] / math.factorial(2 * n) * (Fraction(1, 2 * n) - 1)
         for n in range(1, terms + 1)]
    return np.array([float(v) for v in reversed(c)])  # highest power first


_LANGEVIN_SERIES = _langevin_coefficients()


def langevin_entropy(x: float) -> float:
    """``ln(sinh x / x) - x coth x + 1``: entropy per classical unit vector
    with Boltzmann weight exp(x cos theta) under the normalized measure."""
    x = float(x)
    if x < 0:
        raise DomainError(f"argument must be >= 0, got {x}", "b")
    if x < 0.8:
        # the closed form cancels catastrophically here; the series converges
        # like (x/pi)^2 per term
        return float(np.polyval(_LANGEVIN_SERIES, x * x) * x * x)
    e2 = math.exp(-2.0 * x)
    return 1.0 - math.log(2.0 * x) + math.log1p(-e2) - 2.0 * x * e2 / -math.expm1(-2.0 * x)


def rotor_classical_entropy(b: float) -> float:
    """Per-rotor entropy at ``b = B/T``; non-positive, ~ 1 - ln(2b) for large b."""
    return langevin_entropy(b)


def rotor_printed_entropy(b: float) -> float:
    """Per-rotor entropy from the alternative closed form carrying ``ln 4pi``
    and a halved field argument; equals ``s(b/2) - 1 + ln 4pi``."""
    if not b > 0:
        raise DomainError(f"b must be > 0, got {b}", "b")
    return (-0.5 * b * (1.0 / math.tanh(b / 2.0) + 2.0) + math.log(4.0 * math.pi / b)
            + 1.5 * b + math.log(-math.expm1(-b)))


def _log_sinhc(x: float) -> float:
    """ln(sinh x / x), finite for every x > 0."""
    if x < 0.05:
        x2 = x * x
        return x2 * (1 / 6 + x2 * (-1 / 180 + x2 / 2835))
    return x - math.log(2.0 * x) + math.log1p(-math.exp(-2.0 * x))


def heis_classical_f_limit(beta: float, lam: float) -> float:
    """Infinite-chain free energy per site, normalized measure:
    ``f = -ln(sinh(beta lam) / (beta lam)) / beta``."""
    if not (beta > 0 and lam > 0):
        raise DomainError("beta and lambda must be positive", "beta" if not beta > 0 else "lambda")
    return -_log_sinhc(beta * lam) / beta


def heis_classical_f_limit_offset(beta: float, lam: float) -> float:
    """Same free energy in the ``+ ln(4pi)/beta`` convention."""
    return heis_classical_f_limit(beta, lam) + MEASURE_OFFSET / beta


def heis_classical_entropy_limit(beta: float, lam: float) -> float:
    """Infinite-chain entropy per site, ``-df/dT``; equals the rotor form at
    ``x = beta * lam``. Tends to ``1 - ln 2 - ln x`` as x grows."""
    if not (beta > 0 and lam > 0):
        raise DomainError("beta and lambda must be positive", "beta" if not beta > 0 else "lambda")
    return langevin_entropy(beta * lam)


ASYMPTOTIC_CONSTANT = 1.0 - math.log(2.0)
ASYMPTOTIC_CONSTANT_OFFSET = ASYMPTOTIC_CONSTANT - MEASURE_OFFSET  # = 1 - ln(8 pi)


def _resolve_bc(N: int, bc: Optional[str]) -> str:
    if bc is None:
        return "open" if N == 2 else "periodic"
    if bc not in ("periodic", "open"):
        raise InputError(f"boundary condition must be 'periodic' or 'open', got {bc!r}")
    return bc


def _n_bonds(N: int, bc: str) -> int:
    return N if bc == "periodic" else N - 1


def _transfer_terms(N, x, l_max):
    # scaled values e^{-x} i_l(x), one extra order for derivatives
    il = bessel_i_sph(min(l_max + 1, 200), x, scaled=True)
    if len(il) < l_max + 2:
        il = np.append(il, 0.0)
    l = np.arange(l_max + 1)
    terms = (2 * l + 1) * il[: l_max + 1] ** N
    return il, l, terms


def _periodic_l_max(N, x, l_max, tol=1e-14):
    if l_max is not None:
        il, l, terms = _transfer_terms(N, x, l_max)
        if terms[-1] >= tol * terms.sum():
            raise DomainError(f"transfer sum not converged at l_max={l_max} (x={x}, N={N})",
                              "l_max")
        return l_max
    il = bessel_i_sph(200, x, scaled=True)
    terms = (2 * np.arange(201) + 1) * il ** N
    total = terms.sum()
    small = np.nonzero(terms < tol * total)[0]
    small = small[small > 0]
    if small.size == 0 or small[0] >= 200:
        raise DomainError(f"transfer sum needs l_max > 200 (x={x}, N={N})", "l_max")
    return int(small[0])


def heis_classical_log_Z(N: int, x: float, bc: Optional[str] = "periodic",
                         l_max: Optional[int] = None) -> float:
    """ln of the normalized-measure partition function of the classical chain
    with ``x = beta * lambda``, from the spherical transfer expansion."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}", "N")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}", "x")
    bc = _resolve_bc(N, bc)
    if bc == "open":
        return (N - 1) * _log_sinhc(x)
    L = _periodic_l_max(N, x, l_max)
    _, _, terms = _transfer_terms(N, x, L)
    return N * x + math.log(terms.sum())


def heis_classical_Z_finite(N: int, x: float, bc: Optional[str] = "periodic",
                            l_max: Optional[int] = None) -> float:
    """Partition value ``sum_l (2l+1) i_l(x)^N`` (periodic) or ``i_0(x)^(N-1)`` (open).

    ``l_max`` defaults to the first order whose tail term falls below
    1e-14 of the sum.
    """
    return math.exp(heis_classical_log_Z(N, x, bc, l_max))


def heis_classical_entropy_finite(N: int, x: float, bc: Optional[str] = "periodic",
                                  l_max: Optional[int] = None) -> float:
    """Total entropy ``ln Z - x d(ln Z)/dx`` of the finite classical chain."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}", "x")
    bc = _resolve_bc(N, bc)
    log_z = heis_classical_log_Z(N, x, bc, l_max)
    if bc == "open":
        il = bessel_i_sph(1, x, scaled=True)
        dlog = (N - 1) * il[1] / il[0]
    else:
        L = _periodic_l_max(N, x, l_max)
        il, l, terms = _transfer_terms(N, x, L)
        deriv = il[1:L + 2] + (l / x) * il[: L + 1]
        dsum = np.sum((2 * l + 1) * N * il[: L + 1] ** (N - 1) * deriv)
        dlog = dsum / terms.sum()
    return log_z - x * dlog


# ---------------------------------------------------------------------------
# Classical quadrature and Monte Carlo oracles
# ---------------------------------------------------------------------------

CLASSICAL_MODELS = ("rotor", "heisenberg_classical")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    bound: float
    log_partition: float


def _check_classical(model, N, limit):
    if model not in CLASSICAL_MODELS:
        raise InputError(f"unknown classical model {model!r}; expected one of {CLASSICAL_MODELS}")
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}", "N")
    if N > limit:
        raise DomainError(f"N={N} exceeds the limit {limit}", "N")


def _grid_moments(model, N, x, nodes, bc, shift):
    """(ln Z, <h>) with h = -beta*H + shift on a Gauss-Legendre product grid."""
    c, w = gauss_legendre(nodes)
    w = w / 2.0  # normalized measure on cos(theta)
    if model == "rotor":
        dims = N
    else:
        if N == 1:
            h = x + shift  # single self-bond s.s = 1 (periodic) or no bond (open)
            return (h if bc == "periodic" else shift), (h if bc == "periodic" else shift)
        dims = N - 1  # first spin pinned to the pole by rotational invariance
    axes = np.ix_(*([c] * dims)) if dims > 1 else (c,)
    wts = np.ix_(*([w] * dims)) if dims > 1 else (w,)
    weight = np.ones([nodes] * dims)
    for wa in wts:
        weight = weight * wa

    if model == "rotor":
        h = sum(x * (ca + 1.0) for ca in axes) + np.zeros_like(weight)
        h_extra = np.zeros_like(weight)
        log_extra = np.zeros_like(weight)
    else:
        cs = list(axes)
        ss = [np.sqrt(np.maximum(1.0 - ca * ca, 0.0)) for ca in cs]
        if N == 2:
            nb = 2 if bc == "periodic" else 1
            h = nb * x * cs[0] + np.zeros_like(weight)
            h_extra = np.zeros_like(weight)
            log_extra = np.zeros_like(weight)
        else:
            # pole bonds s1.s2 and (periodic) sN.s1; interior bonds averaged over
            # their independent relative azimuths: <e^{y cos}> = I0(y)
            h = x * cs[0] + np.zeros_like(weight)
            if bc == "periodic":
                h = h + x * cs[-1]
            h_extra = np.zeros_like(weight)
            log_extra = np.zeros_like(weight)
            for i in range(dims - 1):
                h = h + x * cs[i] * cs[i + 1]
                y = x * ss[i] * ss[i + 1]
                i0e = special.i0e(y)
                log_extra = log_extra + y + np.log(i0e)
                h_extra = h_extra + y * special.i1e(y) / i0e
    h = h + shift
    g = h + log_extra
    gmax = float(np.max(g))
    p = weight * np.exp(g - gmax)
    Z = float(np.sum(p))
    mean_h = float(np.sum(p * (h + h_extra))) / Z
    return gmax + math.log(Z), mean_h


def classical_entropy_quadrature(model: str, N: int, beta: float, nodes: int = 48,
                                 coupling: float = 1.0, bc: Optional[str] = "periodic",
                                 shift: float = 0.0) -> QuadratureResult:
    """Tensor-product Gauss-Legendre value of ``-int delta ln delta``.

    Parameters
    ----------
    model : {"rotor", "heisenberg_classical"}
    N : int
        Number of spins, at most 4.
    beta : float
        Inverse temperature; the dimensionless coupling is ``beta * coupling``.
    nodes : int
        Nodes per cos(theta) axis, at most 64. Azimuths are integrated
        analytically; the Heisenberg ring pins one spin to the pole.
    shift : float
        Constant added to ``-beta*H``; the entropy does not depend on it.

    Returns
    -------
    QuadratureResult
        ``value``, the error ``bound`` estimated from a 3/4-node rerun, and
        ``log_partition`` (normalized measure, unshifted).
    """
    _check_classical(model, N, 4)
    if not 2 <= nodes <= 64:
        raise InputError(f"nodes must lie in [2, 64], got {nodes}")
    if not beta >= 0:
        raise DomainError(f"beta must be >= 0, got {beta}", "beta")
    bc = _resolve_bc(N, bc) if model != "rotor" else None
    x = beta * coupling

    def entropy(n):
        log_z, mean_h = _grid_moments(model, N, x, n, bc, shift)
        return log_z - mean_h, log_z - shift

    value, log_z = entropy(nodes)
    coarse, _ = entropy(max(2, (3 * nodes) // 4))
    return QuadratureResult(value, abs(value - coarse), log_z)


@dataclass(frozen=True)
class MonteCarloResult:
    value: float
    stderr: float
    samples: int


def _sample_h(model, N, x, n, rng, bc):
    if model == "rotor":
        c = rng.uniform(-1.0, 1.0, size=(n, N))
        return x * np.sum(c - 1.0, axis=1)
    cz = rng.uniform(-1.0, 1.0, size=(n, N))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=(n, N))
    s = np.sqrt(1.0 - cz * cz)
    v = np.stack([s * np.cos(phi), s * np.sin(phi), cz], axis=-1)
    if bc == "periodic":
        dots = np.sum(v * np.roll(v, -1, axis=1), axis=-1)
    else:
        dots = np.sum(v[:, :-1] * v[:, 1:], axis=-1)
    # h - h_max, h_max = x * (number of bonds)
    return x * np.sum(dots - 1.0, axis=1)


def _mc_estimate(h):
    w = np.exp(h)
    Z = float(np.mean(w))
    if Z == 0.0:
        return -math.inf
    return math.log(Z) - float(np.mean(w * h)) / Z


def classical_entropy_montecarlo(model: str, N: int, beta: float, samples: int, seed: int,
                                 coupling: float = 1.0, bc: Optional[str] = "periodic",
                                 batches: int = 20) -> MonteCarloResult:
    """Entropy ``<beta H> + ln Z`` from uniform samples of the normalized
    product measure, reweighted by the Boltzmann factor.

    Each batch draws from its own stream spawned from ``seed``; the
    standard error is the spread of the per-batch estimates.
    """
    _check_classical(model, N, 64)
    if samples < 10_000:
        raise InputError(f"need at least 10^4 samples, got {samples}")
    if batches < 2:
        raise InputError("need at least two batches")
    bc = _resolve_bc(N, bc) if model != "rotor" else None
    x = beta * coupling
    per = samples // batches
    streams = np.random.SeedSequence(seed).spawn(batches)
    hs = [_sample_h(model, N, x, per, np.random.default_rng(s), bc) for s in streams]
    estimates = np.array([_mc_estimate(h) for h in hs])
    value = _mc_estimate(np.concatenate(hs))
    stderr = float(np.std(estimates, ddof=1) / math.sqrt(batches))
    return MonteCarloResult(value, stderr, per * batches)


@dataclass(frozen=True)
class GibbsDensityReport:
    max_density: float
    exceeds_one: bool
    log_max_density: float
    shift_gap: float


def classical_density_report(model: str, N: int, beta: float, coupling: float = 1.0,
                             bc: Optional[str] = "periodic") -> GibbsDensityReport:
    """Largest value of the classical Gibbs density against the normalized
    measure, attained at the ground configuration.

    A value above 1 is what lets the classical entropy go negative.
    ``shift_gap`` is the change in the quadrature entropy when the ground
    energy is subtracted from H.
    """
    _check_classical(model, N, 4)
    x = beta * coupling
    if model == "rotor":
        per = 0.0 if x == 0 else math.log(2.0 * x / -math.expm1(-2.0 * x))
        log_max = N * per
        ground_h = 2.0 * x * N
    else:
        bc = _resolve_bc(N, bc)
        nb = _n_bonds(N, bc)
        ground_h = x * nb
        log_max = 0.0 if x == 0 else ground_h - heis_classical_log_Z(N, x, bc)
    plain = classical_entropy_quadrature(model, N, beta, 32, coupling, bc)
    shifted = classical_entropy_quadrature(model, N, beta, 32, coupling, bc, shift=-ground_h)
    max_density = math.exp(log_max) if log_max < 700 else math.inf
    return GibbsDensityReport(max_density, log_max > 0.0, log_max,
                              abs(plain.value - shifted.value))


# ---------------------------------------------------------------------------
# Quantum Heisenberg chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeisenbergSpec:
    """Spin-J chain ``H = -(lam/J^2) sum_i S_i . S_{i+1}``.

    ``bc=None`` selects open boundaries for N = 2 and periodic otherwise;
    a periodic N = 2 ring counts its single bond twice.
    """

    N: int
    two_j: int
    lam: float = 1.0
    bc: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}", "N")
        _check_two_j(self.two_j)
        if not self.lam > 0:
            raise DomainError(f"coupling must be positive, got lambda={self.lam}", "lambda")
        object.__setattr__(self, "bc", _resolve_bc(self.N, self.bc))

    @property
    def J(self) -> float:
        return self.two_j / 2.0

    @property
    def dim(self) -> int:
        return (self.two_j + 1) ** self.N

    @property
    def double_counted(self) -> bool:
        return self.N == 2 and self.bc == "periodic"

    def bonds(self) -> list[tuple[int, int]]:
        pairs = [(i, i + 1) for i in range(self.N - 1)]
        if self.bc == "periodic":
            pairs.append((self.N - 1, 0))
        return pairs


def spin_operators(two_j: int):
    """(S^z, S^+) for spin J in the basis m = J, J-1, ..., -J."""
    J = two_j / 2.0
    m = J - np.arange(two_j + 1)
    sz = np.diag(m)
    sp = np.zeros((two_j + 1, two_j + 1))
    for k in range(1, two_j + 1):
        # <m+1| S+ |m> with m = m[k]
        sp[k - 1, k] = math.sqrt(J * (J + 1) - m[k] * (m[k] + 1))
    return sz, sp


def _site_op(op, site, N, d):
    out = np.ones((1, 1))
    eye = np.eye(d)
    for i in range(N):
        out = np.kron(out, op if i == site else eye)
    return out


def heis_quantum_hamiltonian(spec: HeisenbergSpec) -> np.ndarray:
    if spec.dim > HEISENBERG_QUANTUM_MAX_DIM:
        raise DomainError(f"(2J+1)^N = {spec.dim} exceeds {HEISENBERG_QUANTUM_MAX_DIM}", "N")
    d = spec.two_j + 1
    sz, sp = spin_operators(spec.two_j)
    sm = sp.T
    Z = [_site_op(sz, i, spec.N, d) for i in range(spec.N)]
    P = [_site_op(sp, i, spec.N, d) for i in range(spec.N)]
    M = [_site_op(sm, i, spec.N, d) for i in range(spec.N)]
    H = np.zeros((spec.dim, spec.dim))
    for i, j in spec.bonds():
        H += Z[i] @ Z[j] + 0.5 * (P[i] @ M[j] + M[i] @ P[j])
    return -(spec.lam / spec.J ** 2) * H


def heis_quantum_spectrum(spec: HeisenbergSpec) -> np.ndarray:
    if spec.double_counted:
        warnings.warn("periodic N=2 chain counts its single bond twice", stacklevel=3)
    return sym_eigenvalues(heis_quantum_hamiltonian(spec))


def heis_quantum_entropy_small(spec: HeisenbergSpec, T: float) -> float:
    """Total von Neumann entropy of the chain by exact diagonalization."""
    if not T > 0:
        raise DomainError(f"temperature must be > 0, got T={T}", "T")
    return gibbs_entropy(heis_quantum_spectrum(spec), 1.0 / T)


# ---------------------------------------------------------------------------
# EntropyModel adapters
# ---------------------------------------------------------------------------

_POSITIVE = dict(lower=0.0, upper=math.inf, open_lower=True)


class ParamagnetModel(EntropyModel):
    """N independent spin-J moments in a field; Z = (B,)."""

    kind = "quantum"
    extensive = True

    def __init__(self, N: int = 1, two_j: int = 1):
        ParamagnetSpec(N, two_j, 1.0)
        self.N, self.two_j = int(N), int(two_j)
        self.name = "paramagnet"
        self.size = float(N)
        self.z_space = (Coordinate("B", **_POSITIVE),)

    def _entropy(self, Z, T):
        return self.N * pm_quantum_entropy(self.two_j / 2.0, Z[0] / T)

    def energy(self, Z, T):
        self.validate(Z, T)
        return self.N * pm_quantum_energy(self.two_j / 2.0, Z[0], T)

    def t_scale(self, Z):
        return float(np.atleast_1d(Z)[0])

    def describe(self):
        return {"model": self.name, "N": self.N, "twoJ": self.two_j}


class RotorModel(EntropyModel):
    """N independent classical unit vectors in a field; Z = (B,)."""

    kind = "classical"
    extensive = True

    def __init__(self, N: int = 1):
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
            raise DomainError(f"N must be a positive integer, got {N!r}", "N")
        self.N = int(N)
        self.name = "rotor"
        self.size = float(N)
        self.z_space = (Coordinate("B", **_POSITIVE),)

    def _entropy(self, Z, T):
        return self.N * rotor_classical_entropy(Z[0] / T)

    def t_scale(self, Z):
        return float(np.atleast_1d(Z)[0])

    def describe(self):
        return {"model": self.name, "N": self.N}


class ClassicalHeisenbergLimitModel(EntropyModel):
    """Infinite classical Heisenberg chain, entropy per site; Z = (lambda,)."""

    kind = "classical"
    extensive = True
    name = "heisenberg-classical"

    def __init__(self):
        self.size = 1.0
        self.z_space = (Coordinate("lambda", **_POSITIVE),)

    def _entropy(self, Z, T):
        return heis_classical_entropy_limit(1.0 / T, Z[0])

    def t_scale(self, Z):
        return float(np.atleast_1d(Z)[0])


class ClassicalHeisenbergChainModel(EntropyModel):
    """Finite classical chain via the transfer expansion; Z = (lambda,)."""

    kind = "classical"
    extensive = True
    name = "heisenberg-classical-chain"

    def __init__(self, N: int, bc: Optional[str] = "periodic"):
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
            raise DomainError(f"N must be a positive integer, got {N!r}", "N")
        self.N = int(N)
        self.bc = _resolve_bc(self.N, bc)
        self.size = float(N)
        self.z_space = (Coordinate("lambda", **_POSITIVE),)

    def _entropy(self, Z, T):
        return heis_classical_entropy_finite(self.N, Z[0] / T, self.bc)

    def t_scale(self, Z):
        return float(np.atleast_1d(Z)[0])

    def describe(self):
        return {"model": self.name, "N": self.N, "bc": self.bc}


class QuantumHeisenbergModel(EntropyModel):
    """Finite quantum chain by exact diagonalization; Z = (lambda,)."""

    kind = "quantum"
    extensive = True
    name = "heisenberg-quantum"

    def __init__(self, N: int, two_j: int = 1, bc: Optional[str] = None):
        spec = HeisenbergSpec(N, two_j, 1.0, bc)
        self.N, self.two_j, self.bc = spec.N, spec.two_j, spec.bc
        self.size = float(N)
        self.z_space = (Coordinate("lambda", **_POSITIVE),)
        self._spectra = {}

    def _entropy(self, Z, T):
        lam = Z[0]
        if lam not in self._spectra:
            self._spectra[lam] = heis_quantum_spectrum(
                HeisenbergSpec(self.N, self.two_j, lam, self.bc))
        return gibbs_entropy(self._spectra[lam], 1.0 / T)

    def t_scale(self, Z):
        return float(np.atleast_1d(Z)[0])

    def describe(self):
        return {"model": self.name, "N": self.N, "twoJ": self.two_j, "bc": self.bc}
