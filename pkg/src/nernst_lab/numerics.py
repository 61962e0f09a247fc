"""Numerical kernels shared by the physics modules.

Quadrature, dense symmetric eigenvalues, modified spherical Bessel
functions, bracketed root finding, finite differences and the
sequence-limit extrapolator that decides between a finite limit and a
logarithmic divergence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, asdict
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import BracketError, DomainError, EvaluationError, InputError

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1].

    Parameters
    ----------
    n : int
        Number of nodes, 1 <= n <= 256.

    Returns
    -------
    nodes, weights : ndarray
        Nodes in strictly increasing order; the rule integrates
        polynomials of degree ``2n - 1`` exactly.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InputError(f"number of nodes must be an integer, got {n!r}")
    if not 1 <= n <= 256:
        raise InputError(f"number of nodes must lie in [1, 256], got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(int(n))
    return nodes, weights


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

def _check_symmetric(A, max_dim):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > max_dim:
        raise InputError(f"dimension {A.shape[0]} exceeds limit {max_dim}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > 1e-12 * scale:
        raise InputError("matrix is not symmetric within 1e-12")
    return 0.5 * (A + A.T)


def jacobi_eigenvalues(A, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Ascending eigenvalues of a small symmetric matrix by cyclic Jacobi rotations."""
    A = _check_symmetric(A, 256).copy()
    n = A.shape[0]
    if n <= 1:
        return np.diag(A).copy()
    total = np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= tol * max(total, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- R^T A R with R the (p, q) plane rotation
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
    return np.sort(np.diag(A))


def sym_eigenvalues(A, method: str = "lapack") -> np.ndarray:
    """Ascending spectrum of a real symmetric matrix of dimension <= 1024.

    ``method="lapack"`` uses the tridiagonal LAPACK driver;
    ``method="jacobi"`` runs cyclic Jacobi rotations (dimension <= 256).
    """
    if method == "jacobi":
        return jacobi_eigenvalues(A)
    if method != "lapack":
        raise InputError(f"unknown eigenvalue method {method!r}")
    A = _check_symmetric(A, 1024)
    return np.linalg.eigvalsh(A)


# ---------------------------------------------------------------------------
# Modified spherical Bessel functions
# ---------------------------------------------------------------------------

def bessel_i_sph(l_max: int, x: float, scaled: bool = False) -> np.ndarray:
    """Modified spherical Bessel functions of the first kind i_0..i_{l_max}.

    The ratios ``i_l / i_{l-1}`` come from the downward recurrence
    ``i_{l-1} = i_{l+1} + (2l+1)/x * i_l`` started well above ``l_max``
    and the sequence is normalized by ``i_0(x) = sinh(x)/x``. The upward
    closed forms lose all digits for l >= 3 at moderate x and are not used.

    With ``scaled=True`` the values are multiplied by ``exp(-x)``, which
    keeps large arguments finite. Entries below the float range are 0.
    """
    if not isinstance(l_max, (int, np.integer)) or l_max < 0 or l_max > 200:
        raise InputError(f"l_max must be an integer in [0, 200], got {l_max!r}")
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"bessel argument must be positive and finite, got x={x}", "x")

    # start index: past both l_max and the turning region l ~ sqrt(x)..x
    start = int(l_max + 40 + 4 * math.sqrt(max(x, 1.0)) + min(x, 2000.0) / 4)
    ratio = np.zeros(l_max + 1)
    r = 0.0
    for l in range(start, 0, -1):
        r = 1.0 / ((2 * l + 1) / x + r)
        if l <= l_max:
            ratio[l] = r

    if scaled:
        i0 = -math.expm1(-2.0 * x) / (2.0 * x)
    else:
        if x > 700.0:
            raise EvaluationError(f"i_0({x}) overflows; use scaled=True")
        i0 = math.sinh(x) / x
    out = np.empty(l_max + 1)
    out[0] = i0
    for l in range(1, l_max + 1):
        out[l] = out[l - 1] * ratio[l]
    return out


# ---------------------------------------------------------------------------
# Root finding and optimization
# ---------------------------------------------------------------------------

def _finite_call(f, x):
    y = f(x)
    y = float(y)
    if not math.isfinite(y):
        raise EvaluationError(f"function returned {y} at x={x!r}")
    return y


def brent_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14) -> float:
    """Root of ``f`` on ``[lo, hi]`` by Brent's method.

    Raises
    ------
    BracketError
        ``f(lo)`` and ``f(hi)`` have the same sign.
    EvaluationError
        ``f`` produced a non-finite value.
    """
    lo, hi = float(lo), float(hi)
    if lo > hi:
        lo, hi = hi, lo
    flo = _finite_call(f, lo)
    fhi = _finite_call(f, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}"
        )
    return float(optimize.brentq(lambda t: _finite_call(f, t), lo, hi,
                                 xtol=tol, rtol=4 * _EPS, maxiter=500))


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-13, max_iter: int = 400) -> tuple[float, float]:
    """Location and value of the maximum of a unimodal ``f`` on ``[lo, hi]``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = _finite_call(f, c), _finite_call(f, d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _finite_call(f, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _finite_call(f, d)
    x = 0.5 * (a + b)
    return x, _finite_call(f, x)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def default_step(x: float) -> float:
    return max(1e-6, 1e-6 * abs(x))


def finite_diff(f: Callable[[float], float], x: float, h: Optional[float] = None,
                richardson: bool = False) -> float:
    """Central difference ``(f(x+h) - f(x-h)) / 2h``.

    With ``richardson=True`` the step-h and step-h/2 estimates are combined
    as ``(4 D(h/2) - D(h)) / 3``, cancelling the O(h^2) error term.
    """
    if h is None:
        h = default_step(x)
    if not h > 0:
        raise InputError(f"step must be positive, got h={h}")

    def central(step):
        return (_finite_call(f, x + step) - _finite_call(f, x - step)) / (2.0 * step)

    d1 = central(h)
    if not richardson:
        return d1
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


# ---------------------------------------------------------------------------
# Limit extrapolation
# ---------------------------------------------------------------------------

class Classification(str, enum.Enum):
    FINITE = "FINITE"
    DIVERGES_NEG = "DIVERGES_NEG"
    DIVERGES_POS = "DIVERGES_POS"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LimitEstimate:
    """Outcome of :func:`extrapolate_limit`.

    ``slope`` is the divergence rate d(value)/d ln(1/u), where u -> 0+ is
    the distance to the limit point (u = p for p -> 0, u = 1/p for
    p -> infinity). A logarithmic divergence to -infinity as T -> 0 such as
    ``ln T`` therefore has slope -1.
    """

    classification: Classification
    value: Optional[float] = None
    slope: Optional[float] = None
    residual: float = 0.0
    model: str = ""
    exponent: Optional[float] = None

    @property
    def is_finite(self) -> bool:
        return self.classification is Classification.FINITE

    @property
    def is_divergent(self) -> bool:
        return self.classification in (Classification.DIVERGES_NEG,
                                       Classification.DIVERGES_POS)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["classification"] = self.classification.value
        return d


def _lstsq_rms(columns, v):
    # columns are normalized so a near-constant basis stays well conditioned
    X = np.column_stack(columns)
    norms = np.max(np.abs(X), axis=0)
    norms[norms == 0] = 1.0
    coef, *_ = np.linalg.lstsq(X / norms, v, rcond=None)
    resid = v - (X / norms) @ coef
    return coef / norms, float(np.sqrt(np.mean(resid ** 2)))


def _fit_log(u, v):
    L = np.log(1.0 / u)
    coef, rms = _lstsq_rms([np.ones_like(u), L, u], v)
    return coef, rms


_Q_MIN, _Q_MAX = 0.25, 4.0
_SIMPLE_EXPONENTS = (0.5, 1.0, 1.5, 2.0, 3.0)


def _fit_algebraic(u, v):
    def rms_at(q):
        return _lstsq_rms([np.ones_like(u), u ** q], v)[1]

    qs = np.geomspace(_Q_MIN, _Q_MAX, 41)
    vals = [rms_at(q) for q in qs]
    k = int(np.argmin(vals))
    lo = qs[max(k - 1, 0)]
    hi = qs[min(k + 1, len(qs) - 1)]
    best_q, best = qs[k], vals[k]
    if hi > lo:
        res = optimize.minimize_scalar(rms_at, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-6})
        if res.fun < best:
            best_q, best = float(res.x), float(res.fun)
    coef, rms = _lstsq_rms([np.ones_like(u), u ** best_q], v)
    return float(best_q), coef, rms


def _neville_at_zero(w, v):
    # polynomial interpolation through (w_i, v_i) evaluated at w = 0
    p = list(map(float, v))
    w = list(map(float, w))
    n = len(p)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (w[i + m] * p[i] - w[i] * p[i + 1]) / (w[i + m] - w[i])
    return p[0]


def _richardson(u, v, q):
    w = u ** q
    k = min(len(u), 4)
    last = _neville_at_zero(w[-k:], v[-k:])
    if len(u) > k:
        prev = _neville_at_zero(w[-k - 1:-1], v[-k - 1:-1])
    else:
        prev = _neville_at_zero(w[-k + 1:], v[-k + 1:])
    return last, abs(last - prev)


def extrapolate_limit(samples: Sequence[tuple[float, float]],
                      toward_infinity: bool = False,
                      tail: Optional[int] = None) -> LimitEstimate:
    """Classify and extrapolate the limit of a sampled sequence.

    Parameters
    ----------
    samples : sequence of (parameter, value)
        At least four samples. The parameter decreases strictly toward 0,
        or increases strictly toward infinity when ``toward_infinity`` is set.
    toward_infinity : bool
        Direction flag for the parameter.
    tail : int, optional
        Number of trailing samples used in the fits. Defaults to the last
        half of the sequence (at least four).

    Returns
    -------
    LimitEstimate
        Two models are fitted to the tail: algebraic ``a + c u^q`` with
        ``q`` in [1/4, 4], and logarithmic ``a + s ln(1/u) + d u``. A
        divergence is reported only when the logarithmic model beats the
        algebraic one by a factor 10, its slope is significant and stable,
        and the tail moves monotonically in the slope's direction. A finite
        limit is the Richardson (Neville) extrapolation in ``u^q``, with q
        taken from the fit or a nearby simple exponent, whichever gives the
        most stable successive estimates. A tail whose steps have died out
        (exponential convergence) is FINITE at its last value. Otherwise
        INCONCLUSIVE when neither model has residual below 10% of the tail
        spread.
    """
    if len(samples) < 4:
        raise InputError(f"need at least 4 samples, got {len(samples)}")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("samples must be (parameter, value) pairs")
    p, v = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(p)) or np.any(p <= 0):
        raise InputError("parameters must be positive and finite")
    if not np.all(np.isfinite(v)):
        raise EvaluationError("sample values must be finite")
    dp = np.diff(p)
    if toward_infinity:
        if not np.all(dp > 0):
            raise InputError("parameter must increase strictly toward infinity")
        u = 1.0 / p
    else:
        if not np.all(dp < 0):
            raise InputError("parameter must decrease strictly toward 0")
        u = p

    m = tail if tail is not None else max(4, (len(v) + 1) // 2)
    m = min(max(m, 4), len(v))
    ut, vt = u[-m:], v[-m:]
    scale = float(np.max(np.abs(vt)))
    noise = 256 * _EPS * max(scale, 1e-300)
    spread = float(np.max(vt) - np.min(vt))
    if spread <= noise:
        return LimitEstimate(Classification.FINITE, value=float(vt[-1]),
                             residual=spread, model="constant")

    log_coef, rms_log = _fit_log(ut, vt)
    q, _, rms_alg = _fit_algebraic(ut, vt)
    eff_log, eff_alg = max(rms_log, noise), max(rms_alg, noise)

    if min(rms_log, rms_alg) > 0.1 * spread:
        # exponentially fast convergence defeats both models; accept it when
        # the steps die out to a negligible fraction of the tail spread
        steps = np.abs(np.diff(vt))
        if steps[-1] <= max(1e-6 * spread, noise) and steps[-1] <= steps[0]:
            return LimitEstimate(Classification.FINITE, value=float(vt[-1]),
                                 residual=float(steps[-1]), model="converged")
        return LimitEstimate(Classification.INCONCLUSIVE,
                             residual=min(rms_log, rms_alg), model="none")

    slope = float(log_coef[1])
    L = np.log(1.0 / ut)
    span = float(L.max() - L.min())
    significant = abs(slope) * span > 10.0 * eff_log
    if 10.0 * eff_log < eff_alg and significant:
        last4, _ = _fit_log(ut[-4:], vt[-4:])
        stable = abs(last4[1] - slope) <= 0.1 * abs(slope)
        steps = np.diff(vt)
        monotone = np.all(steps * np.sign(slope) > 0)
        if stable and monotone:
            cls = Classification.DIVERGES_POS if slope > 0 else Classification.DIVERGES_NEG
            return LimitEstimate(cls, slope=slope, residual=rms_log, model="logarithmic")
        return LimitEstimate(Classification.INCONCLUSIVE, slope=slope,
                             residual=rms_log, model="logarithmic")

    if rms_alg > 0.1 * spread:
        return LimitEstimate(Classification.INCONCLUSIVE, residual=rms_alg, model="algebraic")
    # higher-order terms bias the fitted exponent; simple exponents compete on
    # the stability of successive Richardson estimates
    best = None
    for cand in (q,) + _SIMPLE_EXPONENTS:
        value, change = _richardson(ut, vt, cand)
        if best is None or change < best[1]:
            best = (value, change, cand)
    value, change, q = best
    return LimitEstimate(Classification.FINITE, value=float(value),
                         residual=max(change, rms_alg), model="algebraic", exponent=q)
