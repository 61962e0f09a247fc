"""Kerr-Newman black-hole thermodynamics in geometric units (G = c = hbar = k = 1).

The temperature is inverted on two branches. ``near_extremal`` runs from the
extremal surface (T = 0) up to the single temperature maximum, and
``large_mass`` runs from that maximum toward the Schwarzschild-like regime.
Both inversions are parametrized by the horizon half-separation
``rho = sqrt(M^2 - a^2 - Q^2)``, for which M has a closed form at fixed
(J, Q), so near-extremal roots keep full precision.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from .core import Coordinate, EntropyModel
from .errors import (DomainError, InstabilityRegionError, NoSolutionError,
                     StepSizeError)
from .numerics import brent_root, finite_diff, golden_section_max

EXTREMAL_RTOL = 1e-14
BRANCHES = ("near_extremal", "large_mass")


@dataclass(frozen=True)
class KNParams:
    M: float
    J: float = 0.0
    Q: float = 0.0

    def __post_init__(self):
        for name in ("M", "J", "Q"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite", name)
        if not self.M > 0:
            raise DomainError(f"mass must be positive, got M={self.M}", "M")
        if self.J < 0:
            raise DomainError(f"angular momentum must be >= 0, got J={self.J}", "J")


@dataclass(frozen=True)
class KNDerived:
    M: float
    J: float
    Q: float
    a: float
    r_plus: float
    r_minus: float
    kappa: float
    alpha: float
    area: float
    S_B: float
    Omega: float
    T: float
    Phi: float

    def to_dict(self) -> dict:
        return asdict(self)


def _discriminant(M, J, Q):
    a = J / M
    disc = M * M - a * a - Q * Q
    if abs(disc) <= EXTREMAL_RTOL * M * M:
        disc = 0.0
    return a, disc


def _derived_raw(M, J, Q):
    a, disc = _discriminant(M, J, Q)
    if disc < 0:
        raise InstabilityRegionError(
            f"M^2 < a^2 + Q^2 (M={M}, J={J}, Q={Q}): no horizon, rapidly rotating regime", "M")
    root = math.sqrt(disc)
    r_plus, r_minus = M + root, M - root
    alpha = r_plus * r_plus + a * a
    kappa = (r_plus - r_minus) / (2.0 * alpha)
    return KNDerived(M=M, J=J, Q=Q, a=a, r_plus=r_plus, r_minus=r_minus, kappa=kappa,
                     alpha=alpha, area=4.0 * math.pi * alpha, S_B=math.pi * alpha,
                     Omega=a / alpha, T=kappa / (2.0 * math.pi), Phi=Q * r_plus / alpha)


def kn_derived(p: KNParams) -> KNDerived:
    """Horizon radii, surface gravity, area, entropy, angular velocity,
    Hawking temperature and electric potential ``Phi = Q r_+ / (r_+^2 + a^2)``.

    Raises
    ------
    InstabilityRegionError
        If ``M^2 < a^2 + Q^2`` beyond the extremality threshold.
    """
    return _derived_raw(float(p.M), float(p.J), float(p.Q))


def kn_temperature(M: float, J: float, Q: float) -> float:
    return _derived_raw(M, J, Q).T


def kn_entropy(M: float, J: float, Q: float) -> float:
    return _derived_raw(M, J, Q).S_B


def kn_extremal_mass(J: float, Q: float) -> float:
    """Positive root of ``M^4 - Q^2 M^2 - J^2 = 0``; 0 for (J, Q) = (0, 0)."""
    J, Q = float(J), float(Q)
    q2 = Q * Q
    return math.sqrt((q2 + math.sqrt(q2 * q2 + 4.0 * J * J)) / 2.0)


def kn_residual_entropy(J: float, Q: float) -> float:
    """Zero-temperature limit of S_B along the near-extremal branch,
    ``pi (4J^2 / (Q^2 + sqrt(Q^4 + 4J^2)) + Q^2)``."""
    J, Q = float(J), float(Q)
    if J == 0.0 and Q == 0.0:
        raise DomainError("(J, Q) = (0, 0) has no extremal black hole of positive mass", "J")
    q2 = Q * Q
    return math.pi * (4.0 * J * J / (q2 + math.sqrt(q2 * q2 + 4.0 * J * J)) + q2)


# ---------------------------------------------------------------------------
# Temperature as a function of rho
# ---------------------------------------------------------------------------

def _mass_of_rho(rho, J, Q):
    c = Q * Q + rho * rho
    return math.sqrt((c + math.sqrt(c * c + 4.0 * J * J)) / 2.0)


def _alpha_of_rho(rho, J, Q):
    M = _mass_of_rho(rho, J, Q)
    return M, 2.0 * M * M + 2.0 * M * rho - Q * Q


def _temperature_of_rho(rho, J, Q):
    if rho == 0.0:
        return 0.0
    _, alpha = _alpha_of_rho(rho, J, Q)
    return rho / (2.0 * math.pi * alpha)


@lru_cache(maxsize=256)
def kn_temperature_max(J: float, Q: float) -> tuple[float, float]:
    """(rho*, T_max) of the single interior temperature maximum at fixed (J, Q),
    located by golden-section search. For (0, 0) the temperature is unbounded."""
    J, Q = float(J), abs(float(Q))
    if J == 0.0 and Q == 0.0:
        return 0.0, math.inf
    scale = kn_extremal_mass(J, Q)
    rho, t = golden_section_max(lambda r: _temperature_of_rho(r, J, Q), 0.0, 8.0 * scale)
    return rho, t


@dataclass(frozen=True)
class InversionResult:
    M: float
    S_B: float
    T: float
    branch: str


def kn_invert_temperature(T_target: float, J: float, Q: float,
                          branch: str = "near_extremal") -> InversionResult:
    """Mass and entropy at temperature ``T_target`` on the requested branch.

    Raises
    ------
    NoSolutionError
        ``T_target`` is not below the branch maximum (reported as ``t_max``).
    DomainError
        ``near_extremal`` requested for (J, Q) = (0, 0), or T <= 0.
    """
    if branch not in BRANCHES:
        raise DomainError(f"branch must be one of {BRANCHES}, got {branch!r}", "branch")
    T_target, J, Q = float(T_target), float(J), float(Q)
    if not T_target > 0 or not math.isfinite(T_target):
        raise DomainError(f"target temperature must be positive, got T={T_target}", "T")
    if J < 0:
        raise DomainError(f"angular momentum must be >= 0, got J={J}", "J")
    schwarzschild = J == 0.0 and Q == 0.0
    if schwarzschild and branch == "near_extremal":
        raise DomainError("(J, Q) = (0, 0) has no near-extremal branch", "branch")
    rho_star, t_max = kn_temperature_max(J, Q)
    if not T_target < t_max:
        raise NoSolutionError(f"T={T_target} is not below the branch maximum T_max={t_max}",
                              t_max=t_max)

    f = lambda r: _temperature_of_rho(r, J, Q) - T_target  # noqa: E731
    if branch == "near_extremal":
        rho = brent_root(f, 0.0, rho_star, tol=1e-300)
    else:
        lo = rho_star if not schwarzschild else 1.0 / (16.0 * math.pi * T_target)
        hi = max(2.0 * lo, 1e-300)
        while f(hi) > 0:
            lo, hi = hi, 2.0 * hi
        rho = brent_root(f, lo, hi, tol=1e-300)
    M, alpha = _alpha_of_rho(rho, J, Q)
    derived = _derived_raw(M, J, Q)
    return InversionResult(M=M, S_B=math.pi * alpha, T=derived.T, branch=branch)


# ---------------------------------------------------------------------------
# First law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FirstLawResidual:
    temperature: float  # |T dS/dM - 1|
    angular: float      # |(dM/dJ)_{S,Q} - Omega|
    electric: float     # |(dM/dQ)_{S,J} - Phi|

    def max(self) -> float:
        return max(self.temperature, self.angular, self.electric)


def kn_first_law_residual(p: KNParams, rel_step: float = 1e-4) -> FirstLawResidual:
    """Residuals of ``T dS = dM - Omega dJ - Phi dQ`` from finite differences of
    ``S_B(M, J, Q)``, using implicit differentiation at fixed entropy.

    Raises
    ------
    StepSizeError
        A stencil point falls outside the admissible region.
    """
    d = kn_derived(p)
    if d.T == 0.0:
        raise StepSizeError("extremal point: finite-difference stencil leaves the domain")
    M, J, Q = d.M, d.J, d.Q

    def S(m, j, q):
        a, disc = _discriminant(m, j, q)
        if disc <= 0:
            raise StepSizeError(f"stencil point (M={m}, J={j}, Q={q}) is not sub-extremal")
        return math.pi * ((m + math.sqrt(disc)) ** 2 + a * a)

    hM, hJ, hQ = rel_step * M, rel_step * M * M, rel_step * M
    dS_dM = finite_diff(lambda m: S(m, J, Q), M, hM, richardson=True)
    dS_dJ = finite_diff(lambda j: S(M, j, Q), J, hJ, richardson=True)
    dS_dQ = finite_diff(lambda q: S(M, J, q), Q, hQ, richardson=True)
    return FirstLawResidual(temperature=abs(d.T * dS_dM - 1.0),
                            angular=abs(-dS_dJ / dS_dM - d.Omega),
                            electric=abs(-dS_dQ / dS_dM - d.Phi))


# ---------------------------------------------------------------------------
# EntropyModel adapter
# ---------------------------------------------------------------------------

class KerrNewmanModel(EntropyModel):
    """Bekenstein-Hawking entropy S_B(T; J, Q) on one temperature branch.

    Not extensive: under (M, J, Q) -> (sM, s^2 J, sQ) the entropy scales as s^2.
    """

    kind = "geometric"
    extensive = False
    name = "kerr-newman"

    def __init__(self, branch: str = "near_extremal"):
        if branch not in BRANCHES:
            raise DomainError(f"branch must be one of {BRANCHES}, got {branch!r}", "branch")
        self.branch = branch
        self.size = 1.0
        self.z_space = (Coordinate("J", 0.0, math.inf), Coordinate("Q"))

    def _entropy(self, Z, T):
        return kn_invert_temperature(T, Z[0], Z[1], self.branch).S_B

    def t_scale(self, Z):
        J, Q = Z
        return 0.5 * kn_temperature_max(float(J), float(Q))[1]

    def describe(self):
        return {"model": self.name, "branch": self.branch}
