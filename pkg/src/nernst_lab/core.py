"""State-space and model abstractions with executable entropy-principle checks.

Entropies are in natural units (k = 1, nats). A table's zero-temperature
row may hold ``NEG_INFINITY`` to record a classical divergence; every
other table entry must be finite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional

import numpy as np

from .errors import ContinuityFailure, DomainError, InputError

NEG_INFINITY = float("-inf")
NEG_INFINITY_TEXT = "-inf"


@dataclass(frozen=True)
class ThermoState:
    """A point (Z, T); T = 0 appears only in closure tables."""

    Z: tuple
    T: float

    def __post_init__(self):
        object.__setattr__(self, "Z", tuple(float(z) for z in np.atleast_1d(self.Z)))
        T = float(self.T)
        if not (T >= 0.0) or math.isinf(T):
            raise DomainError(f"temperature must be finite and >= 0, got T={self.T}", "T")
        object.__setattr__(self, "T", T)


@dataclass(frozen=True)
class Coordinate:
    name: str
    lower: float = -math.inf
    upper: float = math.inf
    open_lower: bool = False

    def contains(self, value: float) -> bool:
        if not math.isfinite(value):
            return False
        if self.open_lower and value <= self.lower:
            return False
        return self.lower <= value <= self.upper


class EntropyModel:
    """Contract shared by every concrete model.

    Subclasses set ``name``, ``z_space``, ``size``, ``extensive`` and ``kind``
    and implement :meth:`_entropy`, the total entropy at a validated state.
    """

    name: str = "model"
    z_space: tuple[Coordinate, ...] = ()
    size: float = 1.0
    extensive: bool = True
    kind: str = "quantum"

    @property
    def z_names(self) -> list[str]:
        return [c.name for c in self.z_space]

    def validate(self, Z, T) -> tuple:
        Z = tuple(float(z) for z in np.atleast_1d(Z))
        if len(Z) != len(self.z_space):
            raise DomainError(
                f"{self.name}: expected {len(self.z_space)} coordinates "
                f"{self.z_names}, got {len(Z)}", "Z")
        for coord, value in zip(self.z_space, Z):
            if not coord.contains(value):
                raise DomainError(f"{self.name}: coordinate {coord.name}={value} out of domain",
                                  coord.name)
        T = float(T)
        if not (T > 0.0) or not math.isfinite(T):
            raise DomainError(f"{self.name}: temperature must be > 0, got T={T}", "T")
        return Z

    def entropy(self, Z, T) -> float:
        Z = self.validate(Z, T)
        return float(self._entropy(Z, float(T)))

    def _entropy(self, Z: tuple, T: float) -> float:
        raise NotImplementedError

    def t_scale(self, Z) -> float:
        """Natural temperature unit at Z, used for default temperature grids."""
        return 1.0

    def describe(self) -> dict:
        return {"model": self.name}


def evaluate_entropy(model: EntropyModel, state: ThermoState) -> float:
    """Total entropy of ``model`` at ``state`` (k = 1)."""
    return model.entropy(state.Z, state.T)


# ---------------------------------------------------------------------------
# Accessibility structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str  # equivalence | strict_order | extensivity | third_law
    states: tuple
    detail: str = ""


@dataclass
class AccessibilityStructure:
    """Finite set of states with strict accessibility edges, adiabatic
    equivalences and scaled copies ``(X, t, X_t)``."""

    states: frozenset
    strict_edges: frozenset = frozenset()
    equiv_pairs: frozenset = frozenset()
    scalings: tuple = ()

    def __post_init__(self):
        self.states = frozenset(self.states)
        self.strict_edges = frozenset(tuple(e) for e in self.strict_edges)
        self.equiv_pairs = frozenset(frozenset(p) for p in self.equiv_pairs)
        self.scalings = tuple(tuple(s) for s in self.scalings)
        for x, y in self.strict_edges:
            if x == y:
                raise InputError(f"strict edge ({x!r}, {y!r}) is reflexive")
        for x, y in self.strict_edges:
            if frozenset((x, y)) in self.equiv_pairs:
                raise InputError(f"pair ({x!r}, {y!r}) is both strict and equivalent")
        for pair in self.equiv_pairs:
            if len(pair) not in (1, 2):
                raise InputError(f"malformed equivalence pair {set(pair)!r}")

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> "AccessibilityStructure":
        m = lambda s: mapping.get(s, s)  # noqa: E731
        return AccessibilityStructure(
            states=frozenset(m(s) for s in self.states),
            strict_edges=frozenset((m(x), m(y)) for x, y in self.strict_edges),
            equiv_pairs=frozenset(frozenset(m(s) for s in p) for p in self.equiv_pairs),
            scalings=tuple((m(x), t, m(xt)) for x, t, xt in self.scalings),
        )


def _lookup(S, state):
    try:
        value = S[state]
    except KeyError:
        raise InputError(f"state {state!r} has no entropy value") from None
    value = float(value)
    if not math.isfinite(value):
        raise InputError(f"entropy of {state!r} is not finite")
    return value


def check_entropy_principle(s: AccessibilityStructure, S: Mapping, tol: float = 1e-12) -> list[Violation]:
    """Pairs violating equal entropy for equivalent states or strict increase
    along strict edges. Empty list means the assignment complies."""
    out = []
    for pair in sorted(s.equiv_pairs, key=lambda p: sorted(map(repr, p))):
        members = sorted(pair, key=repr)
        x, y = members[0], members[-1]
        sx, sy = _lookup(S, x), _lookup(S, y)
        if abs(sx - sy) > tol:
            out.append(Violation("equivalence", (x, y), f"S={sx!r} vs S={sy!r}"))
    for x, y in sorted(s.strict_edges, key=repr):
        sx, sy = _lookup(S, x), _lookup(S, y)
        if not sx < sy:
            out.append(Violation("strict_order", (x, y), f"S(X)={sx!r} >= S(Y)={sy!r}"))
    return out


def check_extensivity(s: AccessibilityStructure, S: Mapping, tol: float = 1e-12) -> list[Violation]:
    """Scaled copies whose entropy departs from ``t * S(X)``."""
    out = []
    for x, t, xt in s.scalings:
        t = float(t)
        if not t > 0:
            raise InputError(f"scaling factor must be positive, got t={t}")
        for st in (x, xt):
            if st not in s.states:
                raise InputError(f"scaling references unknown state {st!r}")
        target = t * _lookup(S, x)
        actual = _lookup(S, xt)
        if abs(actual - target) > tol * max(1.0, abs(target)):
            out.append(Violation("extensivity", (x, t, xt), f"{actual!r} != {target!r}"))
    return out


# ---------------------------------------------------------------------------
# Entropy tables
# ---------------------------------------------------------------------------

@dataclass
class EntropyTable:
    """Entropy on a grid of Z points and descending temperatures ending at 0.

    ``values[i, j]`` is S(z_grid[i], t_grid[j]).
    """

    model: str
    z_names: list
    z_grid: list
    t_grid: list
    values: np.ndarray
    size: float = 1.0

    def __post_init__(self):
        self.z_grid = [tuple(float(c) for c in np.atleast_1d(z)) for z in self.z_grid]
        self.t_grid = [float(t) for t in self.t_grid]
        self.values = np.array(self.values, dtype=float)
        self.z_names = list(self.z_names)
        if not self.z_grid:
            raise InputError("table has an empty Z grid")
        if len(self.t_grid) < 2:
            raise InputError("table needs at least one positive temperature and T=0")
        if self.t_grid[-1] != 0.0:
            raise InputError("last temperature of the table must be 0")
        if any(b >= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise InputError("temperature grid must be strictly decreasing")
        if self.values.shape != (len(self.z_grid), len(self.t_grid)):
            raise InputError(f"values shape {self.values.shape} does not match grid "
                             f"{(len(self.z_grid), len(self.t_grid))}")
        for z in self.z_grid:
            if len(z) != len(self.z_names):
                raise InputError(f"Z point {z} does not match names {self.z_names}")
        live = self.values[:, :-1]
        if not np.all(np.isfinite(live)):
            raise InputError("entries at T > 0 must be finite")
        zero = self.values[:, -1]
        if np.any(np.isnan(zero)) or np.any(zero == math.inf):
            raise InputError("T=0 entries must be finite or NEG_INFINITY")

    @property
    def zero_row(self) -> np.ndarray:
        return self.values[:, -1]

    def to_dict(self) -> dict:
        def enc(x):
            return NEG_INFINITY_TEXT if x == NEG_INFINITY else float(x)

        return {
            "model": self.model,
            "size": float(self.size),
            "z_names": list(self.z_names),
            "z_grid": [list(z) for z in self.z_grid],
            "t_grid": list(self.t_grid),
            "values": [[enc(x) for x in row] for row in self.values],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EntropyTable":
        def dec(x):
            if isinstance(x, str):
                if x != NEG_INFINITY_TEXT:
                    raise InputError(f"unknown table marker {x!r}")
                return NEG_INFINITY
            return float(x)

        try:
            return cls(model=d["model"], z_names=d["z_names"], z_grid=d["z_grid"],
                       t_grid=d["t_grid"], values=[[dec(x) for x in row] for row in d["values"]],
                       size=d.get("size", 1.0))
        except KeyError as exc:
            raise InputError(f"table document lacks key {exc.args[0]!r}") from None

    def to_json(self) -> str:
        from .io import dumps

        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EntropyTable":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed table JSON: {exc}") from None


@dataclass(frozen=True)
class ThirdLawCheck:
    holds: bool
    witness: Optional[tuple] = None  # (Z, Z', T1)


def check_third_law_table(table: EntropyTable, atol: float = 1e-12) -> ThirdLawCheck:
    """Tabulated form of the third-law inequality S(Z, 0) <= S(Z', T1).

    Checked for every Z, Z' in the grid and every positive T1. ``atol``
    absorbs floating-point noise around zero. The witness is the first
    violation in (Z, Z', T1) grid order.
    """
    zero = table.zero_row
    live = table.values[:, :-1]
    temps = table.t_grid[:-1]
    for i, z in enumerate(table.z_grid):
        s0 = zero[i]
        if s0 == NEG_INFINITY:
            continue
        for k, zp in enumerate(table.z_grid):
            for j, t1 in enumerate(temps):
                if s0 > live[k, j] + atol:
                    return ThirdLawCheck(False, (z, zp, t1))
    return ThirdLawCheck(True)


@dataclass(frozen=True)
class PlanckSpread:
    spread: float
    per_site_spread: float


def planck_spread(table: EntropyTable) -> PlanckSpread:
    """Spread of the zero-temperature entropy over the Z grid.

    Zero spread means all zero-temperature states carry equal entropy.

    Raises
    ------
    ContinuityFailure
        The T = 0 row contains ``NEG_INFINITY``.
    """
    zero = table.zero_row
    if np.any(zero == NEG_INFINITY):
        raise ContinuityFailure("zero-temperature entropy diverges; Planck spread undefined")
    spread = float(np.max(zero) - np.min(zero))
    return PlanckSpread(spread, spread / float(table.size))

