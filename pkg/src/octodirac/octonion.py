"""Octonions over the rationals.

Imaginary units multiply as ``e_M e_N = -delta_MN e_0 + C_MNK e_K`` with a
completely antisymmetric structure tensor ``C`` on indices 1..7; ``e_0`` is
the two-sided unit and everything extends bilinearly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations, permutations
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "StructureTensor",
    "StructureConstantError",
    "Octonion",
    "DEFAULT_TRIPLES",
    "load_triples",
    "build_structure_tensor",
    "default_tensor",
    "basis",
    "mul",
    "conj",
    "norm_sq",
    "inverse",
    "associator",
    "commutator",
    "anticommutator",
    "fano_problems",
    "alternativity_failures",
    "locate_sign_error",
    "random_octonion",
]

Triple = tuple[int, int, int]


class StructureConstantError(ValueError):
    """A structure-constant table is malformed or inconsistent.

    ``triple`` names the offending entry when one can be singled out.
    """

    def __init__(self, message: str, triple: Triple | None = None):
        super().__init__(message)
        self.triple = triple


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class StructureTensor:
    """Completely antisymmetric 7x7x7 tensor, indexed 1..7."""

    triples: tuple[Triple, ...]
    entries: tuple = field(repr=False)  # entries[M-1][N-1][K-1]

    def __getitem__(self, mnk: tuple[int, int, int]) -> int:
        m, n, k = mnk
        return self.entries[m - 1][n - 1][k - 1]

    def nonzero(self):
        for m in range(1, 8):
            for n in range(1, 8):
                for k in range(1, 8):
                    c = self.entries[m - 1][n - 1][k - 1]
                    if c:
                        yield (m, n, k), c

    @property
    def table(self):
        """Multiplication table: table[i][j] = [(k, coeff), ...] for e_i e_j, i, j in 0..7."""
        return _mult_table(self)


def _check_triple(t) -> Triple:
    t = tuple(t)
    if len(t) != 3 or not all(isinstance(i, int) for i in t):
        raise StructureConstantError(f"triple {t} must be three integers", t)
    if not all(1 <= i <= 7 for i in t):
        raise StructureConstantError(f"triple {t} has an index outside 1..7", t)
    if len(set(t)) != 3:
        raise StructureConstantError(f"triple {t} repeats an index", t)
    return t


def build_structure_tensor(triples: Iterable[Sequence[int]] | None = None) -> StructureTensor:
    """Antisymmetrize the listed triples (each set to +1) into a full tensor.

    Defaults to the shipped seven triples.  Raises
    :class:`StructureConstantError` for malformed triples or two triples
    that assign conflicting values to the same entry.
    """
    if triples is None:
        triples = DEFAULT_TRIPLES
    triples = tuple(_check_triple(t) for t in triples)
    c = [[[0] * 7 for _ in range(7)] for _ in range(7)]
    owner: dict[Triple, Triple] = {}
    for t in triples:
        for p in permutations(range(3)):
            idx = tuple(t[i] for i in p)
            s = _perm_sign(p)
            old = c[idx[0] - 1][idx[1] - 1][idx[2] - 1]
            if old and old != s:
                raise StructureConstantError(
                    f"triple {t} conflicts with triple {owner[idx]} on entry {idx}", t
                )
            c[idx[0] - 1][idx[1] - 1][idx[2] - 1] = s
            owner[idx] = t
    frozen = tuple(tuple(tuple(r) for r in plane) for plane in c)
    return StructureTensor(triples=triples, entries=frozen)


def load_triples(path: str | Path | None = None) -> list[Triple]:
    """Read structure-constant triples from a JSON file (``{"triples": [[1,2,3], ...]}``)."""
    if path is None:
        text = resources.files("octodirac.data").joinpath("structure_constants.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    return [tuple(t) for t in doc["triples"]]


DEFAULT_TRIPLES: tuple[Triple, ...] = tuple(load_triples())


@lru_cache(maxsize=None)
def default_tensor() -> StructureTensor:
    return build_structure_tensor(DEFAULT_TRIPLES)


@lru_cache(maxsize=32)
def _mult_table(c: StructureTensor):
    one = Fraction(1)
    table = [[[] for _ in range(8)] for _ in range(8)]
    for j in range(8):
        table[0][j] = [(j, one)]
        table[j][0] = [(j, one)]
    for m in range(1, 8):
        for n in range(1, 8):
            terms = []
            if m == n:
                terms.append((0, -one))
            for k in range(1, 8):
                v = c[m, n, k]
                if v:
                    terms.append((k, Fraction(v)))
            table[m][n] = terms
    return tuple(tuple(tuple(t) for t in row) for row in table)


def _coerce(x):
    if isinstance(x, (Fraction, float)):
        return x
    return Fraction(x)


class Octonion:
    """Eight coefficients over e_0..e_7 (e_0 first).

    Coefficients are normally exact rationals; floats are admitted so that
    float automorphisms can act, and they propagate through arithmetic.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (0,) * 8):
        coeffs = tuple(_coerce(x) for x in coeffs)
        if len(coeffs) != 8:
            raise ValueError(f"octonion needs 8 coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Octonion is immutable")

    @classmethod
    def unit(cls, i: int, c=1) -> "Octonion":
        v = [0] * 8
        v[i] = c
        return cls(v)

    @classmethod
    def real(cls, c) -> "Octonion":
        return cls.unit(0, c)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Octonion):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Octonion.real(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*e{i}" for i, c in enumerate(self.coeffs) if c]
        return "Octonion(" + (" + ".join(terms) if terms else "0") + ")"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                s = str(c)
            elif c == 1:
                s = f"e{i}"
            elif c == -1:
                s = f"-e{i}"
            elif isinstance(c, Fraction) and c.denominator == 1:
                s = f"{c}e{i}"
            else:
                s = f"({c})e{i}"
            terms.append(s)
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other):
        if not isinstance(other, Octonion):
            other = Octonion.real(other)
        return Octonion(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Octonion):
            other = Octonion.real(other)
        return Octonion(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return Octonion(-a for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return mul(self, other)
        return Octonion(a * other for a in self.coeffs)

    def __rmul__(self, other):
        return Octonion(other * a for a in self.coeffs)

    def __truediv__(self, c):
        return Octonion(a / c for a in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)


ZERO = Octonion()


def basis(i: int) -> Octonion:
    return Octonion.unit(i)


def random_octonion(rng, bound: int = 9, max_den: int = 7) -> Octonion:
    """Random rational octonion; ``rng`` is a ``random.Random``."""
    return Octonion(Fraction(rng.randint(-bound, bound), rng.randint(1, max_den)) for _ in range(8))


def mul(a: Octonion, b: Octonion, c: StructureTensor | None = None) -> Octonion:
    table = _mult_table(c or default_tensor())
    out = [0] * 8
    bc = b.coeffs
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        row = table[i]
        for j, y in enumerate(bc):
            if not y:
                continue
            xy = x * y
            for k, s in row[j]:
                out[k] += s * xy
    return Octonion(out)


def conj(a: Octonion) -> Octonion:
    c = a.coeffs
    return Octonion((c[0],) + tuple(-x for x in c[1:]))


def norm_sq(a: Octonion):
    return sum(x * x for x in a.coeffs)


def inverse(a: Octonion) -> Octonion:
    n = norm_sq(a)
    if n == 0:
        raise ZeroDivisionError("cannot invert the zero octonion")
    return conj(a) / n


def associator(a: Octonion, b: Octonion, c: Octonion, tensor: StructureTensor | None = None) -> Octonion:
    """Half the difference (ab)c - a(bc)."""
    left = mul(mul(a, b, tensor), c, tensor)
    right = mul(a, mul(b, c, tensor), tensor)
    return (left - right) / 2


def commutator(a: Octonion, b: Octonion, tensor: StructureTensor | None = None) -> Octonion:
    return mul(a, b, tensor) - mul(b, a, tensor)


def anticommutator(a: Octonion, b: Octonion, tensor: StructureTensor | None = None) -> Octonion:
    return mul(a, b, tensor) + mul(b, a, tensor)


# -- table diagnostics -------------------------------------------------------

def fano_problems(triples: Sequence[Triple]) -> list[str]:
    """Incidence problems: every pair of imaginary indices must lie in exactly one triple.

    Each message names the triple that conflicts with the most others, which
    for a single corrupted entry is the corrupted one.
    """
    problems = []
    if len(triples) != 7:
        problems.append(f"expected 7 triples, found {len(triples)}")
    pair_owner: dict[frozenset, list[Triple]] = {}
    for t in triples:
        for p in combinations(t, 2):
            pair_owner.setdefault(frozenset(p), []).append(t)
    clashes: dict[Triple, int] = {}
    for owners in pair_owner.values():
        if len(owners) > 1:
            for t in owners:
                clashes[t] = clashes.get(t, 0) + 1
    if clashes:
        worst = max(clashes.values())
        for t in triples:
            if clashes.get(t) == worst:
                problems.append(f"triple {t} shares index pairs with {worst} other triple(s)")
    missing = [tuple(sorted(p)) for p in combinations(range(1, 8), 2) if frozenset(p) not in pair_owner]
    if missing:
        problems.append(f"index pairs covered by no triple: {missing}")
    return problems


def alternativity_failures(tensor: StructureTensor, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Basis triples (i, j, k) where the associator is not antisymmetric.

    Checks Delta[e_i, e_i, e_j] = 0 and Delta[e_i,e_j,e_k] = -Delta[e_j,e_i,e_k]
    = -Delta[e_i,e_k,e_j] over all basis indices 0..7; since the associator is
    trilinear this is equivalent to alternativity of the whole algebra.
    """
    e = [basis(i) for i in range(8)]
    cache = {}

    def assoc(i, j, k):
        key = (i, j, k)
        if key not in cache:
            cache[key] = associator(e[i], e[j], e[k], tensor)
        return cache[key]

    bad = []
    for i in range(8):
        for j in range(8):
            for k in range(8):
                a = assoc(i, j, k)
                if not (a + assoc(j, i, k)).is_zero() or not (a + assoc(i, k, j)).is_zero():
                    bad.append((i, j, k))
                    if limit is not None and len(bad) >= limit:
                        return bad
    return bad


def locate_sign_error(triples: Sequence[Triple]) -> Triple | None:
    """Find the single triple whose orientation breaks alternativity.

    Tries reversing each triple in turn and returns the one whose reversal
    yields an alternative algebra.  Valid orientations differ from each other
    in at least three triples, so at most one single reversal can repair a
    table.
    """
    triples = list(triples)
    for i, t in enumerate(triples):
        trial = list(triples)
        trial[i] = (t[1], t[0], t[2])
        try:
            tensor = build_structure_tensor(trial)
        except StructureConstantError:
            continue
        if not alternativity_failures(tensor, limit=1):
            return t
    return None
