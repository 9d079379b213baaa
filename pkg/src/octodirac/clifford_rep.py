"""Real matrix realizations of Dirac symbols.

Builds the seven 32x32 matrix imaginary units, the eleven-dimensional gamma
system of signature 1(-)&10(+), its four-dimensional first slot, and the
complex/quaternion embeddings, all from the declarative tables in
``data/generators.json``.  Every builder verifies its anticommutation
relations before returning.

Convention: in a 4x4 factor ``rho_a sigma_b = kron(sigma_a, sigma_b)`` (rho acts
on the first 2x2 slot).  Factors of ``i`` are absorbed so every named matrix is
real, e.g. ``isigma2 = [[0, 1], [-1, 0]]`` and ``rho2sigma2 = kron(sigma2, sigma2)``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from .exact_linalg import ExactMatrix, RowSpace, kron, matmul
from .octonion import StructureTensor, default_tensor

__all__ = [
    "CliffordError",
    "CliffordSystem",
    "UnitSystem",
    "Intertwiner",
    "IntertwinerKind",
    "pauli_table",
    "load_tables",
    "build_matrix",
    "build_unit_system",
    "build_gamma11",
    "build_gamma4",
    "embed_complex_unit",
    "embed_quaternion_units",
    "enlarged_gamma4",
    "quaternion_orientation",
    "max_ms_parameters",
    "find_intertwiner",
    "commutator_defect",
    "clifford_failures",
    "signed_perm_form",
]


class CliffordError(ValueError):
    """A generator table failed verification.

    ``pairs`` lists the offending (name, name) pairs; ``names`` the
    generators involved, most frequent first.
    """

    def __init__(self, message: str, pairs=(), names=()):
        super().__init__(message)
        self.pairs = list(pairs)
        self.names = list(names)


@lru_cache(maxsize=None)
def _pauli_real():
    e2 = ExactMatrix.identity(2)
    s1 = ExactMatrix([[0, 1], [1, 0]])
    is2 = ExactMatrix([[0, 1], [-1, 0]])
    s3 = ExactMatrix([[1, 0], [0, -1]])
    # sigma_a = (-i)^p * real[a]
    real = {0: (e2, 0), 1: (s1, 0), 2: (is2, 1), 3: (s3, 0)}
    two = {"E2": e2, "sigma1": s1, "isigma2": is2, "sigma3": s3}
    four = {}
    for a in range(4):
        for b in range(4):
            ra, pa = real[a]
            rb, pb = real[b]
            m = kron(ra, rb)
            name = (f"rho{a}" if a else "") + (f"sigma{b}" if b else "")
            if pa + pb == 0:
                four[name or "E4"] = m
            elif pa + pb == 1:
                four["i" + name] = m
            else:
                four[name] = -m
    return {2: two, 4: four}


def pauli_table() -> dict[int, dict[str, ExactMatrix]]:
    """Named real 2x2 and 4x4 constants, keyed by size then name.

    2x2: ``E2, sigma1, isigma2, sigma3``.  4x4: every ``rho_a sigma_b`` as a
    real matrix, prefixed with ``i`` when exactly one sigma2 appears (e.g.
    ``irho2sigma1``, ``isigma2``, ``irho2``), plus ``E4``.
    """
    t = _pauli_real()
    return {k: dict(v) for k, v in t.items()}


def load_tables(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("octodirac.data").joinpath("generators.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _default_tables() -> dict:
    return load_tables()


def default_tables() -> dict:
    return copy.deepcopy(_default_tables())


def build_matrix(record: dict, slots: Sequence[int]) -> ExactMatrix:
    """sign * kron of the named factors; unknown names raise ``CliffordError``."""
    table = _pauli_real()
    factors = record["factors"]
    name = record.get("name", "?")
    if len(factors) != len(slots):
        raise CliffordError(f"{name}: {len(factors)} factors for {len(slots)} slots", names=[name])
    m = None
    for f, size in zip(factors, slots):
        try:
            part = table[size][f]
        except KeyError:
            raise CliffordError(f"{name}: unknown {size}x{size} factor {f!r}", names=[name]) from None
        m = part if m is None else kron(m, part)
    sign = record.get("sign", 1)
    if sign not in (1, -1):
        raise CliffordError(f"{name}: sign must be +1 or -1, got {sign!r}", names=[name])
    return -m if sign == -1 else m


def signed_perm_form(m: ExactMatrix) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """(perm, signs) with m[i, perm[i]] = signs[i], or None if m is not a signed permutation."""
    if not m.is_signed_permutation():
        return None
    perm, signs = [], []
    for row in m:
        j = next(j for j, x in enumerate(row) if x)
        perm.append(j)
        signs.append(int(row[j]))
    return tuple(perm), tuple(signs)


def _sp_mul(a, b):
    pa, sa = a
    pb, sb = b
    return tuple(pb[p] for p in pa), tuple(s * sb[p] for p, s in zip(pa, sa))


def _sp_clifford_failures(forms, metric):
    n = len(forms[0][0])
    ident = tuple(range(n))
    bad = []
    for a in range(len(forms)):
        for b in range(a, len(forms)):
            ab = _sp_mul(forms[a], forms[b])
            if a == b:
                g = metric[a]
                ok = ab[0] == ident and all(s == g for s in ab[1])
            else:
                ba = _sp_mul(forms[b], forms[a])
                ok = ab[0] == ba[0] and all(x == -y for x, y in zip(ab[1], ba[1]))
            if not ok:
                bad.append((a, b))
    return bad


def clifford_failures(gens: Sequence[ExactMatrix], metric: Sequence) -> list[tuple[int, int]]:
    """Index pairs (a <= b) violating g_a g_b + g_b g_a = 2 metric_ab E.

    Signed-permutation generators with metric entries +-1 are checked by
    composing permutations; anything else goes through exact matrix products.
    """
    forms = [signed_perm_form(g) for g in gens]
    if all(forms) and all(abs(Fraction(x)) == 1 for x in metric):
        return _sp_clifford_failures(forms, [int(x) for x in metric])
    n = gens[0].rows
    eye = ExactMatrix.identity(n)
    bad = []
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            ac = matmul(gens[a], gens[b]) + matmul(gens[b], gens[a])
            want = eye.scale(2 * Fraction(metric[a])) if a == b else None
            if (want is None and not ac.is_zero()) or (want is not None and ac != want):
                bad.append((a, b))
    return bad


def _raise_for(kind: str, pairs, names, suspects=frozenset()):
    """Raise a CliffordError ranking generators by how many failing pairs they touch.

    Among equally implicated generators, those in ``suspects`` rank first.
    If several still tie at the top (two identical generators, say) the
    message names all of them, since the relations alone cannot tell them apart.
    """
    counts: dict[str, int] = {}
    for a, b in pairs:
        for n in {names[a], names[b]}:
            counts[n] = counts.get(n, 0) + 1

    def key(n):
        return -counts[n], n not in suspects

    ranked = sorted(counts, key=lambda n: (*key(n), names.index(n)))
    top = [n for n in ranked if key(n) == key(ranked[0])]
    blame = top[0] if len(top) == 1 else " or ".join(top) + " (tied)"
    shown = ", ".join(f"({names[a]}, {names[b]})" for a, b in pairs[:12])
    more = f" and {len(pairs) - 12} more" if len(pairs) > 12 else ""
    raise CliffordError(
        f"{kind} fails for pairs {shown}{more}; most implicated: {blame}",
        pairs=[(names[a], names[b]) for a, b in pairs],
        names=ranked,
    )


def _twin_mismatches(tables: dict, block: str) -> set[str]:
    """Records of ``block`` whose internal factors contradict the other table.

    Unit I_N and generator gamma_{N+3} carry the same internal (8x8) factors,
    so the two tables are redundant copies of that data.  When a relation
    failure cannot tell two records apart, the one disagreeing with its twin
    is the likelier culprit.
    """
    try:
        units = tables["units"]["records"]
        gammas = tables["gamma11"]["records"][4:]
        out = set()
        for u, g in zip(units, gammas):
            if u["factors"][1:] != g["factors"][1:] or u.get("sign", 1) != g.get("sign", 1):
                out.add(u["name"] if block == "units" else g["name"])
        return out
    except (KeyError, TypeError, IndexError):
        return set()


@dataclass(frozen=True)
class CliffordSystem:
    generators: tuple[ExactMatrix, ...]
    metric: tuple[Fraction, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.generators) != len(self.metric):
            raise ValueError("generator count must equal metric length")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(len(self.generators))))

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return self.generators[0].rows

    def signature(self) -> str:
        neg = sum(1 for g in self.metric if g < 0)
        return f"{neg}(−)&{self.n - neg}(+)"

    def failures(self) -> list[tuple[int, int]]:
        return clifford_failures(self.generators, self.metric)

    def verify(self) -> "CliffordSystem":
        bad = self.failures()
        if bad:
            _raise_for("Clifford relation", bad, list(self.names))
        return self


@dataclass(frozen=True)
class UnitSystem:
    units: tuple[ExactMatrix, ...]
    names: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return self.units[0].rows

    def __getitem__(self, n: int) -> ExactMatrix:
        """1-based access matching the octonion unit index."""
        if not 1 <= n <= len(self.units):
            raise IndexError(n)
        return self.units[n - 1]


def _records(tables: dict, key: str):
    block = tables[key]
    return block["slots"], block["records"]


def _check_signed_permutations(mats, names):
    for m, name in zip(mats, names):
        if not m.is_signed_permutation():
            raise CliffordError(f"{name} is not a signed permutation matrix", names=[name])


def build_gamma11(tables: dict | None = None) -> CliffordSystem:
    """Eleven real 32x32 generators with metric diag(-1, +1 x 10), verified."""
    tables = tables or _default_tables()
    slots, recs = _records(tables, "gamma11")
    gens = tuple(build_matrix(r, slots) for r in recs)
    names = tuple(r["name"] for r in recs)
    metric = tuple(Fraction(x) for x in tables["gamma11"]["metric"])
    _check_signed_permutations(gens, names)
    system = CliffordSystem(gens, metric, names)
    bad = system.failures()
    if bad:
        _raise_for("Clifford relation", bad, list(names), _twin_mismatches(tables, "gamma11"))
    return system


def build_gamma4(tables: dict | None = None) -> CliffordSystem:
    """Real 4x4 system of signature (-+++): first-slot factors of gamma0..gamma3."""
    tables = tables or _default_tables()
    slots, recs = _records(tables, "gamma11")
    recs = recs[:4]
    gens = tuple(build_matrix({**r, "factors": r["factors"][:1]}, slots[:1]) for r in recs)
    names = tuple(r["name"] for r in recs)
    metric = tuple(Fraction(x) for x in tables["gamma11"]["metric"][:4])
    return CliffordSystem(gens, metric, names).verify()


def build_unit_system(tables: dict | None = None) -> UnitSystem:
    """The seven real 32x32 matrix imaginary units, verified.

    Checks that each unit is a signed permutation, that
    ``I_M I_N + I_N I_M = -2 delta_MN E`` for all pairs, and that every unit
    commutes with the space-time generators ``gamma_alpha (x) E_8`` (the units
    act only on internal degrees of freedom).
    """
    tables = tables or _default_tables()
    slots, recs = _records(tables, "units")
    units = tuple(build_matrix(r, slots) for r in recs)
    names = tuple(r["name"] for r in recs)
    if len(units) != 7:
        raise CliffordError(f"expected 7 units, got {len(units)}")
    _check_signed_permutations(units, names)
    bad = clifford_failures(units, [-1] * 7)
    if bad:
        _raise_for("unit anticommutation", bad, list(names), _twin_mismatches(tables, "units"))
    spacetime = [signed_perm_form(kron(g, ExactMatrix.identity(units[0].rows // 4)))
                 for g in build_gamma4().generators]
    for u, name in zip(units, names):
        uf = signed_perm_form(u)
        for a, g in enumerate(spacetime):
            if _sp_mul(uf, g) != _sp_mul(g, uf):
                raise CliffordError(
                    f"{name} does not commute with space-time generator gamma{a}", names=[name]
                )
    return UnitSystem(units, names)


def enlarged_gamma4(extra: int) -> CliffordSystem:
    """The 4D system tensored with E_extra on the right."""
    g4 = build_gamma4()
    eye = ExactMatrix.identity(extra)
    return CliffordSystem(tuple(kron(g, eye) for g in g4.generators), g4.metric, g4.names).verify()


def embed_complex_unit(tables: dict | None = None) -> ExactMatrix:
    """E_4 (x) i sigma_2, an 8x8 real square root of -E."""
    tables = tables or _default_tables()
    slots, recs = _records(tables, "complex")
    return build_matrix(recs[0], slots)


def embed_quaternion_units(tables: dict | None = None) -> list[ExactMatrix]:
    tables = tables or _default_tables()
    slots, recs = _records(tables, "quaternion")
    return [build_matrix(r, slots) for r in recs]


def quaternion_orientation(units: Sequence[ExactMatrix]) -> int | None:
    """Return o in {+1, -1} with I_a I_b = -delta_ab E + o eps_abc I_c, or None.

    Both orientations give the quaternion algebra; the quaternion units
    built here come out with o = -1 under the fixed real convention for
    ``isigma2``.
    """
    i1, i2, i3 = units
    eye = ExactMatrix.identity(i1.rows)
    for u in units:
        if matmul(u, u) != -eye:
            return None
    for o in (1, -1):
        ok = True
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            x, y, z = units[a], units[b], units[c]
            if matmul(x, y) != z.scale(o) or matmul(y, x) != z.scale(-o):
                ok = False
                break
        if ok:
            return o
    return None


def max_ms_parameters(k: int) -> tuple[int, int]:
    """(n, N) = (2k + 1, 2**k) for a maximal matrix space."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return 2 * k + 1, 2 ** k


class IntertwinerKind(str, Enum):
    HERMITIZING = "hermitizing"
    ANTI_HERMITIZING = "anti_hermitizing"


@dataclass(frozen=True)
class Intertwiner:
    kind: IntertwinerKind
    matrix: ExactMatrix
    dimension: int


def _intertwiner_space(system: CliffordSystem, kind: IntertwinerKind) -> RowSpace:
    # unknown X[i][j] -> column i*N + j;  equation X g - s g^T X = 0
    n = system.size
    s = -1 if IntertwinerKind(kind) is IntertwinerKind.HERMITIZING else 1
    space = RowSpace(n * n)
    for g in system.generators:
        cols = [[(k, g[k, j]) for k in range(n) if g[k, j]] for j in range(n)]
        for i in range(n):
            for j in range(n):
                row: dict[int, Fraction] = {}
                for k, v in cols[j]:  # (X g)_ij = sum_k X_ik g_kj
                    c = i * n + k
                    row[c] = row.get(c, 0) + v
                for k, v in cols[i]:  # (g^T X)_ij = sum_k g_ki X_kj
                    c = k * n + j
                    row[c] = row.get(c, 0) + s * v
                space.add(row)
    return space


def find_intertwiner(system: CliffordSystem, kind: IntertwinerKind | str) -> Intertwiner | None:
    """Solve X g - g^T X = 0 (hermitizing) or X g + g^T X = 0 (anti-hermitizing).

    All generators are real, so the transpose plays the role of the adjoint.
    Returns the first nullspace basis vector reshaped to N x N together with
    the solution-space dimension, or None when only X = 0 solves the system.
    """
    kind = IntertwinerKind(kind)
    n = system.size
    basis = _intertwiner_space(system, kind).nullspace_vectors()
    if not basis:
        return None
    return Intertwiner(kind, ExactMatrix.from_flat(n, n, basis[0]), len(basis))


def intertwiner_residual(system: CliffordSystem, x: ExactMatrix, kind: IntertwinerKind | str) -> Fraction:
    kind = IntertwinerKind(kind)
    worst = Fraction(0)
    for g in system.generators:
        lhs = matmul(x, g)
        rhs = matmul(g.T, x)
        r = lhs - rhs if kind is IntertwinerKind.HERMITIZING else lhs + rhs
        worst = max(worst, r.max_abs())
    return worst


def commutator_defect(units: UnitSystem, c: StructureTensor | None = None) -> list[list[Fraction]]:
    """Entry (M, N): max |[I_M, I_N] - 2 sum_K C_MNK I_K| over matrix entries (0-based lists)."""
    c = c or default_tensor()
    n = len(units.units)
    prods = [[matmul(a, b) for b in units.units] for a in units.units]
    table = [[Fraction(0)] * n for _ in range(n)]
    for m in range(n):
        for k in range(n):
            if m == k:
                continue
            d = prods[m][k] - prods[k][m]
            for j in range(n):
                ck = c[m + 1, k + 1, j + 1]
                if ck:
                    d = d - units.units[j].scale(2 * ck)
            table[m][k] = d.max_abs()
    return table
