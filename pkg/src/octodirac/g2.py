"""Automorphisms of the octonion units: membership test, derivations, exponentials.

A real 7x7 matrix G acting by ``e_M -> G_MN e_N`` (``e_0`` fixed) preserves the
multiplication table iff ``G G^T = 1`` and
``G_MA G_NB C_ABC = C_MNS G_SC``.  Exact matrices are checked with zero
tolerance, float matrices within ``FLOAT_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .exact_linalg import ExactMatrix, RowSpace, expm, float_matrix, matmul, nullspace
from .octonion import Octonion, StructureTensor, default_tensor

__all__ = [
    "FLOAT_TOL",
    "MAX_EXP_NORM",
    "AutomorphismError",
    "UnitTransform",
    "AutomorphismVerdict",
    "Derivation",
    "check_automorphism",
    "derivation_constraints",
    "derivation_space",
    "in_derivation_span",
    "exponentiate",
    "transform_units",
]

FLOAT_TOL = 1e-9
# largest |t| * ||d||_1 accepted by exponentiate; expm stays accurate well beyond
# this, the cap only guards against meaningless huge rotations
MAX_EXP_NORM = 64.0

_PAIRS = [(i, j) for i in range(7) for j in range(i + 1, 7)]


class AutomorphismError(ValueError):
    """The transform does not preserve the octonion multiplication table."""


@dataclass(frozen=True)
class UnitTransform:
    """7x7 transform of the imaginary units; ``g`` is exact or a float array."""

    g: ExactMatrix | np.ndarray

    def __post_init__(self):
        if isinstance(self.g, ExactMatrix):
            if self.g.shape != (7, 7):
                raise ValueError(f"transform must be 7x7, got {self.g.shape}")
        else:
            arr = float_matrix(self.g)
            if arr.shape != (7, 7):
                raise ValueError(f"transform must be 7x7, got {arr.shape}")
            object.__setattr__(self, "g", arr)

    @property
    def exact(self) -> bool:
        return isinstance(self.g, ExactMatrix)

    def as_float(self) -> np.ndarray:
        return self.g.to_float() if self.exact else self.g

    def compose(self, other: "UnitTransform") -> "UnitTransform":
        if self.exact and other.exact:
            return UnitTransform(matmul(self.g, other.g))
        return UnitTransform(self.as_float() @ other.as_float())


@dataclass(frozen=True)
class AutomorphismVerdict:
    passed: bool
    orthogonality_residual: Fraction | float
    structure_residual: Fraction | float
    tolerance: float

    def __bool__(self):
        return self.passed


@lru_cache(maxsize=32)
def _c_array(c: StructureTensor) -> np.ndarray:
    return np.array(c.entries, dtype=float)


def check_automorphism(g: UnitTransform, c: StructureTensor | None = None,
                       tol: float = FLOAT_TOL) -> AutomorphismVerdict:
    """Evaluate both automorphism conditions and report max-abs residuals."""
    c = c or default_tensor()
    if not isinstance(g, UnitTransform):
        g = UnitTransform(g)
    if not g.exact:
        a = g.g
        C = _c_array(c)
        orth = float(np.abs(a @ a.T - np.eye(7)).max())
        lhs = np.einsum("ma,nb,abk->mnk", a, a, C)
        rhs = np.einsum("mns,sk->mnk", C, a)
        struct = float(np.abs(lhs - rhs).max())
        return AutomorphismVerdict(orth <= tol and struct <= tol, orth, struct, tol)

    m = g.g
    orth = (matmul(m, m.T) - ExactMatrix.identity(7)).max_abs()
    nz = list(c.nonzero())
    struct = Fraction(0)
    for i in range(7):
        for j in range(7):
            lhs = [Fraction(0)] * 7
            for (a, b, k), v in nz:
                x = m[i, a - 1] * m[j, b - 1]
                if x:
                    lhs[k - 1] += v * x
            for k in range(7):
                rhs = sum((c[i + 1, j + 1, s + 1] * m[s, k] for s in range(7)), Fraction(0))
                struct = max(struct, abs(lhs[k] - rhs))
    return AutomorphismVerdict(orth == 0 and struct == 0, orth, struct, 0.0)


@dataclass(frozen=True)
class Derivation:
    """Antisymmetric 7x7 matrix satisfying the linearized automorphism condition."""

    d: ExactMatrix

    def __post_init__(self):
        if self.d.shape != (7, 7) or self.d.T != -self.d:
            raise ValueError("derivation must be an antisymmetric 7x7 matrix")

    def coordinates(self) -> tuple[Fraction, ...]:
        """Coordinates on the 21 upper-triangular entries."""
        return tuple(self.d[i, j] for i, j in _PAIRS)


def _antisym_from_coords(v: Sequence) -> ExactMatrix:
    m = [[Fraction(0)] * 7 for _ in range(7)]
    for (i, j), x in zip(_PAIRS, v):
        m[i][j] = Fraction(x)
        m[j][i] = -Fraction(x)
    return ExactMatrix(m)


def derivation_constraints(c: StructureTensor | None = None) -> ExactMatrix:
    """343 x 21 system: D_MA C_ANK + D_NA C_MAK - C_MNS D_SK = 0 for antisymmetric D."""
    c = c or default_tensor()
    # D_xy in terms of the coordinate of pair (x, y)
    def coeff(x, y):
        if x == y:
            return None, 0
        if x < y:
            return _PAIRS.index((x, y)), 1
        return _PAIRS.index((y, x)), -1

    rows = []
    for m in range(7):
        for n in range(7):
            for k in range(7):
                row = [Fraction(0)] * 21
                for a in range(7):
                    for (x, y, cv) in ((m, a, c[a + 1, n + 1, k + 1]), (n, a, c[m + 1, a + 1, k + 1])):
                        if cv:
                            p, s = coeff(x, y)
                            if p is not None:
                                row[p] += s * cv
                for s_ in range(7):
                    cv = c[m + 1, n + 1, s_ + 1]
                    if cv:
                        p, s = coeff(s_, k)
                        if p is not None:
                            row[p] -= s * cv
                rows.append(row)
    return ExactMatrix(rows)


def _normalize_integer(v: Sequence[Fraction]) -> list[Fraction]:
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def derivation_space(c: StructureTensor | None = None) -> list[Derivation]:
    """Exact basis of the derivation algebra, normalized to integer entries.

    Each basis element is scaled to coprime integer coordinates with its
    first nonzero coordinate positive, so reports are reproducible.
    """
    basis = nullspace(derivation_constraints(c))
    return [Derivation(_antisym_from_coords(_normalize_integer(v.entries))) for v in basis]


def in_derivation_span(m: ExactMatrix, basis: Sequence[Derivation]) -> bool:
    if m.T != -m:
        return False
    space = RowSpace(21)
    for d in basis:
        space.add(d.coordinates())
    return space.contains([m[i, j] for i, j in _PAIRS])


def exponentiate(d: Derivation | ExactMatrix, t: float) -> UnitTransform:
    """Float transform expm(t d).

    Requires |t| * ||d||_1 <= MAX_EXP_NORM.  The result is orthogonal
    because d is antisymmetric and preserves the structure constants because
    d is a derivation, both to rounding error.
    """
    m = d.d if isinstance(d, Derivation) else d
    a = float(t) * float_matrix(m)
    if np.linalg.norm(a, 1) > MAX_EXP_NORM:
        raise ValueError(f"|t| * ||d|| exceeds {MAX_EXP_NORM}")
    return UnitTransform(expm(a))


def transform_units(g: UnitTransform, a: Octonion, c: StructureTensor | None = None) -> Octonion:
    """Apply e_M -> G_MN e_N (e_0 fixed) to an octonion.

    Rejects transforms that are not automorphisms.
    """
    if not isinstance(g, UnitTransform):
        g = UnitTransform(g)
    verdict = check_automorphism(g, c)
    if not verdict.passed:
        raise AutomorphismError(
            f"not an automorphism (orthogonality residual {verdict.orthogonality_residual}, "
            f"structure residual {verdict.structure_residual})"
        )
    coeffs = a.coeffs
    out = [coeffs[0]]
    if g.exact:
        for n in range(7):
            out.append(sum((coeffs[m + 1] * g.g[m, n] for m in range(7)), Fraction(0)))
    else:
        v = np.array([float(x) for x in coeffs[1:]])
        out.extend(float(x) for x in v @ g.g)
        out[0] = float(out[0])
    return Octonion(out)
