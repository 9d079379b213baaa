"""First-order octonion Dirac symbols and the amplitude fold defect.

The 4x4 octonion Dirac symbols are ``gamma_a = gbar_a + lam [s_0, gbar_a] e_0 +
lam [s_N, gbar_a] e_N`` around the real 4x4 system ``gbar``.  Their Clifford
residual is an exact polynomial in ``lam`` of degree at most two, so three
exact evaluations determine it completely; "first order" means its constant
and linear coefficients vanish.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

from .clifford_rep import CliffordSystem, build_gamma4, build_gamma11, build_unit_system
from .exact_linalg import ExactMatrix, as_rational, inverse, kron, matmul
from .octonion import Octonion, StructureTensor, mul, norm_sq

__all__ = [
    "OctonionMatrix",
    "PerturbationSeed",
    "AmplitudeChain",
    "DEFAULT_LAMBDAS",
    "random_seed",
    "build_octonion_ds",
    "clifford_residual",
    "polynomial_coefficients",
    "residual_polynomial",
    "build_perturbed_gamma11",
    "gamma11_residual",
    "gamma11_residual_polynomial",
    "similarity_transform",
    "fold_left",
    "fold_right",
    "fold_defect",
]

DEFAULT_LAMBDAS = (Fraction(1, 64), Fraction(1, 32), Fraction(1, 16))

_ZERO = Octonion()


class OctonionMatrix:
    """Square or rectangular matrix with octonion entries.

    Products sum octonion products entry by entry; with a nonassociative
    entry algebra, triple products must be parenthesized explicitly.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Octonion]]):
        self.entries = tuple(tuple(r) for r in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0])

    @classmethod
    def from_real(cls, m: ExactMatrix, unit: int = 0) -> "OctonionMatrix":
        """The real matrix ``m`` times the basis unit ``e_unit``."""
        return cls([[Octonion.unit(unit, x) if x else _ZERO for x in row] for row in m])

    @classmethod
    def from_components(cls, comps: Sequence[ExactMatrix]) -> "OctonionMatrix":
        """Sum over p of comps[p] * e_p."""
        r, c = comps[0].shape
        return cls([[Octonion(comps[p][i, j] for p in range(8)) for j in range(c)] for i in range(r)])

    def component(self, p: int) -> ExactMatrix:
        """Real coefficient matrix of e_p."""
        return ExactMatrix([[e.coeffs[p] for e in row] for row in self.entries])

    def __getitem__(self, ij) -> Octonion:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, OctonionMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other: "OctonionMatrix") -> "OctonionMatrix":
        return OctonionMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other: "OctonionMatrix") -> "OctonionMatrix":
        return OctonionMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def matmul(self, other: "OctonionMatrix", tensor: StructureTensor | None = None) -> "OctonionMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in octonion matrix product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = _ZERO
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + mul(a, b, tensor)
                row.append(acc)
            out.append(row)
        return OctonionMatrix(out)

    __matmul__ = matmul

    def max_abs(self) -> Fraction:
        return max((abs(c) for row in self.entries for e in row for c in e.coeffs), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def flat(self) -> tuple:
        """All octonion coefficients, entry-major."""
        return tuple(c for row in self.entries for e in row for c in e.coeffs)


@dataclass(frozen=True)
class PerturbationSeed:
    """Small real 4x4 matrices s_0, s_1..s_7 and the scale ``lam``.

    Entries of the unscaled matrices are bounded by 1; the effective
    perturbations are ``lam * s``.
    """

    s0: ExactMatrix
    sN: tuple[ExactMatrix, ...]
    lam: Fraction = Fraction(1, 100)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "sN", tuple(self.sN))
        if len(self.sN) != 7:
            raise ValueError(f"need 7 matrices s_N, got {len(self.sN)}")
        for m in (self.s0, *self.sN):
            if m.shape != (4, 4):
                raise ValueError("seed matrices must be 4x4")
            if m.max_abs() > 1:
                raise ValueError("seed entries must be bounded by 1 in absolute value")
        if not 0 <= self.lam < 1:
            raise ValueError("lam must lie in [0, 1)")

    def with_lambda(self, lam) -> "PerturbationSeed":
        return PerturbationSeed(self.s0, self.sN, lam)

    @property
    def matrices(self) -> tuple[ExactMatrix, ...]:
        return (self.s0, *self.sN)


def random_seed(seed: int, lam=Fraction(1, 100)) -> PerturbationSeed:
    """Seed with entries drawn uniformly from {-1, 0, 1} by ``random.Random(seed)``.

    Draw order: s_0 then s_1..s_7, each row-major.
    """
    rng = random.Random(seed)
    mats = [ExactMatrix([[rng.randint(-1, 1) for _ in range(4)] for _ in range(4)]) for _ in range(8)]
    return PerturbationSeed(mats[0], tuple(mats[1:]), lam)


def _comm(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return matmul(a, b) - matmul(b, a)


def build_octonion_ds(seed: PerturbationSeed, base: CliffordSystem | None = None) -> list[OctonionMatrix]:
    """The four octonion Dirac symbols around the real 4x4 system."""
    base = base or build_gamma4()
    out = []
    for g in base.generators:
        comps = [_comm(s, g).scale(seed.lam) for s in seed.matrices]
        comps[0] = comps[0] + g
        out.append(OctonionMatrix.from_components(comps))
    return out


def clifford_residual(gammas: Sequence[OctonionMatrix], metric: Sequence | None = None,
                      tensor: StructureTensor | None = None) -> dict[tuple[int, int], OctonionMatrix]:
    """R_ab = gamma_a gamma_b + gamma_b gamma_a - 2 g_ab E for every pair a <= b."""
    if metric is None:
        metric = build_gamma4().metric
    n = gammas[0].rows
    out = {}
    for a in range(len(gammas)):
        for b in range(a, len(gammas)):
            r = gammas[a].matmul(gammas[b], tensor) + gammas[b].matmul(gammas[a], tensor)
            if a == b:
                r = r - OctonionMatrix.from_real(ExactMatrix.identity(n).scale(2 * Fraction(metric[a])))
            out[(a, b)] = r
    return out


def polynomial_coefficients(xs: Sequence[Fraction], ys: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Exact coefficients c_0..c_{d} of the degree-d polynomial through (xs, ys).

    ``ys[i]`` is a vector of values at ``xs[i]``; the interpolation is done
    componentwise by inverting the Vandermonde matrix exactly.
    """
    xs = [as_rational(x) for x in xs]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    d = len(xs)
    vinv = inverse(ExactMatrix([[x ** k for k in range(d)] for x in xs]))
    width = len(ys[0])
    return [
        tuple(sum((vinv[k, i] * ys[i][c] for i in range(d)), Fraction(0)) for c in range(width))
        for k in range(d)
    ]


@dataclass(frozen=True)
class ResidualPolynomial:
    """Per generator pair, max-abs of each polynomial coefficient in lam."""

    lambdas: tuple[Fraction, ...]
    coefficients: dict[tuple[int, int], tuple[Fraction, Fraction, Fraction]]
    consistent: bool = True  # extra lambdas (beyond three) fit the quadratic exactly
    labels: tuple[str, ...] = field(default=())

    def first_order_vanishes(self) -> bool:
        return all(c[0] == 0 and c[1] == 0 for c in self.coefficients.values())

    def has_quadratic_term(self) -> bool:
        return any(c[2] != 0 for c in self.coefficients.values())


def _extract(evaluate: Callable[[Fraction], dict], lambdas: Sequence) -> ResidualPolynomial:
    lambdas = tuple(as_rational(x) for x in lambdas)
    if len(lambdas) < 3:
        raise ValueError("need at least three distinct lambdas")
    samples = [evaluate(lam) for lam in lambdas]
    pairs = list(samples[0])
    coeffs = {}
    consistent = True
    for p in pairs:
        ys = [s[p] for s in samples]
        c0, c1, c2 = polynomial_coefficients(lambdas[:3], ys[:3])
        coeffs[p] = (max(map(abs, c0)), max(map(abs, c1)), max(map(abs, c2)))
        for lam, y in zip(lambdas[3:], ys[3:]):
            pred = [a + b * lam + c * lam * lam for a, b, c in zip(c0, c1, c2)]
            if list(y) != pred:
                consistent = False
    return ResidualPolynomial(lambdas, coeffs, consistent)


def residual_polynomial(seed: PerturbationSeed, lambdas: Sequence = DEFAULT_LAMBDAS,
                        tensor: StructureTensor | None = None) -> ResidualPolynomial:
    """Exact lam-polynomial of the 4x4 octonion Clifford residual, per pair."""
    base = build_gamma4()

    def evaluate(lam):
        gam = build_octonion_ds(seed.with_lambda(lam), base)
        return {p: r.flat() for p, r in clifford_residual(gam, base.metric, tensor).items()}

    return _extract(evaluate, lambdas)


def internal_generator(seed: PerturbationSeed) -> ExactMatrix:
    """32x32 matrix s = s_0 E + s_N I_N with the 4x4 blocks acting on the space-time slot."""
    units = build_unit_system()
    e8 = ExactMatrix.identity(8)
    s = kron(seed.s0, e8)
    for sn, unit in zip(seed.sN, units.units):
        s = s + matmul(kron(sn, e8), unit)
    return s


def build_perturbed_gamma11(seed: PerturbationSeed) -> CliffordSystem:
    """gamma_A = gbar_A + lam [s, gbar_A] for all eleven 32x32 generators (not verified)."""
    base = build_gamma11()
    s = internal_generator(seed).scale(seed.lam)
    gens = tuple(g + _comm(s, g) for g in base.generators)
    return CliffordSystem(gens, base.metric, base.names)


def gamma11_residual(system: CliffordSystem) -> dict[tuple[int, int], ExactMatrix]:
    n = system.size
    eye = ExactMatrix.identity(n)
    out = {}
    gens = system.generators
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            r = matmul(gens[a], gens[b]) + matmul(gens[b], gens[a])
            if a == b:
                r = r - eye.scale(2 * system.metric[a])
            out[(a, b)] = r
    return out


def gamma11_residual_polynomial(seed: PerturbationSeed, lambdas: Sequence = DEFAULT_LAMBDAS) -> ResidualPolynomial:
    def evaluate(lam):
        res = gamma11_residual(build_perturbed_gamma11(seed.with_lambda(lam)))
        return {p: r.entries for p, r in res.items()}

    return _extract(evaluate, lambdas)


def similarity_transform(seed: PerturbationSeed) -> CliffordSystem:
    """S gbar_A S^-1 with S = E + lam s, using the exact rational inverse."""
    base = build_gamma11()
    s = ExactMatrix.identity(base.size) + internal_generator(seed).scale(seed.lam)
    s_inv = inverse(s)
    gens = tuple(matmul(matmul(s, g), s_inv) for g in base.generators)
    return CliffordSystem(gens, base.metric, base.names)


# -- amplitude folds ---------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeChain:
    amplitudes: tuple[Octonion, ...]

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(self.amplitudes))
        if not self.amplitudes:
            raise ValueError("an amplitude chain needs at least one amplitude")

    def __len__(self):
        return len(self.amplitudes)


def _chain(chain) -> tuple[Octonion, ...]:
    return chain.amplitudes if isinstance(chain, AmplitudeChain) else AmplitudeChain(chain).amplitudes


def fold_left(chain: AmplitudeChain | Sequence[Octonion], tensor: StructureTensor | None = None) -> Octonion:
    """((A1 A2) A3) ... An."""
    return reduce(lambda acc, x: mul(acc, x, tensor), _chain(chain))


def fold_right(chain: AmplitudeChain | Sequence[Octonion], tensor: StructureTensor | None = None) -> Octonion:
    """A1 (A2 (... (A_{n-1} An)))."""
    amps = _chain(chain)
    acc = amps[-1]
    for x in reversed(amps[:-1]):
        acc = mul(x, acc, tensor)
    return acc


def fold_defect(chain: AmplitudeChain | Sequence[Octonion],
                tensor: StructureTensor | None = None) -> tuple[Octonion, Fraction]:
    """(left fold - right fold, norm_sq(left) - norm_sq(right))."""
    left = fold_left(chain, tensor)
    right = fold_right(chain, tensor)
    return left - right, norm_sq(left) - norm_sq(right)
