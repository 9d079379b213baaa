"""Verification suites behind the CLI.

Each suite returns a :class:`VerificationReport`.  Suites never raise on a
failed check; construction errors are recorded as failed checks with the
offending object named in the detail.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import clifford_rep as cr
from . import g2
from .exact_linalg import ExactMatrix, kron, matmul, span_dimension
from .octonion import (
    DEFAULT_TRIPLES,
    StructureConstantError,
    alternativity_failures,
    anticommutator,
    associator,
    basis,
    build_structure_tensor,
    commutator,
    fano_problems,
    inverse,
    locate_sign_error,
    mul,
    norm_sq,
    random_octonion,
)
from .perturbation import (
    DEFAULT_LAMBDAS,
    AmplitudeChain,
    PerturbationSeed,
    build_octonion_ds,
    build_perturbed_gamma11,
    clifford_residual,
    fold_defect,
    fold_left,
    fold_right,
    gamma11_residual,
    gamma11_residual_polynomial,
    residual_polynomial,
    similarity_transform,
)
from .report import VerificationReport

DEFAULT_SEED = 20240917
RANDOM_TRIALS = 200

CLIFFORD_TARGETS = ("gamma4", "gamma11", "units", "embeddings")


# -- octonions ----------------------------------------------------------------

def octonion_suite(triples: Sequence | None = None, seed: int = DEFAULT_SEED,
                   trials: int = RANDOM_TRIALS) -> VerificationReport:
    rep = VerificationReport("octonion")
    triples = list(DEFAULT_TRIPLES if triples is None else triples)
    with rep.timed():
        try:
            c = build_structure_tensor(triples)
        except StructureConstantError as e:
            rep.add("structure_tensor.build", False, "error", str(e))
            return rep
        rep.add("structure_tensor.build", True, f"{len(c.triples)} triples")

    with rep.timed():
        bad = [
            (m, n, k)
            for m in range(1, 8) for n in range(1, 8) for k in range(1, 8)
            if c[m, n, k] != -c[n, m, k] or c[m, n, k] != -c[m, k, n]
        ]
        nonzero = sum(1 for _ in c.nonzero())
        rep.add("structure_tensor.antisymmetry", not bad and nonzero == 42,
                f"{nonzero} nonzero entries", f"asymmetric at {bad[:5]}" if bad else "")

    with rep.timed():
        probs = fano_problems(c.triples)
        rep.add("structure_tensor.fano_incidence", not probs, "ok" if not probs else "violated", "; ".join(probs))

    e = [basis(i) for i in range(8)]
    with rep.timed():
        bad = []
        for m in range(1, 8):
            for n in range(1, 8):
                want = e[0] * (-2 if m == n else 0)
                if anticommutator(e[m], e[n], c) != want:
                    bad.append((m, n))
        rep.add("units.anticommutators", not bad, f"{49 - len(bad)}/49", f"failing pairs {bad[:6]}" if bad else "")

    with rep.timed():
        bad = []
        for m in range(1, 8):
            for n in range(m + 1, 8):
                want = sum((e[k] * (2 * c[m, n, k]) for k in range(1, 8)), e[0] * 0)
                if commutator(e[m], e[n], c) != want:
                    bad.append((m, n))
        rep.add("units.commutators", not bad, f"{21 - len(bad)}/21", f"failing pairs {bad[:6]}" if bad else "")

    with rep.timed():
        bad = alternativity_failures(c)
        detail = ""
        if bad:
            culprit = locate_sign_error(c.triples)
            detail = f"associator not alternating at basis triples {bad[:4]}"
            if culprit is not None:
                detail += f"; offending triple {culprit} (reversing it restores alternativity)"
        rep.add("associator.alternating_on_basis", not bad, f"{512 - len(bad)}/512 basis triples", detail)

    rng = random.Random(seed)
    with rep.timed():
        bad = 0
        for _ in range(trials):
            a, b = random_octonion(rng), random_octonion(rng)
            if norm_sq(mul(a, b, c)) != norm_sq(a) * norm_sq(b):
                bad += 1
        rep.add("norm.multiplicative", bad == 0, f"{trials - bad}/{trials} random pairs")

    with rep.timed():
        bad = 0
        for _ in range(trials):
            a, b = random_octonion(rng), random_octonion(rng)
            if not associator(a, a, b, c).is_zero() or not associator(a, b, b, c).is_zero():
                bad += 1
        rep.add("associator.alternative_random", bad == 0, f"{trials - bad}/{trials} random pairs")

    with rep.timed():
        bad = 0
        for _ in range(trials):
            a = random_octonion(rng)
            if a.is_zero():
                continue
            if mul(a, inverse(a), c) != e[0] or mul(inverse(a), a, c) != e[0]:
                bad += 1
        rep.add("inverse.two_sided", bad == 0, f"{trials - bad}/{trials} random octonions")

    with rep.timed():
        w = associator(e[1], e[2], e[4], c)
        rep.add("associator.nonassociativity_witness", w == e[7], f"Delta[e1,e2,e4] = {w}")
    return rep


# -- Clifford systems ---------------------------------------------------------

def _build(rep: VerificationReport, check_id: str, builder, *args):
    with rep.timed():
        try:
            obj = builder(*args)
        except cr.CliffordError as e:
            rep.add(check_id, False, "error", str(e))
            return None
        rep.add(check_id, True, "verified")
    return obj


def _signed_perm_check(rep, check_id, mats, names):
    bad = [n for m, n in zip(mats, names) if not m.is_signed_permutation()]
    rep.add(check_id, not bad, f"{len(mats) - len(bad)}/{len(mats)}", f"not signed permutations: {bad}" if bad else "")


def _intertwiner_checks(rep, system: cr.CliffordSystem, expect_unique: bool):
    with rep.timed():
        found = {}
        for kind in cr.IntertwinerKind:
            found[kind] = cr.find_intertwiner(system, kind)
        dims = {k.value: (r.dimension if r else 0) for k, r in found.items()}
        one_dim = [k for k, r in found.items() if r and r.dimension == 1]
        if expect_unique:
            ok = len(one_dim) == 1 and sum(1 for r in found.values() if r) == 1
        else:
            ok = any(found.values())
        rep.add("intertwiner.solution_dimensions", ok,
                ", ".join(f"{k}={v}" for k, v in dims.items()))
        for kind, r in found.items():
            if r is None:
                continue
            res = cr.intertwiner_residual(system, r.matrix, kind)
            rep.add(f"intertwiner.{kind.value}.residual", res == 0, res)


def clifford_suite(target: str, tables: dict | None = None) -> VerificationReport:
    if target not in CLIFFORD_TARGETS:
        raise ValueError(f"unknown target {target!r}; choose from {CLIFFORD_TARGETS}")
    rep = VerificationReport(f"clifford:{target}")
    tables = tables or cr.default_tables()
    if target == "gamma4":
        sys4 = _build(rep, "gamma4.build", cr.build_gamma4, tables)
        if sys4 is None:
            return rep
        rep.add("gamma4.signature", sys4.signature() == "1(−)&3(+)", sys4.signature())
        _signed_perm_check(rep, "gamma4.signed_permutation", sys4.generators, sys4.names)
        with rep.timed():
            d = span_dimension(sys4.generators)
            rep.add("gamma4.span_dimension", d == 16, d)
        _intertwiner_checks(rep, sys4, expect_unique=False)
    elif target == "gamma11":
        sys11 = _build(rep, "gamma11.build", cr.build_gamma11, tables)
        if sys11 is None:
            return rep
        rep.add("gamma11.shape", sys11.n == 11 and sys11.size == 32, f"{sys11.n} generators of {sys11.size}x{sys11.size}")
        rep.add("gamma11.signature", sys11.signature() == "1(−)&10(+)", sys11.signature())
        _signed_perm_check(rep, "gamma11.signed_permutation", sys11.generators, sys11.names)
        n, big_n = cr.max_ms_parameters(5)
        rep.add("gamma11.max_ms_parameters", (n, big_n) == (sys11.n, sys11.size), f"k=5 -> (n={n}, N={big_n})")
        with rep.timed():
            d = span_dimension(sys11.generators)
            rep.add("gamma11.span_dimension", d == 1024, d)
        _intertwiner_checks(rep, sys11, expect_unique=True)
        _tail_consistency(rep, sys11, tables)
    elif target == "units":
        units = _build(rep, "units.build", cr.build_unit_system, tables)
        if units is None:
            return rep
        _signed_perm_check(rep, "units.signed_permutation", units.units, units.names)
        with rep.timed():
            table = cr.commutator_defect(units)
            off = [table[m][n] for m in range(7) for n in range(7) if m != n]
            diag_zero = all(table[m][m] == 0 for m in range(7))
            symmetric = all(table[m][n] == table[n][m] for m in range(7) for n in range(7))
            rep.add("units.commutator_defect.diagonal_zero", diag_zero, "0" if diag_zero else "nonzero")
            rep.add("units.commutator_defect.symmetric", symmetric, "yes" if symmetric else "no")
            rep.add("units.commutator_defect.nonzero_offdiagonal", any(off),
                    f"{sum(1 for x in off if x)}/42 entries nonzero",
                    "table rows: " + " | ".join(" ".join(str(x) for x in row) for row in table))
    else:
        _embeddings_checks(rep, tables)
    return rep


def _tail_consistency(rep, sys11: cr.CliffordSystem, tables):
    """gamma_{N+3} must be i rho2 sigma3 (x) (internal factors of I_N)."""
    with rep.timed():
        try:
            units = cr.build_unit_system(tables)
        except cr.CliffordError as e:
            rep.add("gamma11.internal_slots_match_units", False, "error", str(e))
            return
        lead = cr.pauli_table()[4]["irho2sigma3"]
        bad = []
        for k, u in enumerate(units.units):
            g = sys11.generators[4 + k]
            # u = E4 (x) X, so X is the leading 8x8 block of u
            x = ExactMatrix([[u[i, j] for j in range(8)] for i in range(8)])
            if kron(lead, x) != g:
                bad.append(sys11.names[4 + k])
        rep.add("gamma11.internal_slots_match_units", not bad, f"{7 - len(bad)}/7", f"mismatched: {bad}" if bad else "")


def _embeddings_checks(rep, tables):
    g4 = _build(rep, "embeddings.gamma4.build", cr.build_gamma4, tables)
    if g4 is None:
        return
    with rep.timed():
        d = span_dimension(g4.generators)
        rep.add("embeddings.real.span_dimension", d == 16, d)

    cu = cr.embed_complex_unit(tables)
    g8 = cr.enlarged_gamma4(2)
    eye8 = ExactMatrix.identity(8)
    with rep.timed():
        rep.add("embeddings.complex.unit_squares_to_minus_E", matmul(cu, cu) == -eye8, "I^2 = -E8" if matmul(cu, cu) == -eye8 else "no")
        comm = all(matmul(cu, g) == matmul(g, cu) for g in g8.generators)
        rep.add("embeddings.complex.commutes_with_gammas", comm, "yes" if comm else "no")
        d = span_dimension(list(g8.generators) + [cu])
        rep.add("embeddings.complex.span_dimension", d == 32, d)

    qu = cr.embed_quaternion_units(tables)
    g16 = cr.enlarged_gamma4(4)
    with rep.timed():
        o = cr.quaternion_orientation(qu)
        rep.add("embeddings.quaternion.relations", o is not None,
                "none" if o is None else f"I_a I_b = -delta_ab E {'+' if o > 0 else '-'} eps_abc I_c")
        comm = all(matmul(q, g) == matmul(g, q) for q in qu for g in g16.generators)
        rep.add("embeddings.quaternion.commutes_with_gammas", comm, "yes" if comm else "no")
        d = span_dimension(list(g16.generators) + qu)
        rep.add("embeddings.quaternion.span_dimension", d == 64, d)


# -- G2 -----------------------------------------------------------------------

def g2_dimension_suite() -> VerificationReport:
    rep = VerificationReport("g2:derivation-dim")
    with rep.timed():
        basis_ = g2.derivation_space()
        rep.add("derivation_space.dimension", len(basis_) == 14, len(basis_))
    with rep.timed():
        cons = g2.derivation_constraints()
        worst = max((matmul(cons, ExactMatrix.column(d.coordinates())).max_abs() for d in basis_), default=0)
        rep.add("derivation_space.constraint_residual", worst == 0, worst)
    with rep.timed():
        bad = [(i, j) for i in range(len(basis_)) for j in range(i + 1, len(basis_))
               if not g2.in_derivation_span(matmul(basis_[i].d, basis_[j].d) - matmul(basis_[j].d, basis_[i].d), basis_)]
        rep.add("derivation_space.lie_closure", not bad, f"{len(basis_) * (len(basis_) - 1) // 2 - len(bad)} brackets closed",
                f"open brackets {bad[:5]}" if bad else "")
    return rep


def g2_check_suite(g, source: str = "<input>") -> VerificationReport:
    rep = VerificationReport(f"g2:check {source}")
    t = g if isinstance(g, g2.UnitTransform) else g2.UnitTransform(g)
    with rep.timed():
        v = g2.check_automorphism(t)
        tol = "exact" if t.exact else f"tol {g2.FLOAT_TOL:g}"
        rep.add("automorphism.orthogonality", v.orthogonality_residual <= v.tolerance, v.orthogonality_residual, tol)
        rep.add("automorphism.structure_constants", v.structure_residual <= v.tolerance, v.structure_residual, tol)
    return rep


def g2_exp_suite(index: int, t: float) -> VerificationReport:
    rep = VerificationReport(f"g2:exp {index} {t:g}")
    basis_ = g2.derivation_space()
    if not 0 <= index < len(basis_):
        raise IndexError(f"basis index {index} out of range 0..{len(basis_) - 1}")
    with rep.timed():
        u = g2.exponentiate(basis_[index], t)
        v = g2.check_automorphism(u)
        rep.add("exp.orthogonality", v.orthogonality_residual <= g2.FLOAT_TOL, f"{v.orthogonality_residual:.3e}", f"tol {g2.FLOAT_TOL:g}")
        rep.add("exp.structure_constants", v.structure_residual <= g2.FLOAT_TOL, f"{v.structure_residual:.3e}", f"tol {g2.FLOAT_TOL:g}")
        back = u.compose(g2.exponentiate(basis_[index], -t)).as_float()
        err = float(np.abs(back - np.eye(7)).max())
        rep.add("exp.inverse_roundtrip", err <= 1e-10, f"{err:.3e}", "tol 1e-10")
    return rep


# -- perturbation and folds -------------------------------------------------

def perturb_suite(seed: PerturbationSeed, lambdas: Sequence = DEFAULT_LAMBDAS,
                  with_gamma11: bool = False) -> VerificationReport:
    rep = VerificationReport("perturb")
    lambdas = [Fraction(x) for x in lambdas]
    base_names = ("gamma0", "gamma1", "gamma2", "gamma3")
    for lam in lambdas:
        with rep.timed():
            res = clifford_residual(build_octonion_ds(seed.with_lambda(lam)))
            worst = max(r.max_abs() for r in res.values())
            ok = worst == 0 if lam == 0 else True
            rep.add(f"octonion4.residual@lambda={lam}", ok, worst, "must vanish at lambda = 0" if lam == 0 else "max-abs over entries")
    if len(set(lambdas)) >= 3:
        nodes = list(dict.fromkeys(lambdas))
        with rep.timed():
            poly = residual_polynomial(seed, nodes)
        for (a, b), (c0, c1, c2) in poly.coefficients.items():
            rep.add(f"octonion4.poly({base_names[a]},{base_names[b]})", c0 == 0 and c1 == 0,
                    f"c0={c0} c1={c1} c2={c2}")
        if len(nodes) > 3:
            rep.add("octonion4.poly.degree_at_most_2", poly.consistent, "yes" if poly.consistent else "no")
    if with_gamma11:
        for lam in lambdas:
            if lam == 0:
                with rep.timed():
                    res = gamma11_residual(build_perturbed_gamma11(seed.with_lambda(lam)))
                    worst = max(r.max_abs() for r in res.values())
                    rep.add("gamma11.residual@lambda=0", worst == 0, worst)
        if len(set(lambdas)) >= 3:
            nodes = list(dict.fromkeys(lambdas))
            with rep.timed():
                poly = gamma11_residual_polynomial(seed, nodes)
                worst = [max(c[k] for c in poly.coefficients.values()) for k in range(3)]
                rep.add("gamma11.poly.first_order_vanishes", poly.first_order_vanishes(),
                        f"max c0={worst[0]} c1={worst[1]} c2={worst[2]}")
        lam = next((x for x in lambdas if x != 0), DEFAULT_LAMBDAS[0])
        with rep.timed():
            sim = similarity_transform(seed.with_lambda(lam))
            bad = cr.clifford_failures(sim.generators, sim.metric)
            rep.add(f"gamma11.similarity_invariance@lambda={lam}", not bad, f"{66 - len(bad)}/66 pairs exact")
    return rep


def fold_suite(chain: AmplitudeChain) -> VerificationReport:
    rep = VerificationReport("fold")
    with rep.timed():
        left, right = fold_left(chain), fold_right(chain)
        diff, gap = fold_defect(chain)
        rep.add("fold.left", True, str(left))
        rep.add("fold.right", True, str(right))
        rep.add("fold.difference", True, str(diff), "zero" if diff.is_zero() else "folds differ")
        rep.add("fold.norm_gap", gap == 0, gap, "norms agree by multiplicativity")
        if len(chain) == 3:
            a = associator(*chain.amplitudes)
            rep.add("fold.difference_is_twice_associator", diff == a * 2, str(a * 2))
    return rep


def witness_chain() -> AmplitudeChain:
    return AmplitudeChain((basis(1), basis(2), basis(4)))


def verify_all(seed: int = DEFAULT_SEED) -> list[VerificationReport]:
    """Every suite in dependency order: octonions, matrix systems, G2, perturbation, folds."""
    from .perturbation import random_seed

    reports = [octonion_suite(seed=seed)]
    reports += [clifford_suite(t) for t in ("units", "gamma4", "gamma11", "embeddings")]
    reports.append(g2_dimension_suite())
    reports += [g2_exp_suite(0, 0.3)]
    reports.append(perturb_suite(random_seed(seed), DEFAULT_LAMBDAS, with_gamma11=True))
    reports.append(fold_suite(witness_chain()))
    return reports
