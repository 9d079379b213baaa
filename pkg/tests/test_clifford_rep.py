import copy
import json

import numpy as np
import pytest

from octodirac import clifford_rep as cr
from octodirac.exact_linalg import ExactMatrix, kron, matmul, span_dimension

E2 = ExactMatrix.identity(2)
E4 = ExactMatrix.identity(4)
E32 = ExactMatrix.identity(32)


def float_anticommutators(gens):
    """Dense numpy oracle: {g_a, g_b} for every pair."""
    fl = [np.array(g.to_float()) for g in gens]
    return {(a, b): fl[a] @ fl[b] + fl[b] @ fl[a] for a in range(len(fl)) for b in range(len(fl))}


class TestPauliTable:
    def test_two_by_two(self):
        t = cr.pauli_table()[2]
        assert matmul(t["isigma2"], t["isigma2"]) == -E2
        assert matmul(t["sigma1"], t["sigma1"]) == E2
        assert t["isigma2"] == ExactMatrix([[0, 1], [-1, 0]])

    def test_four_by_four(self):
        t = cr.pauli_table()[4]
        assert matmul(t["irho2sigma1"], t["irho2sigma1"]) == -E4
        assert t["rho1sigma3"] == kron(cr.pauli_table()[2]["sigma1"], cr.pauli_table()[2]["sigma3"])
        assert len(t) == 16

    def test_every_entry_is_a_real_signed_permutation(self):
        for size, mats in cr.pauli_table().items():
            for name, m in mats.items():
                assert m.shape == (size, size)
                assert m.is_signed_permutation(), name

    def test_squares_are_plus_or_minus_identity(self):
        for name, m in cr.pauli_table()[4].items():
            sq = matmul(m, m)
            assert sq == (-E4 if name.startswith("i") else E4), name

    def test_unknown_factor(self):
        with pytest.raises(cr.CliffordError) as info:
            cr.build_matrix({"name": "bad", "factors": ["nope"]}, [4])
        assert "bad" in str(info.value)

    def test_bad_sign(self):
        with pytest.raises(cr.CliffordError):
            cr.build_matrix({"name": "x", "sign": 2, "factors": ["E4"]}, [4])


class TestUnits:
    def test_shape_and_type(self, units):
        assert len(units.units) == 7
        for u in units.units:
            assert u.shape == (32, 32)
            assert u.is_signed_permutation()

    def test_examples(self, units):
        assert matmul(units[1], units[1]) == -E32
        assert (matmul(units[1], units[2]) + matmul(units[2], units[1])).is_zero()

    def test_anticommutators_against_float_oracle(self, units):
        for (a, b), m in float_anticommutators(units.units).items():
            want = -2 * np.eye(32) if a == b else np.zeros((32, 32))
            np.testing.assert_array_equal(m, want)

    def test_index_bounds(self, units):
        with pytest.raises(IndexError):
            units[0]
        with pytest.raises(IndexError):
            units[8]

    def test_commutator_defect(self, units):
        table = cr.commutator_defect(units)
        for m in range(7):
            assert table[m][m] == 0
            for n in range(7):
                assert table[m][n] == table[n][m]
                if m != n:
                    assert table[m][n] == 2


class TestGamma11:
    def test_examples(self, gamma11):
        g = gamma11.generators
        assert matmul(g[0], g[0]) == -E32
        assert matmul(g[1], g[1]) == E32
        assert (matmul(g[0], g[5]) + matmul(g[5], g[0])).is_zero()

    def test_signature(self, gamma11):
        assert gamma11.n == 11
        assert gamma11.size == 32
        assert gamma11.signature() == "1(−)&10(+)"
        assert gamma11.failures() == []

    def test_against_float_oracle(self, gamma11):
        metric = [float(x) for x in gamma11.metric]
        for (a, b), m in float_anticommutators(gamma11.generators).items():
            want = 2 * metric[a] * np.eye(32) if a == b else np.zeros((32, 32))
            np.testing.assert_array_equal(m, want)

    def test_exact_path_agrees_with_fast_path(self, gamma11):
        gens = list(gamma11.generators)
        # a metric entry of 2 forces the generic exact path
        scaled = [g.scale(2) for g in gens[:3]]
        assert cr.clifford_failures(scaled, [-4, 4, 4]) == []
        assert cr.clifford_failures(gens[:3], [-1, 1, 1]) == []

    def test_dense_failure(self):
        a = ExactMatrix([[1, 1], [0, 1]])
        assert cr.clifford_failures([a], [1]) == [(0, 0)]

    def test_space_time_slots_match_gamma4(self, gamma11, gamma4):
        for a in range(4):
            g = gamma4.generators[a]
            assert gamma11.generators[a] == kron(g, ExactMatrix.identity(8))

    def test_internal_slots_match_units(self, gamma11, units):
        irho2sigma3 = cr.pauli_table()[4]["irho2sigma3"]
        for n in range(1, 8):
            assert gamma11.generators[3 + n] == matmul(kron(irho2sigma3, ExactMatrix.identity(8)), units[n])

    def test_full_span(self, gamma11):
        assert span_dimension(gamma11.generators) == 1024


class TestGamma4:
    def test_examples(self, gamma4):
        g = gamma4.generators
        assert matmul(g[0], g[0]) == -E4
        for a in range(4):
            for b in range(a + 1, 4):
                assert (matmul(g[a], g[b]) + matmul(g[b], g[a])).is_zero()

    def test_span(self, gamma4):
        assert span_dimension(gamma4.generators) == 16

    def test_metric(self, gamma4):
        assert list(gamma4.metric) == [-1, 1, 1, 1]


class TestEmbeddings:
    def test_complex_unit(self):
        c = cr.embed_complex_unit()
        assert c.shape == (8, 8)
        assert matmul(c, c) == -ExactMatrix.identity(8)

    def test_complex_span(self):
        c = cr.embed_complex_unit()
        gens = list(cr.enlarged_gamma4(2).generators) + [c]
        assert span_dimension(gens) == 32

    def test_quaternion_units(self):
        qs = cr.embed_quaternion_units()
        eye = ExactMatrix.identity(16)
        for q in qs:
            assert matmul(q, q) == -eye
        # with the real convention isigma2 = [[0, 1], [-1, 0]] the product is -I3
        assert matmul(qs[0], qs[1]) == -qs[2]
        assert cr.quaternion_orientation(qs) == -1

    def test_orientation_flips_with_a_reversed_unit(self):
        qs = cr.embed_quaternion_units()
        assert cr.quaternion_orientation([qs[0], qs[1], -qs[2]]) == 1

    def test_orientation_none_for_non_units(self):
        qs = cr.embed_quaternion_units()
        assert cr.quaternion_orientation([qs[0], qs[0], qs[2]]) is None

    def test_quaternion_span(self):
        gens = list(cr.enlarged_gamma4(4).generators) + cr.embed_quaternion_units()
        assert span_dimension(gens) == 64

    def test_units_commute_with_space_time(self):
        eg = cr.enlarged_gamma4(4).generators
        for q in cr.embed_quaternion_units():
            for g in eg:
                assert matmul(q, g) == matmul(g, q)


class TestMaxMs:
    @pytest.mark.parametrize("k,expected", [(1, (3, 2)), (2, (5, 4)), (5, (11, 32))])
    def test_values(self, k, expected):
        assert cr.max_ms_parameters(k) == expected

    def test_gamma11_matches_k5(self, gamma11):
        assert cr.max_ms_parameters(5) == (gamma11.n, gamma11.size)

    @pytest.mark.parametrize("k", [0, -1])
    def test_rejects_nonpositive(self, k):
        with pytest.raises(ValueError):
            cr.max_ms_parameters(k)


class TestIntertwiner:
    def test_symmetric_pair(self):
        s1 = ExactMatrix([[0, 1], [1, 0]])
        s3 = ExactMatrix([[1, 0], [0, -1]])
        system = cr.CliffordSystem((s1, s3), (1, 1)).verify()
        found = cr.find_intertwiner(system, "hermitizing")
        assert found.dimension == 1
        assert found.matrix == E2
        assert cr.find_intertwiner(system, "anti_hermitizing") is not None

    def test_gamma11_exactly_one_kind(self, gamma11):
        herm = cr.find_intertwiner(gamma11, cr.IntertwinerKind.HERMITIZING)
        anti = cr.find_intertwiner(gamma11, cr.IntertwinerKind.ANTI_HERMITIZING)
        assert herm is None
        assert anti is not None and anti.dimension == 1
        assert cr.intertwiner_residual(gamma11, anti.matrix, anti.kind) == 0
        assert not anti.matrix.is_zero()

    def test_residual_nonzero_for_wrong_matrix(self, gamma11):
        assert cr.intertwiner_residual(gamma11, E32, "hermitizing") > 0

    def test_bad_kind(self, gamma4):
        with pytest.raises(ValueError):
            cr.find_intertwiner(gamma4, "sideways")


def _corrupt(tables, block, index, factor_pos, new):
    t = copy.deepcopy(tables)
    t[block]["records"][index]["factors"][factor_pos] = new
    return t


class TestNegativeControls:
    def test_unit_factor_corruption_is_named(self):
        tables = cr.default_tables()
        bad = _corrupt(tables, "units", 2, 1, "sigma1")
        with pytest.raises(cr.CliffordError) as info:
            cr.build_unit_system(bad)
        assert info.value.names[0] == "I3"
        assert "I3" in str(info.value)

    def test_gamma_factor_corruption_is_named(self):
        tables = cr.default_tables()
        bad = _corrupt(tables, "gamma11", 6, 2, "sigma3")
        with pytest.raises(cr.CliffordError) as info:
            cr.build_gamma11(bad)
        assert info.value.names[0] == "gamma6"

    def test_sign_flip_of_time_generator_breaks_metric(self):
        tables = cr.default_tables()
        tables["gamma11"]["records"][0]["factors"][0] = "rho1"
        with pytest.raises(cr.CliffordError) as info:
            cr.build_gamma11(tables)
        assert "gamma0" in str(info.value)

    def test_wrong_unit_count(self):
        tables = cr.default_tables()
        del tables["units"]["records"][-1]
        with pytest.raises(cr.CliffordError):
            cr.build_unit_system(tables)

    def test_load_tables_roundtrip(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps(cr.default_tables()))
        assert cr.build_gamma11(cr.load_tables(path)).n == 11

    def test_default_tables_are_copies(self):
        t = cr.default_tables()
        t["units"]["records"].clear()
        assert len(cr.default_tables()["units"]["records"]) == 7
