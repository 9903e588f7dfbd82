from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from iainfty.corpus import (acyclic_dga, broken_associativity, cyclic_group, dual_numbers, m3_example,
                            upper_triangular)
from iainfty.field import FieldSpec
from iainfty.hochschild import (CHAR_TWO, MODES, _dense_rank, certify_window, classical_oracle,
                                cochain_model_compare, cohh, hh, hochschild_chains, hochschild_cochains,
                                oracle_data, small_model_compare)
from iainfty.linalg import StructuralError

# Produced by classical_oracle (dense, standard Hochschild complex) and frozen.
# Keys: fixture -> kind -> mode -> {degree: dim}; None marks an involution
# that does not commute with the classical differential.
ORACLE = {
    "K": {k: {m: {0: 1, 1: 0, 2: 0, 3: 0} for m in (None, "letterwise", "reversal")}
          for k in ("homology", "cohomology")},
    "dual": {k: {None: {0: 2, 1: 1, 2: 1, 3: 1}, "letterwise": {0: 2, 1: 1, 2: 1, 3: 1},
                 "reversal": {0: 2, 1: 0, 2: 0, 3: 1}} for k in ("homology", "cohomology")},
    "C2": {k: {m: {0: 2, 1: 0, 2: 0, 3: 0} for m in (None, "letterwise", "reversal")}
           for k in ("homology", "cohomology")},
    "C4": {k: {None: {0: 4, 1: 0, 2: 0}, "letterwise": {0: 3, 1: 0, 2: 0}, "reversal": {0: 3, 1: 0, 2: 0}}
           for k in ("homology", "cohomology")},
    "UT2": {"homology": {None: {0: 2, 1: 0, 2: 0}, "letterwise": None, "reversal": {0: 1, 1: 0, 2: 0}},
            "cohomology": {None: {0: 1, 1: 0, 2: 0}, "letterwise": None, "reversal": {0: 1, 1: 0, 2: 0}}},
}
WEIGHT = {"K": 4, "dual": 4, "C2": 4, "C4": 3, "UT2": 3}


def test_oracle_textbook_values():
    # HH_0 = A/[A,A], HH^0 = centre, dual numbers: one class in each positive degree (char 0)
    # and two in characteristic 2, where K[e]/e^2 = F_2[C_2].
    b, m, _ = oracle_data(upper_triangular())
    assert classical_oracle(b, m, 0)[0] == 2
    assert classical_oracle(b, m, 0, "cohomology")[0] == 1
    b, m, _ = oracle_data(dual_numbers())
    assert classical_oracle(b, m, 4) == {0: 2, 1: 1, 2: 1, 3: 1, 4: 1}
    assert classical_oracle(b, m, 3, p=2) == {0: 2, 1: 2, 2: 2, 3: 2}
    b, m, _ = oracle_data(cyclic_group(3))
    assert classical_oracle(b, m, 2, p=3) == {0: 3, 1: 3, 2: 3}


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_oracle_frozen(fixtures, name):
    b, m, star = oracle_data(fixtures[name])
    for kind, table in ORACLE[name].items():
        n = max(table[None])
        for mode, dims in table.items():
            if dims is None:
                with pytest.raises(ValueError, match="does not commute"):
                    classical_oracle(b, m, n, kind, star=star, involution=mode)
            elif name != "C4":  # about a minute in the dense oracle; frozen above
                assert classical_oracle(b, m, n, kind, star=star, involution=mode) == dims


def test_oracle_rejections():
    b, m, _ = oracle_data(broken_associativity())
    with pytest.raises(ValueError, match="associative"):
        classical_oracle(b, m, 1)
    b, m, st_ = oracle_data(cyclic_group(2))
    with pytest.raises(ValueError):
        classical_oracle(b, m, 1, p=2, star=st_, involution="reversal")
    with pytest.raises(ValueError):
        oracle_data(m3_example())


entries = st.integers(-4, 4)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_dense_rank_matches_sympy(r, c, data):
    rows = [[data.draw(entries) for _ in range(c)] for _ in range(r)]
    assert _dense_rank(rows, 0) == sympy.Matrix(rows).rank()
    assert _dense_rank([[Fraction(x, 3) for x in row] for row in rows], 0) == sympy.Matrix(rows).rank()


@pytest.mark.parametrize("model", ["bar", "small"])
@pytest.mark.parametrize("name", sorted(ORACLE))
def test_engine_matches_oracle(fixtures, name, model):
    a = fixtures[name]
    L = WEIGHT[name]
    for kind, fn in (("homology", hh), ("cohomology", cohh)):
        rep = fn(a, None, L, model)
        table = ORACLE[name][kind]
        degs = rep.degrees
        assert degs == sorted(table[None])
        assert rep.ordinary == table[None]
        for mode in MODES:
            if table[mode] is None:
                assert rep.involutive[mode] is None and rep.findings[mode] is not None
            else:
                assert rep.involutive[mode] == table[mode]


@pytest.mark.parametrize("name", ["K", "dual", "C2", "C4", "UT2", "dga", "m3"])
def test_trivial_involution_collapse(fixtures, name):
    a = fixtures[name].with_involution(None)
    for fn in (hh, cohh):
        rep = fn(a, None, 3, "bar", ("letterwise",))
        assert rep.involutive["letterwise"] == rep.ordinary


@pytest.mark.parametrize("name", ["K", "dual", "C2", "C4", "UT2", "dga", "m3"])
def test_models_agree(fixtures, name):
    for cmp in (small_model_compare(fixtures[name], None, 3), cochain_model_compare(fixtures[name], None, 3)):
        assert cmp.agree, cmp.first_mismatch
        assert "ordinary" in cmp.bar


def test_letterwise_fails_for_noncommutative():
    rep = hh(upper_triangular(), None, 3)
    assert rep.involutive["letterwise"] is None
    assert rep.findings["letterwise"] == (("m", "e11"), ("a", "e12"))
    with pytest.raises(StructuralError):
        hochschild_chains(upper_triangular(), None, 3).dims("letterwise")


def test_m3_reversal_values():
    # frozen from the engine; both models agree (see test_models_agree)
    assert hh(m3_example(), None, 3).involutive["reversal"] == {0: 2, 1: 0, 2: 1}
    assert cohh(m3_example(), None, 3).involutive["reversal"] == {0: 2, 1: 0}


def test_dga_is_like_ground_field():
    assert hh(acyclic_dga(), None, 3).ordinary == {0: 1, 1: 0, 2: 0}


def test_characteristic_two_suppresses_involutive_dims():
    rep = hh(dual_numbers(FieldSpec.prime(2)), None, 4)
    assert rep.ordinary == {0: 2, 1: 2, 2: 2, 3: 2}
    assert rep.involutive == {"letterwise": None, "reversal": None}
    assert rep.findings["reversal"] == CHAR_TWO
    with pytest.raises(ValueError):
        hochschild_cochains(dual_numbers(FieldSpec.prime(2)), None, 2).dims("reversal")


def test_prime_field_models_agree():
    a = cyclic_group(3, FieldSpec.prime(3))
    assert small_model_compare(a, None, 3).agree
    assert hh(a, None, 3).ordinary == {0: 3, 1: 3, 2: 3}


def test_certify_window_examples():
    K = cyclic_group(1)
    assert certify_window(K, None, 5) == (0, 4)
    assert certify_window(K, None, 0) == (0, -1)
    assert certify_window(K, None, 3, "cochains") == (0, 2)
    assert certify_window(K, None, 3, "chains", "small") == (0, 2)
    assert certify_window(acyclic_dga(), None, 3, "cochains") == (0, 1)
    with pytest.raises(ValueError):
        certify_window(K, None, 3, "other")


def test_chain_models_square_zero(fixtures):
    for name in ("dual", "UT2", "m3"):
        for model in ("bar", "small"):
            assert hochschild_chains(fixtures[name], None, 3, model).complex().square_zero_failure() is None
            assert hochschild_cochains(fixtures[name], None, 3, model).hom.complex().square_zero_failure() is None
