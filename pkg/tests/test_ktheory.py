from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from elliott.ktheory import (
    AffineFurstenbergTorus,
    SphereTimesCircle,
    ThetaSymbol,
    UnsupportedSpecError,
    exterior_power,
    furstenberg_degree1_matrix,
    furstenberg_induced_map,
    space_ktheory,
    torus_ktheory,
)
from elliott.zlinalg import IntMatrix, is_unimodular

THETA = ThetaSymbol("theta", Fraction("0.5624"), Fraction("0.5626"))


def torus(exps, **kw):
    return AffineFurstenbergTorus(len(exps) + 1, tuple(exps), THETA, **kw)


def test_torus_bases():
    kt = torus_ktheory(3)
    assert kt.k0_basis == ((), (1, 2), (1, 3), (2, 3))
    assert kt.k1_basis == ((1,), (2,), (3,), (1, 2, 3))
    assert kt.k0_names == ("eta1", "eta2", "eta3", "eta4")
    assert kt.k1_names == ("gamma1", "gamma2", "gamma3", "gamma4")
    c = torus_ktheory(1)
    assert c.k0_basis == ((),) and c.k1_basis == ((1,),)
    two = torus_ktheory(2)
    assert (len(two.k0_basis), len(two.k1_basis)) == (2, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_torus_basis_sizes(n):
    kt = torus_ktheory(n)
    assert len(kt.k0_basis) == len(kt.k1_basis) == 2 ** (n - 1)
    assert kt.k0_basis[0] == ()


@pytest.mark.parametrize("m,n", [(2, 3), (1, 1), (4, 6), (-2, 5), (7, -1)])
def test_t3_matrices_match_closed_form(m, n):
    h = furstenberg_induced_map(torus([m, n]))
    I = IntMatrix.identity(4)
    k1 = IntMatrix.from_rows([[0, -m, 0, 0], [0, 0, -n, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    k0 = IntMatrix.from_rows([[0, 0, 0, 0], [0, 0, -n, -m * n], [0, 0, 0, -m], [0, 0, 0, 0]])
    assert I - h.on_k1 == k1
    assert I - h.on_k0 == k0


def test_eta4_image():
    # h*(eta4) = m n eta2 + m eta3 + eta4
    m, n = 2, 3
    h = furstenberg_induced_map(torus([m, n]))
    assert h.on_k0.col(3) == (0, m * n, m, 1)
    # h*(gamma2) = m gamma1 + gamma2
    assert h.on_k1.col(1) == (m, 1, 0, 0)


def test_t2_matrices():
    h = furstenberg_induced_map(torus([5]))
    assert IntMatrix.identity(2) - h.on_k1 == IntMatrix.from_rows([[0, -5], [0, 0]])
    assert (IntMatrix.identity(2) - h.on_k0).is_zero()


def test_zero_exponents_identity():
    h = furstenberg_induced_map(torus([0, 0, 0]))
    assert h.on_k0 == IntMatrix.identity(8) and h.on_k1 == IntMatrix.identity(8)


def test_cocycle_flag_never_changes_hstar():
    assert furstenberg_induced_map(torus([1])) == furstenberg_induced_map(torus([1], cocycle_perturbed=True))


exponent_lists = st.integers(1, 4).flatmap(lambda k: st.lists(st.integers(-6, 6), min_size=k, max_size=k))


@settings(max_examples=60, deadline=None)
@given(exponent_lists)
def test_exterior_power_matches_wedge_expansion(exps):
    n = len(exps) + 1
    h = furstenberg_induced_map(torus(exps))
    A = oracles.furstenberg_matrix(exps)
    assert h.on_k0.to_rows() == oracles.wedge_action(A, oracles.subsets(n, 0))
    assert h.on_k1.to_rows() == oracles.wedge_action(A, oracles.subsets(n, 1))
    assert is_unimodular(h.on_k0) and is_unimodular(h.on_k1)
    assert h.extrapolated == (n > 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_exterior_power_functorial(a, b):
    A, B = IntMatrix.from_rows(a), IntMatrix.from_rows(b)
    for parity in (0, 1):
        basis = oracles.subsets(3, parity)
        lhs = exterior_power(A @ B, basis, basis)
        rhs = exterior_power(A, basis, basis) @ exterior_power(B, basis, basis)
        assert lhs == rhs


def test_degree1_matrix():
    assert furstenberg_degree1_matrix([2, 3]) == IntMatrix.from_rows([[1, 2, 0], [0, 1, 3], [0, 0, 1]])


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_sphere_circle(d):
    kt, h = space_ktheory(SphereTimesCircle(d, THETA))
    assert len(kt.k0_basis) == len(kt.k1_basis) == 2
    assert h.on_k0 == IntMatrix.identity(2) and h.on_k1 == IntMatrix.identity(2)
    assert kt.k0_basis[0] == "[1]x[1]"


@pytest.mark.parametrize("d", [0, 1, 4, 6])
def test_sphere_circle_rejects(d):
    with pytest.raises(UnsupportedSpecError):
        SphereTimesCircle(d, THETA)


def test_spec_validation():
    with pytest.raises(UnsupportedSpecError):
        AffineFurstenbergTorus(1, (), THETA)
    with pytest.raises(ValueError):
        AffineFurstenbergTorus(3, (1,), THETA)


def test_theta_validation():
    with pytest.raises(ValueError, match="lo < hi"):
        ThetaSymbol("t", Fraction(7, 10), Fraction(6, 10))
    with pytest.raises(ValueError, match="lower bound"):
        ThetaSymbol("t", Fraction(0), Fraction(1, 2))
    with pytest.raises(ValueError, match="upper bound"):
        ThetaSymbol("t", Fraction(1, 2), Fraction(1))
    assert ThetaSymbol("t", 0.25, 0.5).lo == Fraction(1, 4)
    assert THETA.midpoint == Fraction("0.5625")
