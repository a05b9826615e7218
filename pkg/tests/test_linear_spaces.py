import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avlab.field import FieldConfig
from avlab.groebner import Ideal, ideal_equal
from avlab.lattice import PointPoset, hibi_relations
from avlab.linear_spaces import (
    DiagonalBoundError,
    LinearSpaceFamily,
    av_diagonal,
    av_direct,
    av_presentation,
    build_L,
    bv_kernel,
    diagonal_Q,
    primdec_check,
    product_dimension,
    sample_generic_family,
    segre_images,
    truncated_size,
)
from avlab.ring import RingContext
from oracles import brute_dim_product

EXAMPLE = LinearSpaceFamily.monomial([[2, 3], [1, 3], [1, 2]], 3)


def test_family_validation_and_io():
    with pytest.raises(ValueError):
        LinearSpaceFamily(2, (((1, 1), (2, 2)),))
    V = sample_generic_family(2, 3, (2, 1), seed=4)
    assert LinearSpaceFamily.parse(V.dump()) == V
    assert sample_generic_family(2, 3, (2, 1), seed=4) == V
    with pytest.raises(ValueError):
        LinearSpaceFamily.parse("2 3 1 1\n1 0 0\n")
    with pytest.raises(ValueError):
        sample_generic_family(1, 2, (2,), seed=0, field=FieldConfig.rationals())


def test_sample_full_rank():
    V = sample_generic_family(1, 2, (2,), seed=9)
    assert V.d == (2,)


def test_build_L_monomial_is_variable_matrix():
    L = build_L(EXAMPLE)
    for i in range(3):
        for j in range(3):
            assert L.entries[i][j] == L.ring.var(f"t[{i + 1},{j + 1}]")


def test_build_L_contract():
    V = LinearSpaceFamily(2, (((1, 1), (0, 1)),))
    L = build_L(V)
    XY, images = segre_images(V, L)
    for j in range(2):
        assert L.entries[0][j].substitute(images, XY) == XY.var("y[1]") * XY.var(f"x[{j + 1}]")


@pytest.mark.parametrize("seed", range(4))
def test_minors_vanish_on_rank_one_specialisation(seed):
    V = sample_generic_family(3, 3, (2, 1, 3), seed)
    L = build_L(V)
    XY, images = segre_images(V, L)
    for f in L.minors():
        assert f.substitute(images, XY).is_zero()
        for i in range(3):
            for j in range(3):
                assert L.entries[i][j].substitute(images, XY) == XY.var(f"y[{i + 1}]") * XY.var(f"x[{j + 1}]")


def test_bv_example():
    res = bv_kernel(EXAMPLE)
    assert len(res.ideal.gens) == 1
    target = res.ring.parse("t[1,2]*t[2,3]*t[3,1] - t[1,3]*t[2,1]*t[3,2]")
    assert ideal_equal(res.ideal, Ideal(res.ring, [target]))
    assert res.vanishes()


def test_bv_single_space():
    assert bv_kernel(sample_generic_family(1, 3, (2,), 0)).ideal.is_zero()


def test_av_example_routes_agree():
    direct, diag, equal = av_presentation(EXAMPLE, "both")
    assert equal and direct.vanishes() and diag.vanishes()
    ring = direct.ring
    H = PointPoset.boxes([{2, 3}, {1, 3}, {1, 2}])
    expected = Ideal(ring, hibi_relations(H, ring) + [ring.parse("s[2,3,1] - s[3,1,2]")])
    assert ideal_equal(direct.ideal, expected)
    Q = diag.info["Q"]
    assert len(Q.gens) == 1 and Q.gens[0].total_degree() == 1


def test_av_single_space():
    V = sample_generic_family(1, 3, (2,), 0)
    assert av_direct(V).ideal.is_zero()


def test_diagonal_q_zero_and_bound():
    ring = RingContext.t_ring(2, 2)
    s = PointPoset.product((2, 2)).ring()
    assert diagonal_Q(Ideal(ring, []), [[1, 2], [1, 2]], s).is_zero()
    with pytest.raises(DiagonalBoundError):
        diagonal_Q(Ideal(ring, ["t[1,1]^2*t[2,2] - t[1,2]^2*t[2,1]"]), [[1, 2], [1, 2]], s)


def test_generic_222_relations():
    V = sample_generic_family(3, 3, (2, 2, 2), seed=1)
    res = av_direct(V, "truncated")
    assert res.vanishes()
    ring = res.ring
    assert res.ideal.contains(ring.parse("s[1,2,1]*s[2,1,1] - s[1,1,1]*s[2,2,1]"))
    assert len(ring.names) == 7


@pytest.mark.parametrize("seed", range(3))
def test_routes_agree_generic(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 3)
    V = sample_generic_family(m, 3, tuple(rng.randint(1, 2) for _ in range(m)), seed)
    a, b, equal = av_presentation(V, "both")
    assert equal


def test_product_dimension_examples():
    assert product_dimension(sample_generic_family(3, 3, (2, 2, 2), 5)) == 7 == truncated_size((2, 2, 2), 3)
    assert product_dimension(sample_generic_family(2, 3, (2, 2), 5)) == 4
    assert product_dimension(EXAMPLE) == 7


@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_product_dimension_matches_oracle_and_bound(m, n, data):
    d = tuple(data.draw(st.integers(1, n)) for _ in range(m))
    seed = data.draw(st.integers(0, 10**6))
    V = sample_generic_family(m, n, d, seed)
    dim = product_dimension(V)
    assert dim == brute_dim_product(V.spaces, n, V.field.p)
    assert dim <= truncated_size(d, n)
    if sum(d) >= m + n:
        prod = 1
        for k in d:
            prod *= k
        assert dim < prod


def test_primdec_examples():
    assert primdec_check(sample_generic_family(1, 2, (1,), 0)).equal
    V = LinearSpaceFamily.monomial([[1], [2]], 2)
    v = primdec_check(V)
    assert v.equal and ideal_equal(v.lhs, Ideal(v.lhs.ring, ["x[1]*x[2]"]))
    v = primdec_check(EXAMPLE)
    assert v.equal and v.ranks_ok
    with pytest.raises(ValueError):
        primdec_check(sample_generic_family(5, 2, (1,) * 5, 0))
