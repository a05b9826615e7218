import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avlab.groebner import Ideal, ideal_equal
from avlab.polymatroid import (
    NotABase,
    SetSystem,
    base_ring,
    base_ring_kernel,
    check_pseudo_white,
    is_base,
    monomial_images,
    pseudo_white_presentation,
    symmetric_exchange_quadrics,
    transversal_av_kernel,
    transversal_base,
    white_check,
)

EXAMPLE = SetSystem.of([{2, 3}, {1, 3}, {1, 2}])


def test_is_base_examples():
    assert is_base([(1, 0), (0, 1)])
    assert not is_base([(2, 0), (0, 2)])
    assert is_base([(2, 0), (1, 1), (0, 2)])
    assert not is_base([(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        is_base([(1, 0), (1,)])


def test_transversal_examples():
    assert transversal_base(SetSystem.of([{1}, {2}])) == [(1, 1)]
    assert sorted(transversal_base(SetSystem.of([{1, 2}, {1, 2}]))) == [(0, 2), (1, 1), (2, 0)]
    assert len(transversal_base(EXAMPLE)) == 7


def test_setsystem_io():
    assert SetSystem.parse(EXAMPLE.dump()) == EXAMPLE
    with pytest.raises(ValueError):
        SetSystem.of([[]], 3)
    with pytest.raises(ValueError):
        SetSystem.of([[4]], 3)


set_systems = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.sets(st.integers(1, n), min_size=1), min_size=1, max_size=4).map(
        lambda sets: SetSystem.of(sets, n)))


@given(set_systems)
def test_transversal_is_base(C):
    assert is_base(transversal_base(C))


def test_base_ring_kernel_examples():
    assert base_ring_kernel([(1, 0), (0, 1)]).is_zero()
    B = [(2, 0), (1, 1), (0, 2)]
    K = base_ring_kernel(B)
    ring = K.ring
    assert ideal_equal(K, Ideal(ring, ["b[2,0]*b[0,2] - b[1,1]^2"]))


def test_symmetric_exchange_examples():
    B = [(2, 0), (1, 1), (0, 2)]
    Q = symmetric_exchange_quadrics(B)
    assert len(Q.gens) == 1
    assert symmetric_exchange_quadrics([(1, 1)]).is_zero()
    with pytest.raises(NotABase):
        symmetric_exchange_quadrics([(2, 0), (0, 2)])


def test_pseudo_white_example():
    I = pseudo_white_presentation(EXAMPLE)
    ring = I.ring
    linear = [g for g in I.gens if g.total_degree() == 1]
    assert len(I.gens) == 10 and len(linear) == 1
    assert linear[0] == ring.parse("s[2,3,1] - s[3,1,2]") or linear[0] == ring.parse("s[3,1,2] - s[2,3,1]")
    assert check_pseudo_white(EXAMPLE)
    assert pseudo_white_presentation(SetSystem.of([{1}, {2}])).is_zero()


@pytest.mark.parametrize("seed", range(6))
def test_pseudo_white_random(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    m = rng.randint(2, 3)
    C = SetSystem.of([rng.sample(range(1, n + 1), rng.randint(1, min(2, n))) for _ in range(m)], n)
    P = pseudo_white_presentation(C)
    K = transversal_av_kernel(C)
    for g in P.gens:
        assert K.contains(g)
    assert ideal_equal(P, K)


@pytest.mark.parametrize("sets", [[{1, 2}, {1, 2}], [{1, 2}, {2, 3}], [{2, 3}, {1, 3}, {1, 2}], [{1, 2, 3}, {1, 2, 3}]])
def test_white_experiment(sets):
    B = transversal_base(SetSystem.of(sets))
    K = base_ring_kernel(B)
    imgs = monomial_images(B)
    for g in K.gens:
        assert g.substitute(imgs).is_zero()
    for q in symmetric_exchange_quadrics(B).gens:
        assert K.contains(q.to_ring(K.ring))
    assert white_check(B) in ("holds", "fails")
    assert base_ring(B).nvars == len(B)
