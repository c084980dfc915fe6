import random
from fractions import Fraction

import pytest

from conftest import random_corpus
from sparseinv.rankcert import (
    AMBIGUOUS,
    INCONSISTENT,
    inherent_delay,
    rank_condition,
    rank_table,
    recover_inputs,
)
from sparseinv.sysmodel import LinSystem, simulate

CORPUS = random_corpus(41, 80)

# one step of pure delay: y[k+1] = u[k]
DELAY = LinSystem.from_lists([[0]], [[1]], [[1]], [[0]])


def test_pure_delay_reaches_the_observability_index():
    cert = inherent_delay(DELAY, 1)
    assert cert.invertible
    assert cert.delay == 1 == cert.nu


def test_direct_feedthrough_needs_no_delay():
    sysm = LinSystem.from_lists([[1]], [[1, 0]], [[1], [0]], [[1, 0], [0, 1]])
    cert = inherent_delay(sysm, 1)
    assert cert.invertible and cert.delay == 0


def test_sigma_tables(sigma0, sigma1):
    ok, S = rank_condition(sigma1, 1, 1)
    assert ok and S is None
    assert not rank_condition(sigma1, 1, 0)[0]
    assert len(rank_table(sigma1, 1, 1)) == 36
    c0 = inherent_delay(sigma0, 1)
    assert not c0.invertible and c0.failing_support is not None
    with pytest.raises(ValueError):
        rank_table(sigma1, 1, -1)


@pytest.mark.parametrize("sysm", CORPUS)
def test_delay_bound_and_monotonicity(sysm):
    cert = inherent_delay(sysm, 1)
    if not cert.invertible:
        return
    assert 0 <= cert.delay <= cert.nu
    assert all(not rank_condition(sysm, 1, N)[0] for N in range(cert.delay))
    assert rank_condition(sysm, 1, cert.delay + 1)[0]


def _sparse_inputs(rng, m, length, s=1):
    out = []
    for _ in range(length):
        v = [Fraction(0)] * m
        for i in rng.sample(range(m), min(s, m)):
            v[i] = Fraction(rng.randint(-3, 3))
        out.append(tuple(v))
    return out


@pytest.mark.parametrize("sysm", [s for s in CORPUS if inherent_delay(s, 1).invertible][:25])
def test_recovery_round_trip_on_invertible_systems(sysm):
    rng = random.Random(sysm.n * 100 + sysm.m * 10 + sysm.p)
    d = inherent_delay(sysm, 1).delay
    u = _sparse_inputs(rng, sysm.m, 12)
    y = simulate(sysm, None, u + [tuple([0] * sysm.m)] * d)
    res = recover_inputs(sysm, 1, d, y)
    assert res.ok and list(res.inputs) == u


def test_zero_outputs_give_zero_inputs(sigma1):
    res = recover_inputs(sigma1, 1, 1, [(0, 0, 0)] * 6)
    assert res.ok and all(not any(u) for u in res.inputs) and len(res.inputs) == 5


def test_inconsistent_outputs(sigma1):
    # D = 0, so y[0] = C x[0] = 0 from rest
    res = recover_inputs(sigma1, 1, 1, [(1, 0, 0), (0, 0, 0)])
    assert res.status == INCONSISTENT and res.step == 0


def test_known_initial_state(sigma1):
    x0 = (1, -2, 0, 3)
    u = [(0, 2, 0, 0), (0, 0, 0, -1), (1, 0, 0, 0), (0, 0, 0, 0)]
    y = simulate(sigma1, x0, u)
    res = recover_inputs(sigma1, 1, 1, y, x0=x0)
    assert res.ok and list(res.inputs) == [tuple(map(Fraction, v)) for v in u[:3]]


def test_delay_too_short_is_ambiguous(sigma1):
    u = [(0, 2, 0, 0), (0, 0, 0, -1), (0, 0, 0, 0)]
    res = recover_inputs(sigma1, 1, 0, simulate(sigma1, None, u))
    assert res.status == AMBIGUOUS and res.step == 0 and len(res.candidates) == 2


def test_output_length_check(sigma1):
    with pytest.raises(ValueError):
        recover_inputs(sigma1, 1, 1, [(0, 0)])
