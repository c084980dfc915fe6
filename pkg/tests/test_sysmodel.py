import json
import random
import re
from fractions import Fraction

import pytest

from conftest import random_corpus
from sparseinv.exactlin import RatMatrix, hstack, rank, vstack
from sparseinv.sysmodel import (
    DimensionError,
    FormatError,
    LinSystem,
    check_support,
    ctrb_matrix,
    dumps,
    enum_supports,
    load_signal,
    load_system,
    obs_matrix,
    resp_matrix,
    resp_restricted,
    restrict_cols,
    sigma_alpha,
    signal_to_dict,
    simulate,
    state_power,
    system_from_dict,
    system_to_dict,
    trajectory,
)

SAMPLES = random_corpus(11, 25)


def rand_vec(rng, k):
    return tuple(Fraction(rng.randint(-3, 3)) for _ in range(k))


def test_dimension_checks():
    with pytest.raises(DimensionError):
        LinSystem.from_lists([[1, 0]], [[1]], [[1]], [[0]])
    with pytest.raises(DimensionError):
        LinSystem.from_lists([[1]], [[1]], [[1]], [[0, 0]])


def test_small_block_matrices(sigma1):
    s = sigma1
    assert obs_matrix(s, 1) == s.C
    assert resp_matrix(s, 1) == s.D
    assert ctrb_matrix(s, 1) == s.B
    assert ctrb_matrix(s, 2) == hstack(s.A @ s.B, s.B)
    assert resp_matrix(s, 2) == vstack(hstack(s.D, RatMatrix.zeros(3, 4)), hstack(s.C @ s.B, s.D))
    assert rank(resp_matrix(s, 2)) == 3
    assert rank(obs_matrix(sigma_alpha(0), 4)) == 4


@pytest.mark.parametrize("sysm", SAMPLES[:10])
def test_block_identities(sysm):
    p, m = sysm.p, sysm.m
    for N in range(2, 6):
        O, G = obs_matrix(sysm, N), resp_matrix(sysm, N)
        assert obs_matrix(sysm, N) == vstack(sysm.C, obs_matrix(sysm, N - 1) @ sysm.A)
        for M in range(1, N):
            # top-left Γ_M, bottom-right Γ_{N-M}, bottom-left O_{N-M} C_M
            top = G.select_rows(range(M * p)).select_cols(range(M * m))
            assert top == resp_matrix(sysm, M)
            br = G.select_rows(range(M * p, N * p)).select_cols(range(M * m, N * m))
            assert br == resp_matrix(sysm, N - M)
            bl = G.select_rows(range(M * p, N * p)).select_cols(range(M * m))
            assert bl == obs_matrix(sysm, N - M) @ ctrb_matrix(sysm, M)
            assert G.select_rows(range(M * p)).select_cols(range(M * m, N * m)).is_zero()
        assert O.shape == (p * N, sysm.n)


@pytest.mark.parametrize("sysm", SAMPLES)
def test_window_identity_and_linearity(sysm):
    rng = random.Random(SAMPLES.index(sysm))
    n, m = sysm.n, sysm.m
    x0 = rand_vec(rng, n)
    u = [rand_vec(rng, m) for _ in range(8)]
    xs, ys = trajectory(sysm, x0, u)
    for k in range(4):
        for N in range(1, 5):
            window = tuple(c for y in ys[k:k + N] for c in y)
            uw = tuple(c for v in u[k:k + N] for c in v)
            rhs = tuple(a + b for a, b in zip(obs_matrix(sysm, N) @ xs[k], resp_matrix(sysm, N) @ uw))
            assert window == rhs
    # shift: outputs from step k equal outputs of the system restarted at x_k
    for k in range(4):
        xk = tuple(
            a + b for a, b in zip(state_power(sysm, k) @ x0, ctrb_matrix(sysm, k) @ tuple(c for v in u[:k] for c in v))
        ) if k else x0
        assert simulate(sysm, xk, u[k:]) == ys[k:]
    x1, v = rand_vec(rng, n), [rand_vec(rng, m) for _ in range(8)]
    a, b = Fraction(2), Fraction(-1, 3)
    lhs = simulate(sysm, tuple(a * p + b * q for p, q in zip(x0, x1)), [tuple(a * p + b * q for p, q in zip(s, t)) for s, t in zip(u, v)])
    y1 = simulate(sysm, x1, v)
    assert lhs == [tuple(a * p + b * q for p, q in zip(s, t)) for s, t in zip(ys, y1)]


def test_sigma0_holds_e4(sigma0):
    e4 = (0, 0, 0, 1)
    xs, ys = trajectory(sigma0, e4, [(0, 0, 0, -1)] * 6)
    assert all(not any(y) for y in ys)
    assert all(x == e4 for x in xs)


def test_restrict_cols(sigma1):
    G = resp_matrix(sigma1, 2)
    full = ((0, 1, 2, 3), (0, 1, 2, 3))
    assert restrict_cols(G, 4, full) == G
    assert restrict_cols(G, 4, ((), ())).shape == (6, 0)
    R = resp_restricted(sigma1, ((0, 1), ()))
    assert R.shape == (6, 2)
    assert R.select_rows(range(3)).is_zero()
    assert rank(R) == 2
    with pytest.raises(ValueError):
        restrict_cols(G, 4, ((0,),))


def test_enum_supports_counts():
    assert list(enum_supports(2, 1, 1)) == [((),), ((0,),), ((1,),)]
    assert len(list(enum_supports(4, 2, 1, True))) == 6
    assert len(list(enum_supports(4, 2, 2, True))) == 36
    # 2s > m clips to m
    assert list(enum_supports(3, 5, 1, True)) == [((0, 1, 2),)]
    with pytest.raises(ValueError):
        check_support((1, 0), 3)


def test_system_round_trip_and_flat_layout(tmp_path, sigma0):
    doc = system_to_dict(sigma0)
    assert system_from_dict(json.loads(dumps(doc))) == sigma0
    flat = dict(doc, A=[x for row in doc["A"] for x in row])
    assert system_from_dict(flat) == sigma0
    path = tmp_path / "sys.json"
    path.write_text(dumps(doc))
    assert load_system(path) == sigma0


@pytest.mark.parametrize(
    "patch, where",
    [
        ({"A": [["1", "0"], ["0", "x"]]}, "A[1][1]"),
        ({"A": [["1", "0"], ["0", 0.5]]}, "A[1][1]"),
        ({"B": [["1"], ["1.5"]]}, "B[1][0]"),
        ({"C": [["1", "0", "0"]]}, "C[0]"),
        ({"D": [["1/0"]]}, "D[0][0]"),
        ({"n": 0}, "n"),
    ],
)
def test_system_format_errors(patch, where):
    doc = {"n": 2, "m": 1, "p": 1, "A": [["1", "0"], ["0", "1"]], "B": [["1"], ["0"]], "C": [["1", "0"]], "D": [["0"]]}
    doc.update(patch)
    with pytest.raises(FormatError, match="^" + re.escape(where)):
        system_from_dict(doc)


def test_signal_files(tmp_path):
    vals = [(Fraction(1, 2), Fraction(0)), (Fraction(-3), Fraction(7, 4))]
    path = tmp_path / "sig.json"
    path.write_text(dumps(signal_to_dict(vals, 2)))
    assert load_signal(path, 2) == vals
    with pytest.raises(FormatError):
        load_signal(path, 3)
    path.write_text("{not json")
    with pytest.raises(FormatError, match="invalid JSON"):
        load_signal(path)
