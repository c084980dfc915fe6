"""Rank-based invertibility certificate, inherent delay, and delayed input recovery."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .exactlin import Vector, kernel, rank, solve, vector, zero_vector
from .geom import DEFAULT_CAP, INVERTIBLE, NOT_INVERTIBLE, weakly_unobservable
from .parallel import pmap
from .sysmodel import (
    LinSystem,
    SupportSeq,
    enum_supports,
    expand,
    obs_matrix,
    resp_restricted,
    shift,
    support_of,
)

OK = "ok"
AMBIGUOUS = "ambiguous"
INCONSISTENT = "inconsistent"


@lru_cache(maxsize=None)
def _resp_rank(sys: LinSystem, S: SupportSeq) -> int:
    return rank(resp_restricted(sys, S))


def _rank_row(args):
    sys, S = args
    return (S, _resp_rank(sys, S), _resp_rank(sys, shift(S)))


def rank_table(sys: LinSystem, s: int, N: int) -> list[tuple[SupportSeq, int, int]]:
    """``(S, rank Γ_S, rank Γ_σ(S))`` for every maximal ``S`` in ``Δ_2s^(N+1)``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    seqs = list(enum_supports(sys.m, 2 * s, N + 1, maximal_only=True))
    return pmap(_rank_row, [(sys, S) for S in seqs])


def rank_condition(sys: LinSystem, s: int, N: int) -> tuple[bool, SupportSeq | None]:
    """Check ``rank Γ_S - rank Γ_σ(S) = |S_0|`` over maximal ``S`` in ``Δ_2s^(N+1)``.

    Returns the verdict and the first failing support sequence, if any.
    """
    for S, r, r_shift in rank_table(sys, s, N):
        if r - r_shift != len(S[0]):
            return False, S
    return True, None


@dataclass(frozen=True)
class RankCertificate:
    verdict: str
    delay: int | None
    failing_support: SupportSeq | None
    rank_table: tuple
    nu: int
    s: int = 1

    @property
    def invertible(self) -> bool:
        return self.verdict == INVERTIBLE


def inherent_delay(sys: LinSystem, s: int, cap: int = DEFAULT_CAP) -> RankCertificate:
    """Smallest delay ``d_s`` at which the rank condition holds.

    The search runs over ``N = 0 .. ν_2s`` inclusive: failure at ``N = ν_2s``
    exhibits a nonzero input in ``ker D`` steered by B into ``V(2s)``, so no
    larger N can succeed.

    Raises:
        IterationCapExceeded: if ``ν_2s`` cannot be computed within ``cap``.
    """
    nu = weakly_unobservable(sys, 2 * s, cap).index
    table = []
    failing = None
    for N in range(nu + 1):
        table = rank_table(sys, s, N)
        failing = next((S for S, r, rs in table if r - rs != len(S[0])), None)
        if failing is None:
            return RankCertificate(INVERTIBLE, N, None, tuple(table), nu, s)
    return RankCertificate(NOT_INVERTIBLE, None, failing, tuple(table), nu, s)


@dataclass(frozen=True)
class RecoveryResult:
    inputs: list
    supports: list
    residual_state: Vector
    status: str = OK
    step: int | None = None
    candidates: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.status == OK


def recover_inputs(
    sys: LinSystem,
    s: int,
    delay: int,
    outputs,
    x0=None,
) -> RecoveryResult:
    """Recover s-sparse inputs online from outputs, ``delay`` steps behind.

    At step k the window ``y_k .. y_{k+delay}`` minus the free response of the
    current state estimate is matched against ``Γ_S w`` for every maximal
    support pattern ``S`` in ``Δ_s^(delay+1)``; the first block of any exact
    solution is the input ``u_k``.  ``len(outputs) - delay`` inputs are
    returned.  When the rank condition holds at ``delay`` the first block is
    unique; otherwise two different candidates yield ``ambiguous``.  If no
    pattern explains the window the status is ``inconsistent``.

    ``x0`` is a known initial state (zero by default).
    """
    Y = [vector(y) for y in outputs]
    if any(len(y) != sys.p for y in Y):
        raise ValueError(f"every output must have length {sys.p}")
    N = delay
    O = obs_matrix(sys, N + 1)
    x = zero_vector(sys.n) if x0 is None else vector(x0)
    patterns = list(enum_supports(sys.m, s, N + 1, maximal_only=True))
    inputs, chosen = [], []
    for k in range(len(Y) - N):
        window = tuple(c for y in Y[k:k + N + 1] for c in y)
        free = O @ x
        r = tuple(a - b for a, b in zip(window, free))
        cands: dict = {}
        for S in patterns:
            G = resp_restricted(sys, S)
            sol = solve(G, r)
            if sol is None:
                continue
            w0 = len(S[0])
            u = expand(sol[:w0], S[0], sys.m)
            cands.setdefault(u, S[0])
            for kv in kernel(G).vectors:
                if any(kv[:w0]):
                    alt = expand(tuple(a + b for a, b in zip(sol[:w0], kv[:w0])), S[0], sys.m)
                    cands.setdefault(alt, S[0])
                    break
            if len(cands) > 1:
                break
        if not cands:
            return RecoveryResult(inputs, chosen, x, INCONSISTENT, k)
        if len(cands) > 1:
            return RecoveryResult(inputs, chosen, x, AMBIGUOUS, k, tuple(list(cands)[:2]))
        (u,) = cands
        inputs.append(u)
        chosen.append(support_of(u))
        x = tuple(a + b for a, b in zip(sys.A @ x, sys.B @ u))
    return RecoveryResult(inputs, chosen, x)
