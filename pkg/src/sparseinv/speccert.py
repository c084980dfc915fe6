"""Spectral characterizations: generalized Rosenbrock pencils and their rank tests.

Every test here asks whether some pencil in z keeps full column rank at all
complex z (or at some z).  The decision is exact; see
:func:`sparseinv.polynomial.fullrank_all_z`.

The quantifiers range over every support pattern ``S`` in ``Δ_2s^τ``, which
grows like ``C(m, 2s)^τ``.  By default the pattern loop is collapsed: two
patterns that induce the same zero-output state relation (pairs of start and
end states joined by a zero-output input segment) and agree on whether a
nonzero segment can run from 0 to 0 give the same pencil verdict, and
relations compose step by step, so each distinct relation is tested once
with its lexicographically first pattern as representative.  The literal
per-pattern loop is kept behind ``exhaustive=True``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactlin import (
    RatMatrix,
    Subspace,
    hstack,
    image,
    intersect,
    kernel,
    product,
    rank,
    vstack,
)
from .geom import (
    DEFAULT_CAP,
    DEFAULT_MAX_MEMBERS,
    INVERTIBLE,
    NOT_INVERTIBLE,
    strongly_reachable,
)
from .polynomial import (
    Poly,
    PolyMatrix,
    fullrank_all_z,
    normal_rank,
    pencil_full_rank_everywhere,
)
from .sysmodel import (
    LinSystem,
    SupportSeq,
    ctrb_restricted,
    enum_supports,
    obs_matrix,
    resp_restricted,
    state_power,
    supports,
)


# ---------------------------------------------------------------------------
# pencils
# ---------------------------------------------------------------------------


def _shift_block(n: int, rows_below: int, cols_right: int, Psi: RatMatrix | None = None) -> RatMatrix:
    # z-coefficient [[-Psi, 0], [0, 0]]
    top = -(Psi if Psi is not None else RatMatrix.identity(n))
    return vstack(
        hstack(top, RatMatrix.zeros(n, cols_right)),
        RatMatrix.zeros(rows_below, top.ncols + cols_right),
    )


def rosenbrock(sys: LinSystem) -> PolyMatrix:
    """``[[A - zI, B], [C, D]]``."""
    M0 = vstack(hstack(sys.A, sys.B), hstack(sys.C, sys.D))
    return PolyMatrix.pencil(M0, _shift_block(sys.n, sys.p, sys.m))


def rosenbrock_general(sys: LinSystem, tau: int, S: SupportSeq) -> PolyMatrix:
    """``[[A^τ - zI, C_S], [O_τ, Γ_S]]`` for a pattern of τ supports."""
    if tau < 1 or len(S) != tau:
        raise ValueError("need a pattern of exactly tau >= 1 supports")
    Cs, G = ctrb_restricted(sys, S), resp_restricted(sys, S)
    M0 = vstack(hstack(state_power(sys, tau), Cs), hstack(obs_matrix(sys, tau), G))
    return PolyMatrix.pencil(M0, _shift_block(sys.n, G.nrows, Cs.ncols))


def component_pencil(sys: LinSystem, Psi: RatMatrix, S: SupportSeq) -> PolyMatrix:
    """``[[(A^τ - zI) Ψ, C_S], [O_τ Ψ, Γ_S]]`` for a basis Ψ of one arrangement member."""
    tau = len(S)
    Cs, G = ctrb_restricted(sys, S), resp_restricted(sys, S)
    M0 = vstack(
        hstack(state_power(sys, tau) @ Psi, Cs),
        hstack(obs_matrix(sys, tau) @ Psi, G),
    )
    return PolyMatrix.pencil(M0, _shift_block(sys.n, G.nrows, Cs.ncols, Psi))


def corollary_pencil(sys: LinSystem, S: SupportSeq, M: int) -> PolyMatrix:
    """``[[Γ_S], [C_S - z [C_[S]_0^M  0]]]``."""
    if not 0 <= M < len(S):
        raise ValueError("need 0 <= M < len(S)")
    G, Cs = resp_restricted(sys, S), ctrb_restricted(sys, S)
    head = ctrb_restricted(sys, S[:M])
    M0 = vstack(G, Cs)
    M1 = vstack(
        RatMatrix.zeros(G.nrows, G.ncols),
        hstack(-head, RatMatrix.zeros(sys.n, Cs.ncols - head.ncols)),
    )
    return PolyMatrix.pencil(M0, M1)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralWitness:
    component: int | None
    tau: int
    support: SupportSeq
    invariant_factor: Poly
    split: int | None = None  # M for the corollary test


@dataclass(frozen=True)
class SpectralCertificate:
    verdict: str
    witness: SpectralWitness | None
    checked_components: tuple = field(default_factory=tuple)
    bound: int | None = None
    # every failing (pattern, factor) at the witness's component and τ, capped
    failures: tuple = field(default_factory=tuple)

    @property
    def invertible(self) -> bool:
        return self.verdict == INVERTIBLE


def periodic_invertibility(sys: LinSystem, s: int, tau: int) -> SpectralCertificate:
    """Invertibility over s-sparse inputs whose supports repeat with period τ.

    For each maximal ``S`` in ``Δ_2s^τ``: ``[C_S; Γ_S]`` must have full column
    rank, and the generalized Rosenbrock pencil must reach full column rank
    at some z.  The witness factor is the gcd of maximal minors (0 when the
    pencil is deficient everywhere).
    """
    if tau < 1:
        raise ValueError("tau must be at least 1")
    count = 0
    for S in enum_supports(sys.m, 2 * s, tau, maximal_only=True):
        count += 1
        cols = sum(len(Si) for Si in S)
        if rank(vstack(ctrb_restricted(sys, S), resp_restricted(sys, S))) < cols:
            return SpectralCertificate(
                NOT_INVERTIBLE, SpectralWitness(None, tau, S, Poly()), ((None, tau, count),)
            )
        R = rosenbrock_general(sys, tau, S)
        if normal_rank(R) < sys.n + cols:
            return SpectralCertificate(
                NOT_INVERTIBLE, SpectralWitness(None, tau, S, Poly()), ((None, tau, count),)
            )
    return SpectralCertificate(INVERTIBLE, None, ((None, tau, count),))


# ---------------------------------------------------------------------------
# zero-output relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Behavior:
    """Zero-output state relation of a support pattern.

    ``relation`` holds the pairs ``(x_start, x_end)`` in Q^(2n) joined by an
    input segment on the pattern with zero output; ``degenerate`` records
    that a nonzero segment runs from 0 to 0 with zero output.
    """

    relation: Subspace
    degenerate: bool


@dataclass(frozen=True)
class _Prefix:
    """States reachable from 0 along a pattern with zero output."""

    space: Subspace
    degenerate: bool


def _halves(R: Subspace, n: int) -> tuple[RatMatrix, RatMatrix]:
    P = RatMatrix.from_columns([v[:n] for v in R.vectors], n)
    Q = RatMatrix.from_columns([v[n:] for v in R.vectors], n)
    return P, Q


def _ends_from_zero(R: Subspace, n: int) -> Subspace:
    # {y : (0, y) in R}
    piece = intersect(R, Subspace.coordinate(2 * n, range(n, 2 * n)))
    return Subspace(n, (v[n:] for v in piece.vectors))


def _starts_to_zero(R: Subspace, n: int) -> Subspace:
    # {x : (x, 0) in R}
    piece = intersect(R, Subspace.coordinate(2 * n, range(n)))
    return Subspace(n, (v[:n] for v in piece.vectors))


def _single_step(sys: LinSystem, S0) -> _Behavior:
    n = sys.n
    DS, BS = sys.D.select_cols(S0), sys.B.select_cols(S0)
    K = kernel(hstack(sys.C, DS))
    lift = vstack(
        hstack(RatMatrix.identity(n), RatMatrix.zeros(n, len(S0))),
        hstack(sys.A, BS),
    )
    degenerate = not kernel(vstack(DS, BS)).is_zero()
    return _Behavior(image(lift, K), degenerate)


def _compose(a: _Behavior, b: _Behavior, n: int) -> _Behavior:
    Pa, Qa = _halves(a.relation, n)
    Pb, Qb = _halves(b.relation, n)
    K = kernel(hstack(Qa, -Pb))
    ra = a.relation.dim
    vecs = []
    for y in K.vectors:
        ya, yb = y[:ra], y[ra:]
        vecs.append(tuple(Pa @ ya) + tuple(Qb @ yb))
    rel = Subspace(2 * n, vecs)
    degenerate = (
        a.degenerate
        or b.degenerate
        or not intersect(_ends_from_zero(a.relation, n), _starts_to_zero(b.relation, n)).is_zero()
    )
    return _Behavior(rel, degenerate)


def _extend(prefix: _Prefix, b: _Behavior, n: int) -> _Prefix:
    piece = intersect(b.relation, product(prefix.space, Subspace.full(n)))
    space = Subspace(n, (v[n:] for v in piece.vectors))
    degenerate = (
        prefix.degenerate
        or b.degenerate
        or not intersect(prefix.space, _starts_to_zero(b.relation, n)).is_zero()
    )
    return _Prefix(space, degenerate)


def _eigen_free(b: _Behavior, start: Subspace, n: int) -> bool:
    """No nonzero ``x`` in ``start`` and complex z with ``(x, z x)`` in the relation."""
    piece = intersect(b.relation, product(start, Subspace.full(n)))
    P, Q = _halves(piece, n)
    return pencil_full_rank_everywhere(Q, -P)


def _behavior_levels(sys: LinSystem, s2: int, depth: int) -> list[dict]:
    """``levels[t]`` maps each distinct behavior of a length-t pattern to its first pattern."""
    n = sys.n
    singles: dict = {}
    for S0 in supports(sys.m, s2, maximal_only=True):
        singles.setdefault(_single_step(sys, S0), (S0,))
    levels = [{}, singles]
    for _ in range(2, depth + 1):
        nxt: dict = {}
        for b, rep in levels[-1].items():
            for b1, rep1 in singles.items():
                nxt.setdefault(_compose(b, b1, n), rep + rep1)
        levels.append(nxt)
    return levels


def _prefix_levels(sys: LinSystem, singles: dict, depth: int) -> list[dict]:
    n = sys.n
    levels = [{_Prefix(Subspace.zero(n), False): ()}]
    for _ in range(depth):
        nxt: dict = {}
        for pre, rep in levels[-1].items():
            for b1, rep1 in singles.items():
                nxt.setdefault(_extend(pre, b1, n), rep + rep1)
        levels.append(nxt)
    return levels


# ---------------------------------------------------------------------------
# full spectral test over the components of T(2s)
# ---------------------------------------------------------------------------


FAILURE_LIST_CAP = 64


def _failures_at(sys: LinSystem, Psi: RatMatrix, s2: int, tau: int) -> tuple:
    out = []
    for S in enum_supports(sys.m, s2, tau, maximal_only=True):
        ok, factor = fullrank_all_z(component_pencil(sys, Psi, S))
        if not ok:
            out.append((S, factor))
            if len(out) >= FAILURE_LIST_CAP:
                break
    return tuple(out)


def spectral_invertibility(
    sys: LinSystem,
    s: int,
    cap: int = DEFAULT_CAP,
    exhaustive: bool = False,
    max_members: int = DEFAULT_MAX_MEMBERS,
) -> SpectralCertificate:
    """Spectral test over the members of ``T(2s)``.

    For each member with basis Ψ, each ``τ = 1 .. c(T(2s))`` and each maximal
    ``S`` in ``Δ_2s^τ``, the pencil ``[[(A^τ - zI)Ψ, C_S], [O_τ Ψ, Γ_S]]``
    must have full column rank at every complex z.  The first failure (in
    member, τ, pattern order) is returned with the gcd of its maximal minors,
    and ``failures`` lists every failing pattern at that member and τ.

    Raises:
        IterationCapExceeded: if ``T(2s)`` is not reached within the caps;
            the test is undefined when ``T(2s)`` has infinitely many members.
    """
    s2 = 2 * s
    T = strongly_reachable(sys, s2, cap, max_members).arrangement
    c = T.size
    per_level = [len(supports(sys.m, s2, True)) ** t for t in range(1, c + 1)]
    checked = []
    levels = None if exhaustive else _behavior_levels(sys, s2, c)
    for i, V in enumerate(T.members):
        Psi = V.basis
        checked.append((V, (1, c), sum(per_level)))
        for tau in range(1, c + 1):
            if exhaustive:
                candidates = enum_supports(sys.m, s2, tau, maximal_only=True)
                for S in candidates:
                    ok, factor = fullrank_all_z(component_pencil(sys, Psi, S))
                    if not ok:
                        return SpectralCertificate(
                            NOT_INVERTIBLE, SpectralWitness(i, tau, S, factor), tuple(checked),
                            failures=_failures_at(sys, Psi, s2, tau),
                        )
                continue
            for b, S in levels[tau].items():
                if b.degenerate or not _eigen_free(b, V, sys.n):
                    ok, factor = fullrank_all_z(component_pencil(sys, Psi, S))
                    assert not ok, "relation test and pencil test disagree"
                    return SpectralCertificate(
                        NOT_INVERTIBLE, SpectralWitness(i, tau, S, factor), tuple(checked),
                        failures=_failures_at(sys, Psi, s2, tau),
                    )
    return SpectralCertificate(INVERTIBLE, None, tuple(checked))


def corollary_check(
    sys: LinSystem,
    s: int,
    cap: int = DEFAULT_CAP,
    exhaustive: bool = False,
    max_members: int = DEFAULT_MAX_MEMBERS,
) -> SpectralCertificate:
    """Spectral test that needs only ``τ_2s`` and ``c(T(2s))``.

    For every ``N <= τ_2s + c(T(2s))``, ``M < N`` and maximal ``S`` in
    ``Δ_2s^N``, the pencil ``[[Γ_S], [C_S - z [C_[S]_0^M 0]]]`` must have
    column rank ``Σ|S_i|`` at every complex z.

    Raises:
        IterationCapExceeded: if ``T(2s)`` is not reached within the caps.
    """
    s2 = 2 * s
    Tinv = strongly_reachable(sys, s2, cap, max_members)
    bound = Tinv.index + Tinv.size
    n = sys.n

    def fail(N, M, S):
        ok, factor = fullrank_all_z(corollary_pencil(sys, S, M))
        assert not ok, "relation test and pencil test disagree"
        return SpectralCertificate(
            NOT_INVERTIBLE, SpectralWitness(None, N, S, factor, M), bound=bound
        )

    if exhaustive:
        for N in range(1, bound + 1):
            for M in range(N):
                for S in enum_supports(sys.m, s2, N, maximal_only=True):
                    ok, factor = fullrank_all_z(corollary_pencil(sys, S, M))
                    if not ok:
                        return SpectralCertificate(
                            NOT_INVERTIBLE, SpectralWitness(None, N, S, factor, M), bound=bound
                        )
        return SpectralCertificate(INVERTIBLE, None, bound=bound)

    levels = _behavior_levels(sys, s2, bound)
    prefixes = _prefix_levels(sys, levels[1] if bound else {}, max(bound - 1, 0))
    for N in range(1, bound + 1):
        for M in range(N):
            for pre, repP in prefixes[M].items():
                for b, repQ in levels[N - M].items():
                    if pre.degenerate or b.degenerate or not _eigen_free(b, pre.space, n):
                        return fail(N, M, repP + repQ)
    return SpectralCertificate(INVERTIBLE, None, bound=bound)
