"""Weakly unobservable and strongly reachable arrangements, and the geometric test.

``V(s)`` is the fixed point of ``f_s(A) = A ∩ [C;A]^-1 (0 x A + [D;B]<Δ_s>)``
started from the whole state space; ``T(s)`` is the fixed point of
``T -> [A B]((T x <Δ_s>) ∩ ker [C D])`` started from zero.  Both are
detected by exact structural equality of canonical arrangements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .exactlin import (
    Arrangement,
    Subspace,
    Vector,
    hstack,
    image,
    intersect,
    is_zero_vector,
    kernel,
    preimage,
    product,
    solve,
    subspace_sum,
    vector,
    vstack,
    zero_vector,
)
from .sysmodel import (
    LinSystem,
    Support,
    ctrb_restricted,
    enum_supports,
    expand,
    obs_matrix,
    resp_restricted,
    supports,
    trajectory,
)

DEFAULT_CAP = 64
# T(s) need not be a finite arrangement, so iterates are also capped in size
DEFAULT_MAX_MEMBERS = 256

INVERTIBLE = "invertible"
NOT_INVERTIBLE = "not_invertible"
UNDECIDED = "undecided"


class IterationCapExceeded(RuntimeError):
    """A fixed-point iteration hit its step or member cap; ``invariant`` holds the last iterate."""

    def __init__(self, invariant: "GeomInvariant"):
        self.invariant = invariant
        super().__init__(
            f"no fixed point after {len(invariant.iterates) - 1} iterations"
            f" (last iterate has {invariant.size} members)"
        )


class CertificateMismatch(AssertionError):
    """Two characterizations that must agree returned different verdicts."""


@dataclass(frozen=True)
class GeomInvariant:
    arrangement: Arrangement
    index: int
    iterates: tuple
    capped: bool = False

    @property
    def size(self) -> int:
        return self.arrangement.size


# ---------------------------------------------------------------------------
# V(s)
# ---------------------------------------------------------------------------


def _lift_state(V: Subspace, p: int) -> Subspace:
    # 0 x V inside Q^(p+n)
    return Subspace(p + V.ambient, (zero_vector(p) + tuple(v) for v in V.vectors))


@lru_cache(maxsize=None)
def _input_images(sys: LinSystem, s: int) -> tuple:
    DB = vstack(sys.D, sys.B)
    return tuple(image(DB.select_cols(S)) for S in supports(sys.m, s, maximal_only=True))


def step_V(sys: LinSystem, s: int, A: Arrangement) -> Arrangement:
    """One application of the map ``f_s``; the result is contained in ``A``."""
    if A.ambient != sys.n:
        raise ValueError("arrangement does not live in the state space")
    CA = vstack(sys.C, sys.A)
    pieces = []
    for W in A.members:
        lifted = _lift_state(W, sys.p)
        for img in _input_images(sys, s):
            pieces.append(preimage(CA, subspace_sum(lifted, img)))
    return Arrangement(sys.n, (intersect(U, P) for U in A.members for P in pieces))


def _iterate(step, start: Arrangement, cap: int, max_members: int) -> GeomInvariant:
    if cap < 1 or max_members < 1:
        raise ValueError("iteration caps must be at least 1")
    iterates = [start]
    for k in range(cap):
        nxt = step(iterates[-1])
        iterates.append(nxt)
        if nxt == iterates[-2]:
            return GeomInvariant(nxt, k, tuple(iterates))
        if nxt.size > max_members:
            break
    partial = GeomInvariant(iterates[-1], len(iterates) - 1, tuple(iterates), capped=True)
    raise IterationCapExceeded(partial)


@lru_cache(maxsize=None)
def weakly_unobservable(
    sys: LinSystem, s: int, cap: int = DEFAULT_CAP, max_members: int = DEFAULT_MAX_MEMBERS
) -> GeomInvariant:
    """``V(s)`` and the weak s-sparse observability index ``ν_s``.

    ``ν_s`` is the first k with ``V_k = V_{k+1}``; ``iterates`` holds
    ``V_0 .. V_{ν+1}``.
    """
    return _iterate(lambda A: step_V(sys, s, A), Arrangement.full(sys.n), cap, max_members)


def direct_V(sys: LinSystem, s: int, k: int) -> Arrangement:
    """``O_k^-1(Γ_k <Δ_s>^k)`` by explicit support enumeration."""
    if k < 1:
        raise ValueError("k must be at least 1")
    O = obs_matrix(sys, k)
    return Arrangement(
        sys.n,
        (preimage(O, image(resp_restricted(sys, S))) for S in enum_supports(sys.m, s, k, True)),
    )


# ---------------------------------------------------------------------------
# T(s)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _output_kernel(sys: LinSystem) -> Subspace:
    return kernel(hstack(sys.C, sys.D))


def step_T(sys: LinSystem, s: int, A: Arrangement) -> Arrangement:
    """``[A B]((A x <Δ_s>) ∩ ker [C D])``."""
    if A.ambient != sys.n:
        raise ValueError("arrangement does not live in the state space")
    AB = hstack(sys.A, sys.B)
    K = _output_kernel(sys)
    m = sys.m
    out = []
    for W in A.members:
        for S in supports(m, s, maximal_only=True):
            piece = intersect(product(W, Subspace.coordinate(m, S)), K)
            out.append(image(AB, piece))
    return Arrangement(sys.n, out)


@lru_cache(maxsize=None)
def strongly_reachable(
    sys: LinSystem, s: int, cap: int = DEFAULT_CAP, max_members: int = DEFAULT_MAX_MEMBERS
) -> GeomInvariant:
    """``T(s)`` and the strong s-sparse reachability index ``τ_s``.

    Unlike ``V(s)`` this increasing chain may never settle: each support can
    act on a line like a projective map, and the orbit of one line under
    several such maps is typically infinite.  The member cap catches that.
    """
    return _iterate(lambda A: step_T(sys, s, A), Arrangement.zero(sys.n), cap, max_members)


def direct_T(sys: LinSystem, s: int, k: int) -> Arrangement:
    """``C_k(ker Γ_k ∩ <Δ_s>^k)`` by explicit support enumeration."""
    if k == 0:
        return Arrangement.zero(sys.n)
    return Arrangement(
        sys.n,
        (
            image(ctrb_restricted(sys, S), kernel(resp_restricted(sys, S)))
            for S in enum_supports(sys.m, s, k, True)
        ),
    )


# ---------------------------------------------------------------------------
# geometric certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntersectionWitness:
    """A nonzero state in both ``T(2s)`` and ``V(2s)``."""

    x: Vector
    t_member: Subspace
    v_member: Subspace

    def verify(self, sys: LinSystem, T: Arrangement, V: Arrangement) -> bool:
        return (
            not is_zero_vector(self.x)
            and self.t_member in T.members
            and self.v_member in V.members
            and self.t_member.contains_vector(self.x)
            and self.v_member.contains_vector(self.x)
        )


@dataclass(frozen=True)
class KernelWitness:
    """A nonzero 2s-sparse input invisible to both D and B."""

    support: Support
    u0: Vector

    def verify(self, sys: LinSystem, T=None, V=None) -> bool:
        return (
            not is_zero_vector(self.u0)
            and all(i in self.support for i, x in enumerate(self.u0) if x)
            and is_zero_vector(sys.D @ self.u0)
            and is_zero_vector(sys.B @ self.u0)
        )


@dataclass(frozen=True)
class PreimageWitness:
    """A nonzero 2s-sparse input with ``D u0 = 0`` and ``B u0`` in ``V(2s)``."""

    support: Support
    u0: Vector
    v_member: Subspace

    def verify(self, sys: LinSystem, T=None, V: Arrangement | None = None) -> bool:
        ok = (
            not is_zero_vector(self.u0)
            and all(i in self.support for i, x in enumerate(self.u0) if x)
            and is_zero_vector(sys.D @ self.u0)
            and self.v_member.contains_vector(sys.B @ self.u0)
        )
        return ok and (V is None or self.v_member in V.members)


Witness = Union[IntersectionWitness, KernelWitness, PreimageWitness]


@dataclass(frozen=True)
class GeomCertificate:
    verdict: str
    witness: Witness | None
    V: GeomInvariant
    T: GeomInvariant
    condition3_witness: PreimageWitness | None = None
    s: int = 1
    # None when T(2s) did not settle and no computed iterate meets V(2s)
    condition2: bool | None = True

    @property
    def invertible(self) -> bool:
        return self.verdict == INVERTIBLE


def _intersection_witness(T: Arrangement, V: Arrangement) -> IntersectionWitness | None:
    for Tm in T.members:
        for Vm in V.members:
            X = intersect(Tm, Vm)
            if not X.is_zero():
                return IntersectionWitness(X.vectors[0], Tm, Vm)
    return None


def _kernel_witness(sys: LinSystem, s2: int) -> KernelWitness | None:
    DB = vstack(sys.D, sys.B)
    for S in supports(sys.m, s2, maximal_only=True):
        K = kernel(DB.select_cols(S))
        if not K.is_zero():
            return KernelWitness(S, expand(K.vectors[0], S, sys.m))
    return None


def _preimage_witness(sys: LinSystem, s2: int, V: Arrangement) -> PreimageWitness | None:
    for S in supports(sys.m, s2, maximal_only=True):
        DS, BS = sys.D.select_cols(S), sys.B.select_cols(S)
        for W in V.members:
            K = kernel(vstack(DS, W.annihilator @ BS)) if W.annihilator.nrows else kernel(DS)
            if not K.is_zero():
                return PreimageWitness(S, expand(K.vectors[0], S, sys.m), W)
    return None


def geometric_invertibility(
    sys: LinSystem, s: int, cap: int = DEFAULT_CAP, max_members: int = DEFAULT_MAX_MEMBERS
) -> GeomCertificate:
    """Decide left s-sparse invertibility from ``V(2s)`` and ``T(2s)``.

    Both the intersection/kernel condition and the preimage condition are
    evaluated; they are equivalent, so disagreement raises
    :class:`CertificateMismatch`.  The preimage condition needs only
    ``V(2s)``.  If ``T(2s)`` does not settle, the last computed iterate
    (which lies inside ``T(2s)``) can still refute the intersection
    condition; otherwise ``condition2`` is None and the verdict rests on the
    preimage condition alone.

    Raises:
        IterationCapExceeded: if ``V(2s)`` is not reached within the caps.
    """
    s2 = 2 * s
    Vinv = weakly_unobservable(sys, s2, cap, max_members)
    try:
        Tinv = strongly_reachable(sys, s2, cap, max_members)
    except IterationCapExceeded as exc:
        Tinv = exc.invariant
    V, T = Vinv.arrangement, Tinv.arrangement

    w2 = _intersection_witness(T, V) or _kernel_witness(sys, s2)
    w3 = _preimage_witness(sys, s2, V)
    condition2 = (w2 is None) if (w2 is not None or not Tinv.capped) else None
    if condition2 is not None and condition2 != (w3 is None):
        raise CertificateMismatch(
            "geometric conditions disagree: "
            f"intersection/kernel witness={w2!r}, preimage witness={w3!r}"
        )
    verdict = INVERTIBLE if w3 is None else NOT_INVERTIBLE
    return GeomCertificate(verdict, w2 or w3, Vinv, Tinv, w3, s, condition2)


# ---------------------------------------------------------------------------
# witness -> pair of s-sparse inputs with equal outputs
# ---------------------------------------------------------------------------


def split_sparse(w: Vector, s: int) -> tuple[Vector, Vector]:
    """Write a 2s-sparse ``w`` as ``a - b`` with a, b both s-sparse.

    ``a`` takes the first ``s`` nonzero coordinates, ``b`` the rest.
    """
    idx = [i for i, x in enumerate(w) if x]
    if len(idx) > 2 * s:
        raise ValueError("vector is not 2s-sparse")
    first = set(idx[:s])
    a = tuple(x if i in first else 0 * x for i, x in enumerate(w))
    b = tuple(-x if (x and i not in first) else 0 * x for i, x in enumerate(w))
    return a, b


def _reach(sys: LinSystem, s2: int, x: Vector, tau: int):
    # 2s-sparse inputs reaching x from 0 with zero output
    for k in range(1, tau + 1):
        for S in enum_supports(sys.m, s2, k, True):
            G, Cs = resp_restricted(sys, S), ctrb_restricted(sys, S)
            sol = solve(vstack(G, Cs), zero_vector(G.nrows) + tuple(x))
            if sol is not None:
                out, pos = [], 0
                for Si in S:
                    out.append(expand(sol[pos:pos + len(Si)], Si, sys.m))
                    pos += len(Si)
                return out
    raise RuntimeError("state is not strongly reachable within the index")


def _steer(sys: LinSystem, s2: int, x: Vector, V: Arrangement) -> Vector:
    # one zero-output step that keeps the state inside V(2s)
    for S in supports(sys.m, s2, maximal_only=True):
        DS, BS = sys.D.select_cols(S), sys.B.select_cols(S)
        for W in V.members:
            Q = W.annihilator
            M = vstack(DS, Q @ BS)
            rhs = tuple(-c for c in sys.C @ x) + tuple(-c for c in Q @ (sys.A @ x))
            sol = solve(M, rhs)
            if sol is not None:
                return expand(sol, S, sys.m)
    raise RuntimeError("state cannot be held in the weakly unobservable arrangement")


def counterexample(
    sys: LinSystem, cert: GeomCertificate, horizon: int | None = None
) -> tuple[list[Vector], list[Vector]]:
    """Two distinct s-sparse input sequences with identical zero-state outputs.

    Built from the certificate's witness; the default horizon is
    ``ν_2s + τ_2s + 2`` steps.
    """
    if cert.invertible:
        raise ValueError("an invertible certificate has no counterexample")
    s, s2 = cert.s, 2 * cert.s
    V = cert.V.arrangement
    if horizon is None:
        horizon = cert.V.index + cert.T.index + 2
    w = cert.witness
    if isinstance(w, KernelWitness):
        diff = [w.u0]
        x = zero_vector(sys.n)
    elif isinstance(w, PreimageWitness):
        diff = [w.u0]
        x = sys.B @ w.u0
    else:
        diff = _reach(sys, s2, w.x, cert.T.index)
        x = trajectory(sys, None, diff)[0][-1]
    while len(diff) < horizon:
        if isinstance(w, KernelWitness):
            uk = zero_vector(sys.m)
        else:
            uk = _steer(sys, s2, x, V)
        diff.append(uk)
        x = tuple(a + b for a, b in zip(sys.A @ x, sys.B @ uk))
    u, v = zip(*(split_sparse(vector(d), s) for d in diff))
    return list(u), list(v)
