"""Discrete-time linear systems, their block matrices and exact simulation."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .exactlin import (
    RatMatrix,
    Vector,
    block,
    hstack,
    vector,
    vstack,
    zero_vector,
)

Support = tuple  # strictly increasing tuple of input indices
SupportSeq = tuple  # tuple of Support, one per time step


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class LinSystem:
    """``x[k+1] = A x[k] + B u[k]``, ``y[k] = C x[k] + D u[k]`` over the rationals."""

    A: RatMatrix
    B: RatMatrix
    C: RatMatrix
    D: RatMatrix

    def __post_init__(self):
        n = self.A.nrows
        if n < 1 or self.A.ncols != n:
            raise DimensionError(f"A must be square with n >= 1, got {self.A.shape}")
        if self.B.nrows != n or self.B.ncols < 1:
            raise DimensionError(f"B must be {n} x m with m >= 1, got {self.B.shape}")
        if self.C.ncols != n or self.C.nrows < 1:
            raise DimensionError(f"C must be p x {n} with p >= 1, got {self.C.shape}")
        if self.D.shape != (self.C.nrows, self.B.ncols):
            raise DimensionError(
                f"D must be {self.C.nrows} x {self.B.ncols}, got {self.D.shape}"
            )

    @classmethod
    def from_lists(cls, A, B, C, D) -> "LinSystem":
        return cls(RatMatrix(A), RatMatrix(B), RatMatrix(C), RatMatrix(D))

    @property
    def n(self) -> int:
        return self.A.nrows

    @property
    def m(self) -> int:
        return self.B.ncols

    @property
    def p(self) -> int:
        return self.C.nrows


def check_support(S: Sequence[int], m: int) -> Support:
    S = tuple(S)
    if any(not 0 <= i < m for i in S) or any(a >= b for a, b in zip(S, S[1:])):
        raise ValueError(f"{S} is not a strictly increasing subset of range({m})")
    return S


def support_of(u: Sequence) -> Support:
    return tuple(i for i, x in enumerate(u) if x)


def shift(S: SupportSeq) -> SupportSeq:
    """Drop the first item of a support sequence."""
    return tuple(S[1:])


@lru_cache(maxsize=None)
def _power(sys: LinSystem, k: int) -> RatMatrix:
    if k == 0:
        return RatMatrix.identity(sys.n)
    return _power(sys, k - 1) @ sys.A


def state_power(sys: LinSystem, k: int) -> RatMatrix:
    return _power(sys, k)


@lru_cache(maxsize=None)
def obs_matrix(sys: LinSystem, N: int) -> RatMatrix:
    """``O_N``: C, CA, ..., CA^(N-1) stacked (pN x n)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return RatMatrix.zeros(0, sys.n)
    if N == 1:
        return sys.C
    return vstack(obs_matrix(sys, N - 1), sys.C @ _power(sys, N - 1))


@lru_cache(maxsize=None)
def _markov(sys: LinSystem, j: int) -> RatMatrix:
    # impulse-response block: D for j = 0, C A^(j-1) B afterwards
    if j == 0:
        return sys.D
    return sys.C @ _power(sys, j - 1) @ sys.B


@lru_cache(maxsize=None)
def resp_matrix(sys: LinSystem, N: int) -> RatMatrix:
    """``Γ_N``: block lower-triangular Toeplitz response matrix (pN x mN)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return RatMatrix.zeros(0, 0)
    zero = RatMatrix.zeros(sys.p, sys.m)
    return block(
        [[_markov(sys, i - j) if j <= i else zero for j in range(N)] for i in range(N)]
    )


@lru_cache(maxsize=None)
def ctrb_matrix(sys: LinSystem, N: int) -> RatMatrix:
    """``C_N = [A^(N-1) B ... A B  B]`` (n x mN), powers in reversed order."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return RatMatrix.zeros(sys.n, 0)
    return hstack(*(_power(sys, N - 1 - j) @ sys.B for j in range(N)))


def restrict_cols(M: RatMatrix, width: int, S: SupportSeq) -> RatMatrix:
    """Keep, in block column i, only the columns listed in ``S[i]``."""
    if len(S) * width != M.ncols:
        raise DimensionError(
            f"{len(S)} supports of width {width} do not match {M.ncols} columns"
        )
    idx = [i * width + j for i, Si in enumerate(S) for j in Si]
    return M.select_cols(idx)


def resp_restricted(sys: LinSystem, S: SupportSeq) -> RatMatrix:
    """``Γ_S``."""
    return restrict_cols(resp_matrix(sys, len(S)), sys.m, S)


def ctrb_restricted(sys: LinSystem, S: SupportSeq) -> RatMatrix:
    """``C_S``."""
    return restrict_cols(ctrb_matrix(sys, len(S)), sys.m, S)


def expand(values: Sequence, support: Support, m: int) -> Vector:
    """Scatter the entries of ``values`` into an m-vector at ``support``."""
    out = list(zero_vector(m))
    for i, x in zip(support, values):
        out[i] = x
    return tuple(out)


def trajectory(sys: LinSystem, x0, u: Sequence, N: int | None = None):
    """States ``x_0..x_N`` and outputs ``y_0..y_{N-1}``."""
    if N is None:
        N = len(u)
    if len(u) < N:
        raise DimensionError(f"need at least {N} inputs, got {len(u)}")
    x = zero_vector(sys.n) if x0 is None else vector(x0)
    if len(x) != sys.n:
        raise DimensionError(f"initial state must have length {sys.n}")
    states = [x]
    outputs = []
    for k in range(N):
        uk = vector(u[k])
        if len(uk) != sys.m:
            raise DimensionError(f"input {k} has length {len(uk)}, expected {sys.m}")
        cx, du = sys.C @ x, sys.D @ uk
        outputs.append(tuple(a + b for a, b in zip(cx, du)))
        ax, bu = sys.A @ x, sys.B @ uk
        x = tuple(a + b for a, b in zip(ax, bu))
        states.append(x)
    return states, outputs


def simulate(sys: LinSystem, x0, u: Sequence, N: int | None = None) -> list[Vector]:
    """Output window ``y_0..y_{N-1}`` from initial state ``x0`` (None means zero)."""
    return trajectory(sys, x0, u, N)[1]


def supports(m: int, s: int, maximal_only: bool = False) -> list[Support]:
    """``Δ_s`` ordered by size then lexicographically; sizes clip at m."""
    k = min(s, m)
    if maximal_only:
        return list(itertools.combinations(range(m), k))
    return [S for size in range(k + 1) for S in itertools.combinations(range(m), size)]


def enum_supports(m: int, s: int, N: int, maximal_only: bool = False) -> Iterator[SupportSeq]:
    """Deterministic enumeration of ``Δ_s^N``."""
    return itertools.product(supports(m, s, maximal_only), repeat=N)


def sigma_alpha(alpha: int) -> LinSystem:
    """The four-node ring network with edge-attack inputs used as a worked example.

    ``alpha`` switches the measurement of node 2 on (1) or off (0).
    """
    A = [
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
    ]
    B = [
        [-1, 0, 0, 1],
        [1, -1, 0, 0],
        [0, 1, -1, 0],
        [0, 0, 1, -1],
    ]
    C = [
        [1, 0, 0, 0],
        [0, alpha, 0, 0],
        [0, 0, 1, 0],
    ]
    D = [[0] * 4 for _ in range(3)]
    return LinSystem.from_lists(A, B, C, D)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------
#
# system:  {"n": 4, "m": 4, "p": 3, "A": [["0", "1"], ...], "B": ..., "C": ..., "D": ...}
# signal:  {"dim": 3, "values": [["1", "-1/2", "0"], ...]}
#
# Entries are ints or strings "a" / "a/b"; matrices may be nested or flat row-major.

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class FormatError(ValueError):
    """Malformed system or signal document; the message names the offending location."""


def parse_rational(token, where: str) -> Fraction:
    if isinstance(token, bool) or not isinstance(token, (int, str)):
        raise FormatError(f"{where}: expected an integer or a rational string, got {token!r}")
    if isinstance(token, str):
        if not _RATIONAL.match(token.strip()):
            raise FormatError(f"{where}: {token!r} is not an exact rational like '-3/2'")
        try:
            return Fraction(token.strip())
        except ZeroDivisionError:
            raise FormatError(f"{where}: zero denominator in {token!r}") from None
    return Fraction(token)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_matrix(raw, rows: int, cols: int, name: str) -> RatMatrix:
    if not isinstance(raw, list):
        raise FormatError(f"{name}: expected a list")
    if raw and all(isinstance(r, list) for r in raw):
        if len(raw) != rows:
            raise FormatError(f"{name}: expected {rows} rows, got {len(raw)}")
        grid = []
        for i, r in enumerate(raw):
            if len(r) != cols:
                raise FormatError(f"{name}[{i}]: expected {cols} entries, got {len(r)}")
            grid.append([parse_rational(t, f"{name}[{i}][{j}]") for j, t in enumerate(r)])
        return RatMatrix(grid, ncols=cols)
    if len(raw) != rows * cols:
        raise FormatError(f"{name}: expected {rows}x{cols} entries, got {len(raw)}")
    flat = [parse_rational(t, f"{name}[{k // cols}][{k % cols}]") for k, t in enumerate(raw)]
    return RatMatrix([flat[i * cols:(i + 1) * cols] for i in range(rows)], ncols=cols)


def _dim(doc: dict, key: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"{key}: expected a positive integer, got {v!r}")
    return v


def system_from_dict(doc) -> LinSystem:
    if not isinstance(doc, dict):
        raise FormatError("system document must be an object")
    n, m, p = _dim(doc, "n"), _dim(doc, "m"), _dim(doc, "p")
    shapes = {"A": (n, n), "B": (n, m), "C": (p, n), "D": (p, m)}
    mats = {}
    for key, (r, c) in shapes.items():
        if key not in doc:
            raise FormatError(f"{key}: missing")
        mats[key] = _parse_matrix(doc[key], r, c, key)
    return LinSystem(**mats)


def system_to_dict(sys: LinSystem) -> dict:
    return {
        "n": sys.n,
        "m": sys.m,
        "p": sys.p,
        "A": [list(r) for r in sys.A.tolist()],
        "B": [list(r) for r in sys.B.tolist()],
        "C": [list(r) for r in sys.C.tolist()],
        "D": [list(r) for r in sys.D.tolist()],
    }


def signal_from_dict(doc, dim: int | None = None) -> list[Vector]:
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), list):
        raise FormatError("signal document must be an object with a 'values' list")
    d = _dim(doc, "dim")
    if dim is not None and d != dim:
        raise FormatError(f"dim: expected {dim}, got {d}")
    out = []
    for k, v in enumerate(doc["values"]):
        if not isinstance(v, list) or len(v) != d:
            raise FormatError(f"values[{k}]: expected a list of {d} entries")
        out.append(tuple(parse_rational(t, f"values[{k}][{j}]") for j, t in enumerate(v)))
    return out


def signal_to_dict(values: Sequence[Sequence], dim: int) -> dict:
    return {"dim": dim, "values": [[format_rational(x) for x in v] for v in values]}


def _read_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


def load_system(path) -> LinSystem:
    return system_from_dict(_read_json(path))


def load_signal(path, dim: int | None = None) -> list[Vector]:
    return signal_from_dict(_read_json(path), dim)


def _encode(doc, indent: int) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(doc, dict):
        if not doc:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(v, indent + 1)}" for k, v in doc.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(doc, list) and any(isinstance(x, (dict, list)) for x in doc):
        return "[\n" + ",\n".join(inner + _encode(x, indent + 1) for x in doc) + "\n" + pad + "]"
    return json.dumps(doc, ensure_ascii=False)


def dumps(doc) -> str:
    """Stable JSON text used for every file and report; flat lists stay on one line."""
    return _encode(doc, 0) + "\n"
