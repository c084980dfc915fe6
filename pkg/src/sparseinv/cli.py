"""Command-line interface: ``sparseinv check | invariants | recover | simulate | demo``."""

from __future__ import annotations

import argparse
import hashlib
import sys as _sys
import time
from fractions import Fraction
from importlib import resources

from .exactlin import Arrangement, Subspace
from .geom import (
    DEFAULT_CAP,
    DEFAULT_MAX_MEMBERS,
    INVERTIBLE,
    NOT_INVERTIBLE,
    UNDECIDED,
    CertificateMismatch,
    IntersectionWitness,
    IterationCapExceeded,
    KernelWitness,
    counterexample,
    geometric_invertibility,
    strongly_reachable,
    weakly_unobservable,
)
from .polynomial import Poly, rational_roots
from .rankcert import AMBIGUOUS, INCONSISTENT, OK, inherent_delay, recover_inputs
from .speccert import corollary_check, spectral_invertibility
from .sysmodel import (
    FormatError,
    LinSystem,
    dumps,
    load_signal,
    load_system,
    signal_to_dict,
    sigma_alpha,
    simulate,
    system_to_dict,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_INVERTIBLE = 2
EXIT_UNDECIDED = 3
EXIT_AMBIGUOUS = 4
EXIT_INCONSISTENT = 5
EXIT_MISMATCH = 6

EPILOG = """exit codes:
  0  invertible (check) / inputs recovered (recover)
  1  usage or input file error
  2  not invertible
  3  undecided: a fixed-point iteration hit its cap
  4  recovery ambiguous: two inputs explain the outputs
  5  recovery inconsistent: no sparse input explains the outputs
  6  internal disagreement between certificates (a bug; please report)

Supports are printed 1-indexed. SPARSEINV_THREADS sets the worker count."""

METHODS = ("geometric", "rank", "spectral")


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def fmt_q(x) -> str:
    return str(Fraction(x))


def fmt_vec(v) -> str:
    return "[" + ", ".join(fmt_q(x) for x in v) + "]"


def fmt_combo(v) -> str:
    """``(0, 1, 0, -1)`` -> ``e2 - e4``."""
    parts = []
    for i, c in enumerate(v):
        if not c:
            continue
        mag = abs(Fraction(c))
        coef = "" if mag == 1 else f"{mag} "
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{coef}e{i + 1}"))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def fmt_subspace(V: Subspace) -> str:
    if V.is_zero():
        return "0"
    return "span{" + ", ".join(fmt_combo(v) for v in V.vectors) + "}"


def fmt_arrangement(A: Arrangement) -> str:
    return " ∪ ".join(fmt_subspace(V) for V in A.members)


def fmt_support(S) -> str:
    return "{" + ",".join(str(i + 1) for i in S) + "}"


def fmt_seq(S) -> str:
    return "(" + ", ".join(fmt_support(Si) for Si in S) + ")"


def fmt_poly(p: Poly) -> str:
    text = str(p)
    roots = rational_roots(p) if p.degree > 0 else []
    if roots:
        text += "  [rational roots: " + ", ".join(fmt_q(r) for r in roots) + "]"
    return text


def subspace_doc(V: Subspace) -> dict:
    return {"dim": V.dim, "basis": [[fmt_q(x) for x in v] for v in V.vectors]}


def arrangement_doc(A: Arrangement) -> dict:
    return {
        "size": A.size,
        "dim_vector": list(A.dim_vector()),
        "members": [subspace_doc(V) for V in A.members],
    }


def system_digest(sys: LinSystem) -> dict:
    blob = dumps(system_to_dict(sys)).encode("utf-8")
    return {"n": sys.n, "m": sys.m, "p": sys.p, "sha256": hashlib.sha256(blob).hexdigest()}


def seq_doc(S) -> list:
    return [[i + 1 for i in Si] for Si in S]


def signal_doc(values) -> list:
    return [[fmt_q(x) for x in v] for v in values]


# ---------------------------------------------------------------------------
# running the certificates
# ---------------------------------------------------------------------------


def _undecided(exc: IterationCapExceeded) -> dict:
    inv = exc.invariant
    return {
        "verdict": UNDECIDED,
        "reason": (
            f"no fixed point after {len(inv.iterates) - 1} iterations; "
            f"last iterate has {inv.size} members"
        ),
    }


def run_geometric(sys: LinSystem, s: int, cap: int, max_members: int) -> dict:
    try:
        cert = geometric_invertibility(sys, s, cap, max_members)
    except IterationCapExceeded as exc:
        return _undecided(exc)
    out = {
        "verdict": cert.verdict,
        "nu": cert.V.index,
        "tau": None if cert.T.capped else cert.T.index,
        "T_settled": not cert.T.capped,
        "condition2": cert.condition2,
        "condition3": cert.condition3_witness is None,
    }
    w = cert.witness
    if isinstance(w, IntersectionWitness):
        out["witness"] = {
            "kind": "intersection",
            "x": [fmt_q(c) for c in w.x],
            "x_text": fmt_combo(w.x),
            "T_member": subspace_doc(w.t_member),
            "V_member": subspace_doc(w.v_member),
        }
    elif isinstance(w, KernelWitness):
        out["witness"] = {
            "kind": "kernel",
            "support": [i + 1 for i in w.support],
            "u0": [fmt_q(c) for c in w.u0],
        }
    elif w is not None:
        out["witness"] = {
            "kind": "preimage",
            "support": [i + 1 for i in w.support],
            "u0": [fmt_q(c) for c in w.u0],
            "V_member": subspace_doc(w.v_member),
        }
    if w is not None:
        u, v = counterexample(sys, cert)
        same = simulate(sys, None, u) == simulate(sys, None, v)
        out["counterexample"] = {"u": signal_doc(u), "v": signal_doc(v), "equal_outputs": same}
    return out


def run_rank(sys: LinSystem, s: int, cap: int, max_members: int) -> dict:
    try:
        cert = inherent_delay(sys, s, cap)
    except IterationCapExceeded as exc:
        return _undecided(exc)
    return {
        "verdict": cert.verdict,
        "delay": cert.delay,
        "nu_2s": cert.nu,
        "failing_support": None if cert.failing_support is None else seq_doc(cert.failing_support),
        "rank_table": [[seq_doc(S), r, rs] for S, r, rs in cert.rank_table],
    }


def _spectral_witness_doc(sys, w, T=None) -> dict:
    doc = {
        "tau": w.tau,
        "support": seq_doc(w.support),
        "invariant_factor": w.invariant_factor.to_strings(),
        "factor_text": str(w.invariant_factor),
    }
    if w.component is not None:
        doc = {"component": w.component + 1, "component_basis": subspace_doc(T.members[w.component]), **doc}
    if w.split is not None:
        doc["split"] = w.split
    return doc


def run_spectral(sys: LinSystem, s: int, cap: int, max_members: int) -> dict:
    try:
        T = strongly_reachable(sys, 2 * s, cap, max_members).arrangement
        cert = spectral_invertibility(sys, s, cap, max_members=max_members)
        cor = corollary_check(sys, s, cap, max_members=max_members)
    except IterationCapExceeded as exc:
        return _undecided(exc)
    out = {"verdict": cert.verdict, "components": T.size}
    if cert.witness is not None:
        out["witness"] = _spectral_witness_doc(sys, cert.witness, T)
        out["failures_at_witness"] = [
            {"support": seq_doc(S), "invariant_factor": f.to_strings(), "factor_text": str(f)}
            for S, f in cert.failures
        ]
    out["corollary"] = {"verdict": cor.verdict, "bound": cor.bound}
    if cor.witness is not None:
        out["corollary"]["witness"] = _spectral_witness_doc(sys, cor.witness)
    return out


RUNNERS = {"geometric": run_geometric, "rank": run_rank, "spectral": run_spectral}


def combine(results: dict) -> str:
    verdicts = set()
    for res in results.values():
        verdicts.add(res["verdict"])
        if "corollary" in res:
            verdicts.add(res["corollary"]["verdict"])
    decided = verdicts - {UNDECIDED}
    if len(decided) > 1:
        raise CertificateMismatch(f"certificates disagree: {sorted(verdicts)}")
    return decided.pop() if decided else UNDECIDED


def check_report(sys: LinSystem, s: int, methods, cap: int, max_members: int) -> dict:
    results = {m: RUNNERS[m](sys, s, cap, max_members) for m in methods}
    return {
        "command": "check",
        "system": system_digest(sys),
        "parameters": {"s": s, "methods": list(methods), "cap": cap, "max_members": max_members},
        "verdict": combine(results),
        "results": results,
    }


def invariants_report(sys: LinSystem, s: int, cap: int, max_members: int) -> dict:
    out = {
        "command": "invariants",
        "system": system_digest(sys),
        "parameters": {"s": s, "cap": cap, "max_members": max_members},
    }
    for name, fn, idx in (("V", weakly_unobservable, "nu"), ("T", strongly_reachable, "tau")):
        try:
            inv = fn(sys, s, cap, max_members)
            out[name] = {idx: inv.index, **arrangement_doc(inv.arrangement)}
        except IterationCapExceeded as exc:
            out[name] = {idx: None, **_undecided(exc), "last_iterate": arrangement_doc(exc.invariant.arrangement)}
    return out


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _verdict_word(v: str) -> str:
    return {INVERTIBLE: "invertible", NOT_INVERTIBLE: "NOT invertible", UNDECIDED: "undecided"}[v]


def render_check(rep: dict) -> list[str]:
    sysd, par = rep["system"], rep["parameters"]
    lines = [
        f"system: n={sysd['n']} m={sysd['m']} p={sysd['p']} sha256={sysd['sha256'][:16]}",
        f"s = {par['s']}; supports are 1-indexed",
    ]
    res = rep["results"]
    if "geometric" in res:
        g = res["geometric"]
        lines.append(f"geometric: {_verdict_word(g['verdict'])}")
        if "reason" in g:
            lines.append(f"  {g['reason']}")
        else:
            tau = "no fixed point within caps" if g["tau"] is None else g["tau"]
            lines.append(f"  nu_2s = {g['nu']}, tau_2s = {tau}")
            w = g.get("witness")
            if w and w["kind"] == "intersection":
                lines.append(f"  T(2s) ∩ V(2s) contains x = {w['x_text']}")
            elif w and w["kind"] == "kernel":
                lines.append(f"  input {fmt_vec(w['u0'])} on {fmt_support([i - 1 for i in w['support']])} is invisible to D and B")
            elif w:
                lines.append(f"  input {fmt_vec(w['u0'])} on {fmt_support([i - 1 for i in w['support']])} has D u = 0 and B u in V(2s)")
            if "counterexample" in g:
                same = "identical" if g["counterexample"]["equal_outputs"] else "DIFFERENT"
                lines.append(f"  counterexample pair of length {len(g['counterexample']['u'])}: {same} outputs")
    if "rank" in res:
        r = res["rank"]
        if r["verdict"] == INVERTIBLE:
            lines.append(f"rank: invertible with inherent delay {r['delay']}")
        elif "reason" in r:
            lines.append(f"rank: undecided\n  {r['reason']}")
        else:
            S = [[i - 1 for i in Si] for Si in r["failing_support"]]
            lines.append(f"rank: NOT invertible; fails at N = nu_2s = {r['nu_2s']} on {fmt_seq(S)}")
    if "spectral" in res:
        sp = res["spectral"]
        lines.append(f"spectral: {_verdict_word(sp['verdict'])}")
        if "reason" in sp:
            lines.append(f"  {sp['reason']}")
        else:
            lines.append(f"  T(2s) has {sp['components']} component(s)")
            w = sp.get("witness")
            if w:
                S = [[i - 1 for i in Si] for Si in w["support"]]
                f = Poly([Fraction(c) for c in w["invariant_factor"]])
                lines.append(f"  component {w['component']}, tau = {w['tau']}, support {fmt_seq(S)}: factor {fmt_poly(f)}")
            c = sp["corollary"]
            lines.append(f"  corollary (N <= {c['bound']}): {_verdict_word(c['verdict'])}")
    lines.append(f"verdict: {_verdict_word(rep['verdict'])}")
    return lines


def render_invariants(rep: dict) -> list[str]:
    s = rep["parameters"]["s"]
    lines = []
    for name, idx in (("V", "nu"), ("T", "tau")):
        d = rep[name]
        if d[idx] is None:
            lines.append(f"{name}({s}): undecided ({d['reason']})")
            continue
        lines.append(f"{name}({s}): {idx}_{s} = {d[idx]}, c = {d['size']}, d = {tuple(d['dim_vector'])}")
        for mem in d["members"]:
            basis = [tuple(Fraction(x) for x in v) for v in mem["basis"]]
            lines.append("  " + (("span{" + ", ".join(fmt_combo(v) for v in basis) + "}") if basis else "0"))
    return lines


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

VERDICT_EXIT = {INVERTIBLE: EXIT_OK, NOT_INVERTIBLE: EXIT_NOT_INVERTIBLE, UNDECIDED: EXIT_UNDECIDED}
STATUS_EXIT = {OK: EXIT_OK, AMBIGUOUS: EXIT_AMBIGUOUS, INCONSISTENT: EXIT_INCONSISTENT}


def _emit(rep: dict, lines, args, started: float) -> None:
    if getattr(args, "timing", False):
        rep["wall_time_s"] = round(time.perf_counter() - started, 6)
    if args.json:
        _sys.stdout.write(dumps(rep))
    else:
        if "wall_time_s" in rep:
            lines = list(lines) + [f"wall time: {rep['wall_time_s']} s"]
        _sys.stdout.write("\n".join(lines) + "\n")


def cmd_check(args) -> int:
    started = time.perf_counter()
    sys = load_system(args.system)
    methods = METHODS if args.method == "all" else (args.method,)
    rep = check_report(sys, args.s, methods, args.cap, args.max_members)
    _emit(rep, render_check(rep), args, started)
    return VERDICT_EXIT[rep["verdict"]]


def cmd_invariants(args) -> int:
    started = time.perf_counter()
    sys = load_system(args.system)
    rep = invariants_report(sys, args.s, args.cap, args.max_members)
    _emit(rep, render_invariants(rep), args, started)
    capped = rep["V"]["nu"] is None or rep["T"]["tau"] is None
    return EXIT_UNDECIDED if capped else EXIT_OK


def recover_report(sys, outputs, s, delay_arg, force, cap) -> tuple[dict, list]:
    cert = None
    if delay_arg == "auto":
        cert = inherent_delay(sys, s, cap)
        if not cert.invertible and not force:
            raise UsageError(
                "system is not left s-sparse invertible; pass --force to attempt recovery anyway"
            )
        delay = cert.delay if cert.invertible else cert.nu
    else:
        delay = int(delay_arg)
        if delay < 0:
            raise UsageError("--delay must be nonnegative")
        if not force:
            cert = inherent_delay(sys, s, cap)
            if not cert.invertible or delay < cert.delay:
                raise UsageError(
                    f"no rank certificate at delay {delay}; pass --force to attempt recovery anyway"
                )
    res = recover_inputs(sys, s, delay, outputs)
    rep = {
        "command": "recover",
        "system": system_digest(sys),
        "parameters": {"s": s, "delay": delay, "forced": bool(force)},
        "status": res.status,
        "recovered": len(res.inputs),
        "supports": [[i + 1 for i in S] for S in res.supports],
        "inputs": signal_doc(res.inputs),
    }
    if res.step is not None:
        rep["failed_step"] = res.step
    if res.candidates:
        rep["candidates"] = signal_doc(res.candidates)
    lines = [f"status: {res.status}; delay {delay}; recovered {len(res.inputs)} input(s)"]
    for k, u in enumerate(res.inputs):
        lines.append(f"  u[{k}] = {fmt_vec(u)}")
    if res.status == AMBIGUOUS:
        lines.append(f"  step {res.step}: candidates " + " and ".join(fmt_vec(c) for c in res.candidates))
    elif res.status == INCONSISTENT:
        lines.append(f"  step {res.step}: no s-sparse input explains the outputs")
    return rep, lines, res


def cmd_recover(args) -> int:
    started = time.perf_counter()
    sys = load_system(args.system)
    outputs = load_signal(args.outputs, sys.p)
    rep, lines, res = recover_report(sys, outputs, args.s, args.delay, args.force, args.cap)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(signal_to_dict(res.inputs, sys.m)))
    _emit(rep, lines, args, started)
    return STATUS_EXIT[res.status]


def cmd_simulate(args) -> int:
    sys = load_system(args.system)
    inputs = load_signal(args.inputs, sys.m)
    steps = len(inputs) if args.steps is None else args.steps
    if steps > len(inputs):
        raise UsageError(f"--steps {steps} exceeds the {len(inputs)} inputs given")
    ys = simulate(sys, None, inputs, steps)
    text = dumps(signal_to_dict(ys, sys.p))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------


def _data(name: str):
    return resources.files("sparseinv").joinpath("data").joinpath(name)


def demo_lines() -> list[str]:
    L = []
    add = L.append
    add("Four-node ring with one input per edge: n = 4 states, m = 4 inputs, p = 3 outputs.")
    add("alpha = 1 adds node 2 to the measured nodes. Supports are 1-indexed.")
    verdicts = {}
    for alpha in (0, 1):
        sys = sigma_alpha(alpha)
        name = f"Σ{'₀₁'[alpha]}"
        add("")
        add(f"== {name} (alpha = {alpha}) ==")
        for s in (1, 2):
            V = weakly_unobservable(sys, s)
            add(f"V({s}) = {fmt_arrangement(V.arrangement)}   (nu_{s} = {V.index})")
        T = strongly_reachable(sys, 2)
        add(f"T(2): {T.size} member(s) of dims {tuple(M.dim for M in T.arrangement.members)}   (tau_2 = {T.index})")
        rep = check_report(sys, 1, METHODS, DEFAULT_CAP, DEFAULT_MAX_MEMBERS)
        res = rep["results"]
        g, r, sp = res["geometric"], res["rank"], res["spectral"]
        add(f"geometric: {_verdict_word(g['verdict'])}")
        if g.get("witness", {}).get("kind") == "intersection":
            add(f"  T(2) ∩ V(2) contains x = {g['witness']['x_text']}")
        if "counterexample" in g:
            ce = g["counterexample"]
            show = lambda sig: ", ".join(fmt_combo([Fraction(x) for x in v]) for v in sig[:4]) + ", ..."
            add(f"  u = ({show(ce['u'])})")
            add(f"  v = ({show(ce['v'])})")
            add(f"  outputs of u and v over {len(ce['u'])} steps are {'identical' if ce['equal_outputs'] else 'DIFFERENT'}")
        if r["verdict"] == INVERTIBLE:
            add(f"rank: invertible, inherent delay {r['delay']} (nu_2 = {r['nu_2s']})")
            if alpha == 1:
                from .exactlin import rank as _rank
                for S0 in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
                    k = _rank(sys.C @ sys.B.select_cols(S0))
                    add(f"  rank C B_S for S = {fmt_support(S0)}: {k}")
        else:
            S = [[i - 1 for i in Si] for Si in r["failing_support"]]
            add(f"rank: NOT invertible; fails at N = nu_2 = {r['nu_2s']} on {fmt_seq(S)}")
        add(f"spectral: {_verdict_word(sp['verdict'])}")
        if "witness" in sp:
            w = sp["witness"]
            comp = [tuple(Fraction(x) for x in v) for v in w["component_basis"]["basis"]]
            member = Subspace(sys.n, comp)
            x0 = (0, 1, 0, -1)
            note = f", contains {fmt_combo(x0)}" if member.contains_vector(x0) else ""
            add(f"  component {w['component']} = {fmt_subspace(member)}{note}")
            add(f"  failing supports at tau = {w['tau']}:")
            for fl in sp["failures_at_witness"]:
                S = [[i - 1 for i in Si] for Si in fl["support"]]
                f = Poly([Fraction(c) for c in fl["invariant_factor"]])
                add(f"    {fmt_seq(S)}: factor ({f})" + (f"  rank drop at z = {', '.join(fmt_q(q) for q in rational_roots(f))}" if f.degree > 0 else ""))
        c = sp["corollary"]
        add(f"corollary (N <= {c['bound']}): {_verdict_word(c['verdict'])}")
        verdicts[alpha] = (rep["verdict"], r.get("delay"))
        if rep["verdict"] == INVERTIBLE:
            add(f"{name}: left 1-sparse invertible, delay {r['delay']}")
        else:
            add(f"{name}: NOT left 1-sparse invertible")

    add("")
    add("== recovery ==")
    s1 = sigma_alpha(1)
    u_true = load_signal(_data("sigma1_inputs.json"), 4)
    y = load_signal(_data("sigma1_outputs.json"), 3)
    res = recover_inputs(s1, 1, 1, y)
    exact = res.ok and list(res.inputs) == list(u_true)
    add(f"Σ₁, bundled trace: {len(res.inputs)} inputs recovered with delay 1, {'exact' if exact else 'MISMATCH'}")
    y0 = load_signal(_data("sigma0_ambiguous_outputs.json"), 3)
    res0 = recover_inputs(sigma_alpha(0), 1, 1, y0)
    cands = " vs ".join(fmt_combo(c) for c in res0.candidates)
    add(f"Σ₀, bundled trace: {res0.status} at step {res0.step} ({cands})")
    return L


def cmd_demo(args) -> int:
    lines = demo_lines()
    if args.json:
        _sys.stdout.write(dumps({"command": "demo", "lines": lines}))
    else:
        _sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(_sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _delay(text: str) -> str:
    if text != "auto" and not text.isdigit():
        raise argparse.ArgumentTypeError("expected 'auto' or a nonnegative integer")
    return text


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = _Parser(prog="sparseinv", description="Exact left-invertibility certificates for linear systems with sparse inputs.", epilog=EPILOG, formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, system=True):
        if system:
            sp.add_argument("system", help="system JSON file")
        sp.add_argument("--s", type=_positive, default=1, help="sparsity level (default 1)")
        sp.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="fixed-point iteration cap")
        sp.add_argument("--max-members", type=_positive, default=DEFAULT_MAX_MEMBERS, help="arrangement size cap")
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.add_argument("--timing", action="store_true", help="append wall time (breaks byte-identical output)")

    c = sub.add_parser("check", help="decide left s-sparse invertibility", epilog=EPILOG, formatter_class=fmt)
    common(c)
    c.add_argument("--method", choices=METHODS + ("all",), default="all")
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("invariants", help="print V(s), T(s) and their indices", epilog=EPILOG, formatter_class=fmt)
    common(i)
    i.set_defaults(func=cmd_invariants)

    r = sub.add_parser("recover", help="recover sparse inputs from outputs", epilog=EPILOG, formatter_class=fmt)
    common(r)
    r.add_argument("outputs", help="output signal JSON file")
    r.add_argument("--delay", type=_delay, default="auto")
    r.add_argument("--force", action="store_true", help="recover without a rank certificate")
    r.add_argument("--out", help="write recovered inputs here")
    r.set_defaults(func=cmd_recover)

    sm = sub.add_parser("simulate", help="zero-state outputs for an input signal")
    sm.add_argument("system")
    sm.add_argument("inputs", help="input signal JSON file")
    sm.add_argument("--steps", type=int, default=None)
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_simulate)

    d = sub.add_parser("demo", help="worked study of the four-node ring network")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, UsageError, OSError) as exc:
        print(f"sparseinv: error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except CertificateMismatch as exc:
        print(f"sparseinv: internal error: {exc}", file=_sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    raise SystemExit(main())
