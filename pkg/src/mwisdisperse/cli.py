"""Command line: solve, validate, gen and bench.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .classes import GraphClass, parse_class
from .dispersers import is_good
from .esd import DisperserEntry, atoms, load_esd, shatters, validate_esd
from .generators import GenerationError, generate
from .graph import Graph, GraphFormatError, WeightFn, dump_graph, from_mask, load_graph, to_mask
from .pathfinder import ClassViolation
from .patterns import CapExceeded, freeness_check
from .report import RunReport, digest, plot_ratios, plot_runtimes, write_tables
from .solvers import (BRUTE_FORCE_CAP, HfreeConfig, QptasConfig, SubexpConfig, mwis_bruteforce,
                      mwis_hfree_approx, mwis_hfree_exact, qptas, subexp_exact)
from .tree_oracle import restricting_provider

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_pattern(path: str) -> Graph:
    G, _ = load_graph(_read(path))
    return G


def _parse_eps(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        e = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--eps must be a rational such as 1/4, got {text!r}") from None
    if not 0 < e < 1 or e.numerator != 1:
        raise UsageError(f"--eps must be 1/k for an integer k >= 2, got {text}")
    return e


def _vertex_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated vertex ids, got {text!r}") from None


def load_weights(text: str, n: int) -> WeightFn:
    """Weights from ``n v w`` or ``v w`` lines; unspecified vertices weigh 1."""
    vals = [1] * n
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] in ("c", "p", "e"):
            continue
        if parts[0] == "n":
            parts = parts[1:]
        try:
            v, x = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError("expected 'v w'", lineno) from None
        if not 0 <= v < n:
            raise GraphFormatError(f"vertex {v} out of range", lineno)
        vals[v] = x
    return WeightFn(tuple(vals))


# ---------------------------------------------------------------------------
# solver dispatch

def run_solver(G: Graph, w: WeightFn, cls: GraphClass, mode: str, eps: Fraction | None,
               config: str = "strict", j_cap: int | None = None, provider=None):
    if mode == "approx":
        if cls.kind == "hfree":
            return mwis_hfree_approx(G, w, eps, cls.pattern, HfreeConfig(j_cap=j_cap))
        qc = QptasConfig(eps, cls, provider=provider) if j_cap is None else \
            QptasConfig(eps, cls, j_cap=j_cap, provider=provider)
        return qptas(G, w, eps, cls, qc)
    if cls.kind == "hfree":
        return mwis_hfree_exact(G, w, cls.pattern, HfreeConfig(subexp=config))
    make = SubexpConfig.permissive if config == "permissive" else SubexpConfig.for_class
    return subexp_exact(G, w, cls, make(cls, provider=provider))


def oracle_check(G: Graph, w: WeightFn, weight: int, mode: str, eps: Fraction | None) -> dict:
    if len(G) > BRUTE_FORCE_CAP:
        return {"ran": False, "reason": f"n = {len(G)} exceeds the brute-force cap"}
    opt = mwis_bruteforce(G, w).weight
    if mode == "exact":
        match = weight == opt
    else:
        match = weight * eps.denominator >= (eps.denominator - eps.numerator) * opt
    return {"ran": True, "opt": opt, "oracle_match": match}


def _stats(res) -> dict:
    return {k: v for k, v in res.stats.items()}


# ---------------------------------------------------------------------------
# commands

def cmd_solve(args) -> RunReport:
    text = _read(args.graph)
    G, w = load_graph(text)
    cls = parse_class(args.cls, _load_pattern)
    eps = _parse_eps(args.eps)
    if args.mode == "approx" and eps is None:
        raise UsageError("--mode approx needs --eps")
    inputs = {"graph": digest(text)}
    provider = None
    if args.external_esd:
        etext = _read(args.external_esd)
        provider = restricting_provider(load_esd(etext))
        inputs["external_esd"] = digest(etext)
    rep = RunReport(command=["solve"] + args.argv, seed=args.seed, inputs=inputs,
                    config={"class": str(cls), "mode": args.mode, "eps": eps, "config": args.config,
                            "j_cap": args.j_cap})
    if args.check_class:
        free, witness = freeness_check(G, cls)
        rep.verification["class_check"] = {"free": free, "witness": witness}
        if not free:
            rep.exit_code = EXIT_VERIFY
            return rep
    started = time.perf_counter()
    try:
        res = run_solver(G, w, cls, args.mode, eps, args.config, args.j_cap, provider)
    except ClassViolation as exc:
        rep.verification["class_violation"] = {"message": str(exc), "witness": exc.witness}
        rep.exit_code = EXIT_VERIFY
        return rep
    rep.wall_time = time.perf_counter() - started
    rep.result = {"weight": res.weight, "set": sorted(res.set), "independent": G.is_independent_mask(res.mask)}
    rep.stats = _stats(res)
    if args.oracle:
        check = oracle_check(G, w, res.weight, args.mode, eps)
        rep.verification["oracle"] = check
        if check.get("ran") and not check["oracle_match"]:
            rep.exit_code = EXIT_VERIFY
    return rep


def cmd_validate(args) -> RunReport:
    text = _read(args.graph)
    G, w = load_graph(text)
    etext = _read(args.esd)
    d = load_esd(etext)
    X = to_mask(_vertex_list(args.cut)) if args.cut else 0
    rest = G.remove(X)
    inputs = {"graph": digest(text), "esd": digest(etext)}
    rep = RunReport(command=["validate"] + args.argv, inputs=inputs, config={"cut": sorted(from_mask(X))})
    ok = True
    er = validate_esd(rest, d)
    rep.verification["esd"] = {"valid": er.ok, "violations": list(er.violations)}
    ok &= er.ok
    if args.shatter:
        Z = _vertex_list(args.shatter)
        if len(Z) != 3:
            raise UsageError("--shatter takes exactly three vertices")
        s = er.ok and shatters(rest, d, Z)
        rep.verification["shatters"] = {"Z": Z, "holds": bool(s)}
        ok &= bool(s)
    if args.atoms and er.ok:
        rep.result["atoms"] = [{"kind": a.kind, "key": repr(a.key), "vertices": sorted(a.vertices),
                                "trivial": a.trivial} for a in atoms(rest, d)]
    if args.goodness:
        try:
            gamma, delta = (Fraction(x) for x in args.goodness.split(","))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--goodness expects GAMMA,DELTA, got {args.goodness!r}") from None
        if not (0 <= gamma < 1 and 0 < delta <= 1):
            raise UsageError("--goodness needs 0 <= GAMMA < 1 and 0 < DELTA <= 1")
        if args.weights:
            wtext = _read(args.weights)
            w = load_weights(wtext, G.n)
            inputs["weights"] = digest(wtext)
        if er.ok:
            g = is_good(G, w, DisperserEntry(X, d), gamma, delta)
            rep.verification["goodness"] = {"gamma": gamma, "delta": delta, "shrinking": g.shrinking,
                                            "safe": g.safe, "good": g.good}
            ok &= g.good
    rep.exit_code = EXIT_OK if ok else EXIT_VERIFY
    return rep


def cmd_gen(args) -> RunReport:
    lo, hi = _weight_range(args.weights)
    G, w = generate(args.spec, args.seed, (lo, hi), load_pattern=_load_pattern)
    text = dump_graph(G, w, comment=f"generated {args.spec} seed {args.seed}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return RunReport(command=["gen"] + args.argv, seed=args.seed, config={"spec": args.spec, "weights": [lo, hi]},
                     result={"n": G.n, "m": G.num_edges(), "digest": digest(text), "out": args.out})


def _weight_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--weights expects LO,HI, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise UsageError("--weights needs 0 <= LO <= HI")
    return lo, hi


def _bench_one(job) -> dict:
    name, text, cls_text, modes, eps, config, oracle, j_cap = job
    G, w = load_graph(text)
    cls = parse_class(cls_text, _load_pattern)
    row = {"instance": name, "n": len(G), "class": str(cls)}
    weights = {}
    for mode in modes:
        t0 = time.perf_counter()
        res = run_solver(G, w, cls, mode, eps, config, j_cap)
        row[f"{mode}_time"] = round(time.perf_counter() - t0, 4)
        row[f"{mode}_weight"] = res.weight
        row[f"{mode}_nodes"] = res.stats.get("nodes")
        weights[mode] = res.weight
    ref = None
    if oracle and len(G) <= BRUTE_FORCE_CAP:
        ref = mwis_bruteforce(G, w).weight
        row["opt"] = ref
        ok = True
        if "exact" in weights:
            ok &= weights["exact"] == ref
        if "approx" in weights:
            ok &= weights["approx"] * eps.denominator >= (eps.denominator - eps.numerator) * ref
        row["oracle_match"] = ok
    elif "exact" in weights:
        ref = weights["exact"]
    if "approx" in weights and ref is not None:
        row["ratio"] = str(Fraction(weights["approx"], ref)) if ref else "1"
    return row


def cmd_bench(args) -> RunReport:
    cls_text = args.cls
    eps = _parse_eps(args.eps)
    modes = [m for m in args.modes.split(",") if m]
    if not modes or any(m not in ("exact", "approx") for m in modes):
        raise UsageError("--modes is a comma list of exact and approx")
    if "approx" in modes and eps is None:
        raise UsageError("approx runs need --eps")
    parse_class(cls_text, _load_pattern)
    jobs = []
    if args.instances:
        files = sorted(p for p in Path(args.instances).iterdir() if p.suffix in (".gr", ".txt", ".graph"))
        if not files:
            raise UsageError(f"no instances in {args.instances}")
        for p in files:
            jobs.append((p.name, p.read_text(), cls_text, modes, eps, args.config, args.oracle, args.j_cap))
    elif args.gen:
        lo, hi = _weight_range(args.weights)
        for i in range(args.count):
            G, w = generate(args.gen, args.seed + i, (lo, hi), load_pattern=_load_pattern)
            jobs.append((f"{args.gen}#{args.seed + i}", dump_graph(G, w), cls_text, modes, eps,
                         args.config, args.oracle, args.j_cap))
    else:
        raise UsageError("bench needs --instances DIR or --gen SPEC")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    out = Path(args.out)
    paths = write_tables(rows, out)
    figures = [plot_runtimes(rows, out / "runtime.png")]
    if "approx" in modes:
        figures.append(plot_ratios(rows, eps, out / "ratio.png"))
    mismatches = sum(1 for r in rows if r.get("oracle_match") is False)
    below = 0
    if eps is not None:
        below = sum(1 for r in rows if r.get("ratio") and Fraction(r["ratio"]) < 1 - eps)
    rep = RunReport(command=["bench"] + args.argv, seed=args.seed,
                    config={"class": cls_text, "modes": modes, "eps": eps, "config": args.config,
                            "oracle": args.oracle},
                    inputs={r["instance"]: digest(j[1]) for r, j in zip(rows, jobs)},
                    result={"instances": len(rows), "tables": [p.name for p in paths],
                            "figures": [p.name for p in figures],
                            "rows": [{k: v for k, v in r.items()} for r in rows]},
                    verification={"oracle_mismatches": mismatches, "ratio_violations": below})
    rep.exit_code = EXIT_VERIFY if mismatches or below else EXIT_OK
    (out / "report.json").write_text(rep.dumps(args.timings))
    return rep


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mwisdisperse", description="Disperser-based MWIS solvers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--report", help="also write the report to this file")
        sp.add_argument("--timings", action="store_true", help="include wall times (not byte-reproducible)")

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("--graph", required=True)
    s.add_argument("--class", dest="cls", required=True, help="pt:T, hole:T, claw:T, lobster:T or hfree:FILE")
    s.add_argument("--mode", choices=("exact", "approx"), required=True)
    s.add_argument("--eps")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--external-esd")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--config", choices=("strict", "permissive"), default="strict",
                   help="parameters of the exact recursion")
    s.add_argument("--j-cap", type=int, default=None, help="largest guessed set J")
    s.add_argument("--check-class", action="store_true", help="verify class membership first")
    common(s)

    v = sub.add_parser("validate", help="check a decomposition")
    v.add_argument("--graph", required=True)
    v.add_argument("--esd", required=True)
    v.add_argument("--cut", help="comma-separated X; the decomposition is of G - X")
    v.add_argument("--shatter", help="three comma-separated vertices")
    v.add_argument("--atoms", action="store_true")
    v.add_argument("--goodness", help="GAMMA,DELTA")
    v.add_argument("--weights")
    common(v)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("spec")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.add_argument("--weights", default="1,10", help="LO,HI")
    common(g)

    b = sub.add_parser("bench", help="run a solver matrix over many instances")
    b.add_argument("--instances")
    b.add_argument("--gen")
    b.add_argument("--count", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--weights", default="1,10")
    b.add_argument("--class", dest="cls", required=True)
    b.add_argument("--modes", default="exact,approx")
    b.add_argument("--eps", default="1/4")
    b.add_argument("--config", choices=("strict", "permissive"), default="strict")
    b.add_argument("--j-cap", type=int, default=None)
    b.add_argument("--oracle", action="store_true")
    b.add_argument("--out", default="bench_out")
    b.add_argument("--jobs", type=int, default=1)
    common(b)
    return p


COMMANDS = {"solve": cmd_solve, "validate": cmd_validate, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        args.argv = argv[1:]
        rep = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClassViolation as exc:
        print(f"class violation: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (GraphFormatError, ValueError, GenerationError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = rep.dumps(getattr(args, "timings", False))
    if args.report:
        Path(args.report).write_text(text)
    if args.command != "gen" or args.out:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
