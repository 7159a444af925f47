"""Command-line entry point.

One binary, six subcommand families: check | solve | witness | approx |
apps | entropy.  Every run prints a JSON report that embeds the exact
argv, the seed, and the package version; replaying the embedded argv
reproduces the report byte for byte.  Exit codes: 0 success, 2 bad input,
3 step-limit under --strict.
"""

import argparse
import json
import sys

from . import __version__
from .certify import check_eps_correct, check_glll, check_slll, suggest_omega
from .engine import DEFAULT_MAX_STEPS, solve
from .graphs import GraphError, SimpleGraph
from .instance import Instance, InstanceError

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_STEP_LIMIT = 3

# every report printed by this module conforms to this envelope
REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "config", "seed", "version", "report"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "config": {
            "type": "object",
            "required": ["argv"],
            "additionalProperties": False,
            "properties": {"argv": {"type": "array", "items": {"type": "string"}}},
        },
        "seed": {"type": ["integer", "null"]},
        "version": {"type": "string"},
        "report": {"type": "object"},
    },
}


class CliError(Exception):
    pass


def _load_instance(path) -> Instance:
    try:
        return Instance.load(path)
    except FileNotFoundError:
        raise CliError(f"instance file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: not valid JSON: {exc.msg}")
    except InstanceError as exc:
        raise CliError(f"{path}: {exc}")


def _load_graph(path) -> SimpleGraph:
    try:
        return SimpleGraph.load(path)
    except FileNotFoundError:
        raise CliError(f"graph file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: not valid JSON: {exc.msg}")
    except (GraphError, KeyError) as exc:
        raise CliError(f"{path}: {exc}")


def _resolve_omega(inst, spec):
    if spec == "auto":
        suggestion = suggest_omega(inst)
        if not suggestion.ok:
            raise CliError(f"no certifying weights found; first failing event: "
                           f"{suggestion.failed_event}")
        return suggestion.omega
    try:
        with open(spec) as fh:
            doc = json.load(fh)
        return {int(k): float(v) for k, v in doc.items()}
    except FileNotFoundError:
        raise CliError(f"omega file not found: {spec}")
    except (json.JSONDecodeError, ValueError) as exc:
        raise CliError(f"{spec}: bad omega file: {exc}")


def _strip_out(argv):
    """The report destination is not part of the run's semantic config."""
    out = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        out.append(tok)
    return out


def _emit(report, args, argv):
    envelope = {
        "command": report.pop("_command"),
        "config": {"argv": _strip_out(argv)},
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "report": report,
    }
    text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommand handlers ------------------------------------------------------


def _cmd_check(args, argv):
    inst = _load_instance(args.instance)
    if args.mode == "slll":
        cert = check_slll(inst)
    elif args.mode == "glll":
        cert = check_glll(inst, _resolve_omega(inst, args.omega))
    else:
        if args.epsilon is None:
            raise CliError("eps mode needs --epsilon")
        cert = check_eps_correct(inst, args.epsilon,
                                 _resolve_omega(inst, args.omega))
    report = cert.to_dict()
    report["_command"] = f"check.{args.mode}"
    _emit(report, args, argv)
    return EXIT_OK


def _cmd_solve(args, argv):
    from .tables import ExplicitTable, TableError

    inst = _load_instance(args.instance)
    if args.table is not None:
        # replay a hand-written table through the object engine
        from .engine import run, violated_domains

        try:
            table = ExplicitTable.from_json(inst, args.table)
            trace = run(inst, table, max_steps=args.max_steps, rule=args.rule,
                        rule_seed=args.rule_seed)
        except FileNotFoundError:
            raise CliError(f"table file not found: {args.table}")
        except (json.JSONDecodeError, KeyError, TypeError, TableError) as exc:
            raise CliError(f"{args.table}: bad table: {exc}")
        surviving = sorted(violated_domains(inst, trace.f)) \
            if trace.status != "stabilized" else []
        report = {
            "_command": "solve",
            "status": trace.status,
            "seed": None,
            "steps": trace.resample_rounds(),
            "final_assignment": trace.assignment(),
            "resamples_per_domain": {" ".join(map(str, k)): v for k, v
                                     in sorted(trace.resamples_per_domain().items())},
            "surviving_domains": [list(d) for d in surviving],
        }
        _emit(report, args, argv)
        if trace.status != "stabilized" and args.strict:
            return EXIT_STEP_LIMIT
        return EXIT_OK
    if args.seed is None:
        raise CliError("solve needs --seed (or --table for a replay)")
    res = solve(inst, args.seed, max_steps=args.max_steps, rule=args.rule,
                rule_seed=args.rule_seed)
    report = res.to_dict()
    report["_command"] = "solve"
    if args.plot:
        hist = {}
        for count in res.resamples_per_domain.values():
            hist[count] = hist.get(count, 0) + 1
        zero = len(inst.domains()) - len(res.resamples_per_domain)
        if zero:
            hist[0] = hist.get(0, 0) + zero
        with open(args.plot, "w") as fh:
            fh.write("resamples,domains\n")
            for k in sorted(hist):
                fh.write(f"{k},{hist[k]}\n")
    _emit(report, args, argv)
    if res.status != "stabilized" and args.strict:
        return EXIT_STEP_LIMIT
    return EXIT_OK


def _cmd_witness(args, argv):
    from . import witness
    from .engine import run
    from .tables import SeededTable

    inst = _load_instance(args.instance)
    if args.witness_cmd == "validate":
        try:
            with open(args.pile) as fh:
                pile = witness.pile_from_json(json.load(fh))
        except FileNotFoundError:
            raise CliError(f"pile file not found: {args.pile}")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{args.pile}: bad pile file: {exc}")
        rep = witness.validate_pile(pile)
        report = {"_command": "witness.validate", "is_pile": rep.is_pile,
                  "is_neat": rep.is_neat, "height": rep.height,
                  "support": list(rep.support),
                  "top": [[list(x) for x in e] for e in rep.top],
                  "reason": rep.reason}
        if args.table_seed is not None:
            table = SeededTable(inst, args.table_seed)
            report["appears_in_table"] = witness.appears_in(pile, table, inst)
        _emit(report, args, argv)
        return EXIT_OK
    if args.witness_cmd == "traceback":
        domains = inst.domains()
        if not (0 <= args.domain < len(domains)):
            raise CliError(f"domain index {args.domain} out of range")
        S = domains[args.domain]
        table = SeededTable(inst, args.seed)
        trace = run(inst, table, max_steps=args.max_steps)
        hits = [n for n, rec in enumerate(trace.steps) if S in rec.violated]
        if not hits:
            raise CliError(f"domain {list(S)} was never violated in this run")
        n = args.step if args.step is not None else hits[-1]
        if n not in hits:
            raise CliError(f"domain {list(S)} not violated at step {n}; "
                           f"violated at {hits}")
        pile = witness.traceback(trace, S, n)
        rep = witness.validate_pile(pile)
        report = {"_command": "witness.traceback", "domain": list(S), "step": n,
                  "pile": witness.pile_to_json(pile), "height": rep.height,
                  "is_neat": rep.is_neat,
                  "appears_in_table": witness.appears_in(pile, table, inst),
                  "tree": witness.tree_to_json(witness.pile_to_tree(pile))}
        _emit(report, args, argv)
        return EXIT_OK
    # bound
    omega = _resolve_omega(inst, args.omega)
    domains = inst.domains()
    if not (0 <= args.domain < len(domains)):
        raise CliError(f"domain index {args.domain} out of range")
    try:
        rep = witness.verify_index_bound(inst, omega, domains[args.domain],
                                         args.tables, max_height=args.max_height,
                                         base_seed=args.base_seed)
    except ValueError as exc:
        raise CliError(str(exc))
    report = rep.to_dict()
    report["_command"] = "witness.bound"
    _emit(report, args, argv)
    return EXIT_OK


def _cmd_approx(args, argv):
    from .approx import choose_N, run_truncated, build_dependency_graph
    from .approx import greedy_power_coloring, is_proper_at_power

    inst = _load_instance(args.instance)
    if args.N == "auto":
        omega = None
        suggestion = suggest_omega(inst)
        if suggestion.ok:
            omega = suggestion.omega
        chosen = choose_N(inst, omega, args.epsilon)
        N, mode, details = chosen.N, chosen.mode, chosen.details
    else:
        try:
            N = int(args.N)
        except ValueError:
            raise CliError("--N takes 'auto' or an integer")
        mode, details = "fixed", {}
    G = build_dependency_graph(inst)
    coloring = greedy_power_coloring(G, 2 * (N + 1))
    if not is_proper_at_power(G, coloring, 2 * (N + 1)):
        raise CliError("internal: greedy power coloring is not proper")
    fractions = []
    for i in range(args.seeds):
        _, defect = run_truncated(inst, coloring, args.seed + i, N,
                                  check_coloring=False)
        fractions.append(defect.fraction)
    mean = sum(fractions) / len(fractions) if fractions else 0.0
    if args.plot:
        # defect-vs-N series: the chosen coloring is proper for every
        # smaller truncation height as well
        with open(args.plot, "w") as fh:
            fh.write("N,seed,defect_fraction\n")
            for n_trunc in range(N + 1):
                for i in range(args.seeds):
                    _, d = run_truncated(inst, coloring, args.seed + i,
                                         n_trunc, check_coloring=False)
                    fh.write(f"{n_trunc},{args.seed + i},{d.fraction}\n")
    report = {"_command": "approx", "N": N, "mode": mode, "details": details,
              "epsilon": args.epsilon, "colors_used": len(set(coloring)),
              "per_seed_fraction": fractions, "mean_defect_fraction": mean,
              "target": args.epsilon, "meets_target": mean <= args.epsilon}
    _emit(report, args, argv)
    return EXIT_OK


def _cmd_apps(args, argv):
    from . import apps

    if args.apps_cmd == "hypergraph":
        inst = apps.gen_hypergraph_2col(args.k, args.n, args.topology,
                                        d=args.d, m=args.m, seed=args.seed)
        cert = check_slll(inst)
        report = {"_command": "apps.hypergraph", "k": args.k, "n": args.n,
                  "topology": args.topology, "events": len(inst.events),
                  "slll": cert.to_dict()}
        if args.save:
            inst.dump(args.save)
            report["saved"] = args.save
        if args.solve:
            res = solve(inst, args.seed)
            from .engine import violated_domains

            report["solve"] = res.to_dict()
            report["verified"] = (res.status == "stabilized"
                                  and not violated_domains(inst, res.assignment))
        _emit(report, args, argv)
        return EXIT_OK
    if args.apps_cmd == "listcolor":
        G = _load_graph(args.graph)
        try:
            with open(args.lists) as fh:
                doc = json.load(fh)
            lists = {int(k): list(v) for k, v in doc.items()}
        except FileNotFoundError:
            raise CliError(f"lists file not found: {args.lists}")
        except (json.JSONDecodeError, ValueError) as exc:
            raise CliError(f"{args.lists}: bad lists file: {exc}")
        res = apps.list_coloring_lll(G, lists, args.k, seed=args.seed)
        report = {"_command": "apps.listcolor", "status": res.status,
                  "hypothesis_ok": res.hypothesis_ok,
                  "violations": [list(map(str, v)) for v in res.violations],
                  "verified": res.verified, "steps": res.steps,
                  "coloring": {str(k): v for k, v in sorted(res.coloring.items())}}
        _emit(report, args, argv)
        return EXIT_OK
    if args.apps_cmd == "nonrep":
        G = _load_graph(args.graph)
        inst = apps.gen_nonrepetitive(G, args.colors, args.lmax)
        res = solve(inst, args.seed)
        ok = (res.status == "stabilized"
              and apps.verify_nonrepetitive(G, res.assignment, args.lmax))
        report = {"_command": "apps.nonrep", "status": res.status,
                  "colors": args.colors, "lmax": args.lmax,
                  "events": len(inst.events), "steps": res.steps,
                  "verified": ok, "coloring": res.assignment}
        _emit(report, args, argv)
        return EXIT_OK
    if args.apps_cmd == "acyclic":
        G = _load_graph(args.graph)
        inst = apps.gen_acyclic(G, args.colors, args.cmax)
        res = solve(inst, args.seed)
        ok = (res.status == "stabilized"
              and apps.verify_acyclic(G, res.assignment, args.cmax))
        report = {"_command": "apps.acyclic", "status": res.status,
                  "colors": args.colors, "cmax": args.cmax,
                  "events": len(inst.events), "steps": res.steps,
                  "verified": ok, "coloring": res.assignment}
        _emit(report, args, argv)
        return EXIT_OK
    # goodcolor
    G = _load_graph(args.graph)
    try:
        res = apps.good_partial_coloring(G, args.eps, args.seed)
    except GraphError as exc:
        raise CliError(str(exc))
    report = {"_command": "apps.goodcolor", "status": res.status,
              "eps": args.eps, "colored": len(res.colored), "n": G.n,
              "proper": res.verified_proper, "good": res.verified_good,
              "steps": res.steps}
    if args.extend and res.status == "stabilized":
        total, new_colors = apps.greedy_extend(G, res.colored)
        report["extended"] = {
            "proper": apps.verify_proper(G, total),
            "max_new_color": max(new_colors.values(), default=-1),
            "colors_used": len(set(total)),
        }
    _emit(report, args, argv)
    return EXIT_OK


def _cmd_entropy(args, argv):
    from .entropy import (PlanRule, analytic_slack, counting_bound, decode,
                          empirical_entropy, encode, entropy_instance_params,
                          quasi_tile, Interval)
    from .entropy.estimate import sample_bernoulli, sample_iid
    from .rng import stream_unit

    if args.entropy_cmd == "tile":
        tiles = [Interval(0, L) for L in args.tiles]
        try:
            plan = quasi_tile(Interval(0, args.target), tiles, args.epsilon)
        except Exception as exc:
            raise CliError(str(exc))
        report = plan.to_dict()
        report["_command"] = "entropy.tile"
        _emit(report, args, argv)
        return EXIT_OK
    if args.entropy_cmd == "code":
        rule = PlanRule(tile_lengths=tuple(args.tiles), epsilon=args.epsilon,
                        s=args.s)
        if args.word is not None:
            word = [int(ch) for ch in args.word]
            if any(not (0 <= v < 2 ** args.s) for v in word):
                raise CliError("word symbols outside 2^s")
        else:
            word = [int(stream_unit(args.seed, 0, j) * 2 ** args.s)
                    for j in range(args.m)]
        if len(word) != args.m:
            raise CliError(f"word length {len(word)} != m = {args.m}")
        try:
            blob = encode(args.m, word, rule)
        except Exception as exc:
            raise CliError(str(exc))
        m2, w2 = decode(blob.bits, rule)
        report = {"_command": "entropy.code", "m": args.m,
                  "bits": "".join(map(str, blob.bits)),
                  "length": len(blob.bits), "layout": blob.layout,
                  "bits_per_symbol": len(blob.bits) / args.m,
                  "slack": analytic_slack(args.m, rule),
                  "roundtrip_exact": (m2, list(w2)) == (args.m, word)}
        _emit(report, args, argv)
        return EXIT_OK
    if args.entropy_cmd == "estimate":
        if args.process == "iid":
            samples = sample_iid(args.samples, args.window, args.seed)
        elif args.process.startswith("bernoulli:"):
            p = float(args.process.split(":", 1)[1])
            samples = sample_bernoulli(p, args.samples, args.window, args.seed)
        else:
            raise CliError(f"unknown process {args.process!r}")
        est = empirical_entropy(samples)
        report = est.to_dict()
        report["_command"] = "entropy.estimate"
        report["process"] = args.process
        _emit(report, args, argv)
        return EXIT_OK
    if args.entropy_cmd == "counting":
        try:
            rep = counting_bound(args.decompressor, args.n, args.c)
        except (KeyError, ValueError) as exc:
            raise CliError(str(exc))
        report = rep.to_dict()
        report["_command"] = "entropy.counting"
        _emit(report, args, argv)
        return EXIT_OK
    # params
    try:
        rep = entropy_instance_params(args.epsilon, args.d, args.delta,
                                      verify_n=args.verify_n)
    except ValueError as exc:
        raise CliError(str(exc))
    report = rep.to_dict()
    report["_command"] = "entropy.params"
    _emit(report, args, argv)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lllab",
                                description="Local-lemma workbench")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="certify an instance")
    c.add_argument("--instance", required=True)
    c.add_argument("--mode", choices=["slll", "glll", "eps"], required=True)
    c.add_argument("--omega", default="auto",
                   help="'auto' or a JSON file {event_id: weight}")
    c.add_argument("--epsilon", type=float)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_check)

    s = sub.add_parser("solve", help="run the resampler to stabilization")
    s.add_argument("--instance", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--table", help="replay an explicit table JSON instead "
                                   "of drawing from a seed")
    s.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    s.add_argument("--rule", choices=["lex", "random"], default="lex")
    s.add_argument("--rule-seed", type=int, default=0)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--plot", help="write a resamples-histogram CSV here")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_solve)

    w = sub.add_parser("witness", help="piles, tracebacks, bounds")
    wsub = w.add_subparsers(dest="witness_cmd", required=True)
    wv = wsub.add_parser("validate")
    wv.add_argument("--pile", required=True)
    wv.add_argument("--instance", required=True)
    wv.add_argument("--table-seed", type=int)
    wv.add_argument("--out")
    wt = wsub.add_parser("traceback")
    wt.add_argument("--instance", required=True)
    wt.add_argument("--seed", type=int, required=True)
    wt.add_argument("--domain", type=int, required=True)
    wt.add_argument("--step", type=int)
    wt.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    wt.add_argument("--out")
    wb = wsub.add_parser("bound")
    wb.add_argument("--instance", required=True)
    wb.add_argument("--domain", type=int, required=True)
    wb.add_argument("--tables", type=int, required=True)
    wb.add_argument("--omega", default="auto")
    wb.add_argument("--max-height", type=int, default=3)
    wb.add_argument("--base-seed", type=int, default=0)
    wb.add_argument("--out")
    w.set_defaults(fn=_cmd_witness)

    a = sub.add_parser("approx", help="truncated shared-table demo")
    a.add_argument("--instance", required=True)
    a.add_argument("--epsilon", type=float, required=True)
    a.add_argument("--seeds", type=int, default=50)
    a.add_argument("--N", default="auto")
    a.add_argument("--seed", type=int, default=0, help="base table seed")
    a.add_argument("--plot", help="write a defect-vs-N CSV series here")
    a.add_argument("--out")
    a.set_defaults(fn=_cmd_approx)

    ap = sub.add_parser("apps", help="coloring applications")
    asub = ap.add_subparsers(dest="apps_cmd", required=True)
    ah = asub.add_parser("hypergraph")
    ah.add_argument("--k", type=int, required=True)
    ah.add_argument("--n", type=int, required=True)
    ah.add_argument("--topology", choices=["cyclic", "random-linear"],
                    default="cyclic")
    ah.add_argument("--d", type=int)
    ah.add_argument("--m", type=int)
    ah.add_argument("--seed", type=int, default=0)
    ah.add_argument("--solve", action="store_true")
    ah.add_argument("--save", help="write the generated instance JSON")
    ah.add_argument("--out")
    al = asub.add_parser("listcolor")
    al.add_argument("--graph", required=True)
    al.add_argument("--lists", required=True)
    al.add_argument("--k", type=int, required=True)
    al.add_argument("--seed", type=int, default=0)
    al.add_argument("--out")
    an = asub.add_parser("nonrep")
    an.add_argument("--graph", required=True)
    an.add_argument("--colors", type=int, required=True)
    an.add_argument("--lmax", type=int, default=8)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--out")
    ac = asub.add_parser("acyclic")
    ac.add_argument("--graph", required=True)
    ac.add_argument("--colors", type=int, required=True)
    ac.add_argument("--cmax", type=int, default=8)
    ac.add_argument("--seed", type=int, default=0)
    ac.add_argument("--out")
    ag = asub.add_parser("goodcolor")
    ag.add_argument("--graph", required=True)
    ag.add_argument("--eps", type=float, default=0.05)
    ag.add_argument("--seed", type=int, default=0)
    ag.add_argument("--extend", action="store_true")
    ag.add_argument("--out")
    ap.set_defaults(fn=_cmd_apps)

    e = sub.add_parser("entropy", help="tilings, codes, estimates")
    esub = e.add_subparsers(dest="entropy_cmd", required=True)
    et = esub.add_parser("tile")
    et.add_argument("--target", type=int, required=True)
    et.add_argument("--tiles", type=lambda v: [int(x) for x in v.split(",")],
                    required=True)
    et.add_argument("--epsilon", type=float, required=True)
    et.add_argument("--out")
    ec = esub.add_parser("code")
    ec.add_argument("--m", type=int, required=True)
    ec.add_argument("--tiles", type=lambda v: [int(x) for x in v.split(",")],
                    required=True)
    ec.add_argument("--epsilon", type=float, default=0.1)
    ec.add_argument("--s", type=int, default=1)
    ec.add_argument("--word", help="explicit symbol string, e.g. 0110")
    ec.add_argument("--seed", type=int, default=0)
    ec.add_argument("--out")
    ee = esub.add_parser("estimate")
    ee.add_argument("--process", required=True, help="iid or bernoulli:p")
    ee.add_argument("--window", type=int, required=True)
    ee.add_argument("--samples", type=int, required=True)
    ee.add_argument("--seed", type=int, default=0)
    ee.add_argument("--out")
    en = esub.add_parser("counting")
    en.add_argument("--decompressor", required=True)
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--c", type=int, required=True)
    en.add_argument("--out")
    ep = esub.add_parser("params")
    ep.add_argument("--epsilon", type=float, required=True)
    ep.add_argument("--d", type=int, required=True)
    ep.add_argument("--delta", type=float, required=True)
    ep.add_argument("--verify-n", type=int, default=30)
    ep.add_argument("--out")
    e.set_defaults(fn=_cmd_entropy)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
