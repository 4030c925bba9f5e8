"""Command-line interface.

Exit status: 0 when the decision is "yes" (or the command succeeded), 1 when
it is "no", 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import characterize as ch
from . import construct as co
from . import generators as gen
from . import io, linalg, losses
from .model import ModelError, StatModel, clean, e0_basis, null_samples, validate

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _rational_list(text):
    try:
        return [linalg.parse_rational(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text):
    try:
        return linalg.parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="umvue", description="Best unbiased estimators on finite statistical models.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, help_, statistic=False, json_flag=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--model", required=True, help="model JSON file")
        if statistic:
            sp.add_argument("--statistic", required=True, help="statistic JSON file")
        if json_flag:
            sp.add_argument("--json", action="store_true", help="emit a JSON report")
        return sp

    verb("validate", "check model invariants")
    verb("check-umvue", "UMVUE test by independence of level-set bases", statistic=True)
    verb("oracle", "UMVUE test by the product rule on unbiased estimators of zero", statistic=True)
    verb("sigma0", "finest partition whose block-constant statistics are UMVUEs")
    verb("complete", "completeness test", statistic=True)
    verb("sufficient", "sufficiency test", statistic=True)
    sp = verb("construct", "build the UMVUE of a target expectation function")
    sp.add_argument("--target", required=True, help="expectation function JSON file")
    sp.add_argument("--out", help="write the statistic file here")
    sp = verb("certificate", "eigen-certificate of a UMVUE", statistic=False)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--statistic", help="statistic JSON file")
    grp.add_argument("--verify", help="re-verify a saved certificate report")
    sp.add_argument("--out", help="write the certificate report here")
    sp = verb("rao-blackwell", "conditional expectation given a sufficient statistic", statistic=True)
    sp.add_argument("--sufficient", required=True, help="sufficient statistic JSON file")
    sp.add_argument("--out", help="write the resulting statistic file here")
    sp = verb("ubue", "risk comparison against competitors under a convex loss", statistic=True)
    sp.add_argument("--loss", default="square", choices=["square", "power4", "exponential"])
    sp.add_argument("--directions", type=int, default=100)
    sp.add_argument("--radius", type=_rational, default=linalg.parse_rational("1"))
    sp.add_argument("--seed", type=int, default=42)

    sp = sub.add_parser("gen", help="write an example model file")
    sp.add_argument("family", nargs="?", default="example1",
                    choices=["example1", "bernoulli", "beta-bernoulli"])
    sp.add_argument("--which", default="P1", choices=["P1", "P2"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--c", type=_rational, default=linalg.parse_rational("2"))
    sp.add_argument("--grid", type=_rational_list, help="theta grid, e.g. 1/4,1/2,3/4")
    sp.add_argument("--out", help="model file (default: stdout)")
    sp.add_argument("--statistic-out", help="also write the success-count statistic here")

    sp = sub.add_parser("selftest", help="randomized cross-checks of the characterizations")
    sp.add_argument("--models", type=int, default=200)
    sp.add_argument("--max-samples", type=int, default=6)
    sp.add_argument("--max-theta", type=int, default=4)
    sp.add_argument("--stats", type=int, default=5)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--counterexample-dir", default=".",
                    help="directory for counterexample model files")
    sp.add_argument("--json", action="store_true")
    return p


def _emit(args, report: dict, text: str):
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(text)


def _yes(d) -> int:
    return EXIT_YES if d else EXIT_NO


def _load(args) -> StatModel:
    return validate(io.load_model(args.model))


def _stat(args, m, path=None):
    return io.load_vector(path or args.statistic, m.arithmetic, m.n_samples)


def _labels(m, idx):
    return ", ".join(m.sample_labels[i] for i in idx)


def _decision_cmd(fn, title):
    def run(args):
        m = _load(args)
        d = fn(m, _stat(args, m))
        text = f"{title}: {'yes' if d else 'no'}"
        if d.witness:
            text += f"\nwitness samples: {_labels(m, d.witness)}"
        if d.detail:
            text += f"\n{d.detail}"
        _emit(args, d.to_json(m.sample_labels), text)
        return _yes(d)
    return run


def cmd_validate(args):
    m = _load(args)
    cm = clean(m)
    report = {
        "decision": "yes",
        "arithmetic": m.arithmetic.name,
        "theta0": list(cm.theta_labels),
        "null_samples": [m.sample_labels[x] for x in sorted(null_samples(m))],
        "e0_dimension": len(e0_basis(m)),
    }
    _emit(args, report, f"valid model: {m.n_theta} parameters, {m.n_samples} samples, "
                        f"rank {len(cm.theta0)}, E0 dimension {report['e0_dimension']}")
    return EXIT_YES


def cmd_sigma0(args):
    m = _load(args)
    part = ch.sigma0(m)
    text = "sigma0 blocks: " + " | ".join("{" + _labels(m, b) + "}" for b in part.blocks)
    _emit(args, part.to_json(m.sample_labels), text)
    return EXIT_YES


def cmd_construct(args):
    m = _load(args)
    b = io.load_vector(args.target, m.arithmetic, m.n_theta)
    res = co.construct_umvue(m, b)
    report = {"decision": "yes" if res.found else "no", "status": res.status}
    if res.found:
        report["statistic"] = io.vector_to_json(res.statistic)["values"]
        if args.out:
            Path(args.out).write_text(io.dumps(io.vector_to_json(res.statistic)))
    text = f"status: {res.status}"
    if res.found:
        text += "\nUMVUE: " + ", ".join(f"{lab}={linalg.format_scalar(v)}"
                                        for lab, v in zip(m.sample_labels, res.statistic))
    _emit(args, report, text)
    return EXIT_YES if res.found else EXIT_NO


def cmd_certificate(args):
    m = _load(args)
    if args.verify:
        doc = json.loads(Path(args.verify).read_text())
        cert = io.certificate_from_json(doc, m, args.verify)
        d = ch.verify_certificate(m, cert)
        _emit(args, d.to_json(m.sample_labels), f"certificate valid: {'yes' if d else 'no'}")
        return _yes(d)
    T = _stat(args, m)
    try:
        cert = ch.certificate(m, T)
    except ch.NotUMVUEError as exc:
        d = ch.is_umvue(m, T)
        report = d.to_json(m.sample_labels)
        report["detail"] = str(exc)
        _emit(args, report, f"{exc}\nwitness samples: {_labels(m, d.witness)}")
        return EXIT_NO
    report = io.certificate_to_json(cert, m)
    if args.out:
        Path(args.out).write_text(io.dumps(report))
    rows = "\n".join("  " + "  ".join(str(linalg.format_scalar(v)) for v in r) for r in cert.lambda_.rows)
    _emit(args, report, f"certificate over parameters {', '.join(report['theta0'])}:\n{rows}")
    return EXIT_YES


def cmd_rao_blackwell(args):
    m = _load(args)
    S = _stat(args, m)
    T = _stat(args, m, args.sufficient)
    ST = co.rao_blackwellize(m, S, T)
    doc = io.vector_to_json(ST)
    if args.out:
        Path(args.out).write_text(io.dumps(doc))
    report = {"decision": "yes", "statistic": doc["values"]}
    _emit(args, report, "E(S|T): " + ", ".join(f"{lab}={linalg.format_scalar(v)}"
                                               for lab, v in zip(m.sample_labels, ST)))
    return EXIT_YES


def cmd_ubue(args):
    m = _load(args)
    T = _stat(args, m)
    loss = losses.LossSpec(args.loss)
    rep = losses.check_ubue(m, T, loss, args.directions, args.radius, args.seed)
    report = rep.to_json()
    if loss.differentiable:
        report["derivative_implication"] = losses.check_derivative_implication(m, T, loss).to_json()
    text = (f"{args.loss}-loss best unbiased: {'yes' if rep else 'no'} "
            f"({len(rep.competitors)} competitors, margin {linalg.format_scalar(rep.margin) if rep.margin is not None else 'n/a'})")
    if rep.downgraded:
        text += "\nnote: evaluated in float arithmetic"
    _emit(args, report, text)
    return _yes(rep)


def cmd_gen(args):
    if args.family == "example1":
        m, T = gen.example1(args.which), None
    elif args.family == "bernoulli":
        grid = args.grid or [linalg.parse_rational(f"{k}/{args.n + 2}") for k in range(1, args.n + 2)]
        m, T = gen.bernoulli(gen.BernoulliSpec(args.n, tuple(grid)))
    else:
        grid = args.grid or [args.c * linalg.parse_rational(f"{2 * k - args.n}/{args.n + 2}")
                             for k in range(args.n + 1)]
        m, T = gen.beta_bernoulli(gen.BetaBernoulliSpec(args.n, args.c, tuple(grid)))
    text = io.dumps(io.model_to_json(m))
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    if args.statistic_out and T is not None:
        Path(args.statistic_out).write_text(io.dumps(io.vector_to_json(T)))
    return EXIT_YES


def cmd_selftest(args):
    from .selftest import run_selftest

    res = run_selftest(args.models, args.max_samples, args.max_theta, args.stats, args.seed,
                       counterexample_dir=args.counterexample_dir,
                       log=None if args.json else print)
    if args.json:
        print(json.dumps({"decision": "yes" if res.ok else "no", "suites": res.suites,
                          "failures": [f.to_json() for f in res.failures],
                          "seconds": res.seconds}, indent=2))
    else:
        print(f"{'all suites pass' if res.ok else 'DISAGREEMENTS FOUND'} in {res.seconds:.2f}s")
    return EXIT_YES if res.ok else EXIT_NO


COMMANDS = {
    "validate": cmd_validate,
    "check-umvue": _decision_cmd(ch.is_umvue, "UMVUE"),
    "oracle": _decision_cmd(ch.is_umvue_oracle, "UMVUE (product-rule oracle)"),
    "sigma0": cmd_sigma0,
    "complete": _decision_cmd(ch.is_complete, "complete"),
    "sufficient": _decision_cmd(ch.is_sufficient, "sufficient"),
    "construct": cmd_construct,
    "certificate": cmd_certificate,
    "rao-blackwell": cmd_rao_blackwell,
    "ubue": cmd_ubue,
    "gen": cmd_gen,
    "selftest": cmd_selftest,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        return COMMANDS[args.verb](args)
    except ModelError as exc:
        for v in exc.violations:
            print(f"invalid model: {v}", file=sys.stderr)
        return EXIT_ERROR
    except (io.InputError, co.NotSufficientError, co.PreconditionError, ValueError,
            json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
