"""Command-line entry point: ``gausstv {compute,disprod,oracle}``.

Exit status is 0 on success, 2 for invalid input (including unreadable or
malformed JSON) and 3 when the numerics cannot meet the requested accuracy.
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .disprod import disprod_tv_report
from .errors import InvalidInput, NumericalFailure
from .gaussian_model import GaussianParams
from .pipeline import mult_gaussian_tv

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class _InputError(Exception):
    pass


def _eps(text):
    try:
        val = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0.0 < val < 1.0:
        raise argparse.ArgumentTypeError(f"eps must lie in (0, 1), got {text}")
    return val


def _seed(text):
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def build_parser():
    parser = argparse.ArgumentParser(prog="gausstv", description="Relative-error TV distance between Gaussians.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eps_default="1/10"):
        p.add_argument("--input", required=True, help="JSON file, or - for standard input")
        p.add_argument("--eps", type=_eps, default=_eps(eps_default), help="relative error, decimal or p/q")
        p.add_argument("--format", choices=("json", "plain"), default="json")
        p.add_argument("--diagnostics", action="store_true", help="include solver diagnostics")

    common(sub.add_parser("compute", help="TV between two multivariate Gaussians"))
    common(sub.add_parser("disprod", help="TV between two discrete product distributions"))
    p = sub.add_parser("oracle", help="reference computations for checking results")
    common(p)
    p.add_argument("--method", choices=("quad1d", "grid", "mc", "erf"), required=True)
    p.add_argument("--seed", type=_seed, default=0, help="Monte Carlo seed")
    p.add_argument("--samples", type=int, default=100_000, help="Monte Carlo sample count")
    p.add_argument("--cells", type=int, default=64, help="grid cells per axis")
    return parser


def _load(path):
    try:
        if path == "-":
            text = sys.stdin.read()
            name = "<stdin>"
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
            name = path
    except OSError as exc:
        raise _InputError(f"{path}: cannot read input: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"{name}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise _InputError(f"input is missing the {key!r} field")
    return doc[key]


def _gaussians(doc):
    try:
        p1 = GaussianParams(_field(doc, "mu1"), _field(doc, "sigma1"))
        p2 = GaussianParams(_field(doc, "mu2"), _field(doc, "sigma2"))
    except (TypeError, ValueError) as exc:
        raise _InputError(f"bad Gaussian parameters: {exc}") from None
    return p1, p2


def _emit(out, fmt):
    if fmt == "json":
        print(json.dumps(out))
    else:
        for key, val in out.items():
            if isinstance(val, dict):
                for k, v in val.items():
                    print(f"{key}.{k}={v}")
            else:
                print(f"{key}={val}")


def _run(args):
    doc = _load(args.input)
    if args.command == "compute":
        p1, p2 = _gaussians(doc)
        res = mult_gaussian_tv(p1, p2, args.eps)
        return res.to_dict(diagnostics=args.diagnostics)
    if args.command == "disprod":
        pairs = _field(doc, "pairs")
        if not isinstance(pairs, list):
            raise _InputError("'pairs' must be a list")
        try:
            parsed = [(np.asarray(_field(x, "p"), dtype=float), np.asarray(_field(x, "q"), dtype=float)) for x in pairs]
        except (TypeError, ValueError) as exc:
            raise _InputError(f"bad distribution entries: {exc}") from None
        rep = disprod_tv_report(parsed, args.eps)
        out = {"tv_estimate": rep.estimate, "eps": args.eps}
        if args.diagnostics:
            out["diagnostics"] = {
                "coordinate_tv_max": rep.coordinate_tv_max,
                "gamma": rep.gamma,
                "small_delta": rep.small_delta,
                "m": rep.m,
                "max_atoms": rep.max_atoms,
                "renormalizations": rep.renormalizations,
            }
        return out
    return _oracle(args, doc)


def _oracle(args, doc):
    from . import oracle

    if args.method == "erf":
        xs = _field(doc, "x")
        vals = [oracle.erf_reference(v) for v in np.atleast_1d(np.asarray(xs, dtype=float))]
        return {"erf": vals if isinstance(xs, list) else vals[0]}
    p1, p2 = _gaussians(doc)
    if args.method == "quad1d":
        if p1.dim != 1:
            raise InvalidInput("quad1d needs 1-D Gaussians", stage="oracle")
        return {"tv_reference": oracle.quadrature_tv_1d(p1, p2)}
    if args.method == "grid":
        est = oracle.grid_tv_nd(p1, p2, cells_per_axis=args.cells)
        return {"tv_reference": est.value, "error_estimate": est.error}
    est, se = oracle.mc_tv_baseline(p1, p2, samples=args.samples, seed=args.seed)
    return {"tv_reference": est, "stderr": se, "seed": args.seed, "samples": args.samples}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        out = _run(args)
    except _InputError as exc:
        print(f"gausstv: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidInput as exc:
        print(f"gausstv: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"gausstv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(out, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
