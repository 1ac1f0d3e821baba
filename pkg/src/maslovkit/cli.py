"""Command line entry point: ``maslovkit compute | verify | generate``.

Exit codes: 0 ok, 2 invalid input, 3 numeric failure (or a failed verify run).
"""

import argparse
import os
import sys
import tempfile

import numpy as np

from .config import DEFAULT_TOL
from .errors import MaslovError, NumericError, UnknownKind, ValidationError
from .generators import half_turn, random_framed_family
from .paths import uniform_grid
from .scenario_io import (
    clutching_document,
    disk_document,
    dumps,
    evaluate,
    group_action_document,
    lagrangian_document,
    parse_document,
    planar_document,
    resolve_tolerances,
)
from .scenarios import (
    clutching_scenario,
    rotation_transport,
    scenario_from_loop,
    sphere_action,
    sphere_scenario,
)
from .verify import VerifyConfig, format_report, run_verify

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

GENERATE_KINDS = ("sphere", "clutching", "lagrangian", "group-action", "planar", "framed-loop")


def env_seed(default=None):
    raw = os.environ.get("MASLOVKIT_SEED")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValidationError("MASLOVKIT_SEED must be an integer", "MASLOVKIT_SEED") from None


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".maslovkit-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out):
    if not text.endswith("\n"):
        text += "\n"
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _add_tol_flags(p):
    for name in DEFAULT_TOL.as_dict():
        p.add_argument(f"--tol-{name}", type=float, default=None, metavar="X", dest=f"tol_{name}")


def _tol_overrides(args):
    out = {}
    for name in DEFAULT_TOL.as_dict():
        v = getattr(args, f"tol_{name}", None)
        if v is not None:
            if not v > 0:
                raise ValidationError("tolerance must be positive", f"--tol-{name}")
            out[name] = v
    return out


def _add_generate_params(p):
    p.add_argument("--n", type=int, default=1, help="complex dimension")
    p.add_argument("--k", type=int, nargs="+", default=[1],
                   help="winding (clutching) or boundary windings (planar)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--weights", type=int, nargs="+", default=None, help="circle action weights")
    p.add_argument("--coisotropic-dim", type=int, default=None, help="dimension of W (framed-loop)")
    p.add_argument("--regular", action="store_true", help="regular framed loop")
    p.add_argument("--seed", type=int, default=None, help="generator seed, also used for the lift")


def build_parser():
    parser = argparse.ArgumentParser(prog="maslovkit", description="Coisotropic Maslov index toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="evaluate scenario files")
    c.add_argument("files", nargs="*", help="scenario JSON files")
    c.add_argument("--generate", choices=GENERATE_KINDS, default=None, help="evaluate a built-in scenario")
    c.add_argument("--out", default=None, help="write records here instead of stdout")
    _add_generate_params(c)
    _add_tol_flags(c)

    v = sub.add_parser("verify", help="run the randomised property battery")
    v.add_argument("--dim", type=int, default=8, help="largest real dimension 2n")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--out", default=None)
    _add_tol_flags(v)

    g = sub.add_parser("generate", help="emit a scenario file")
    g.add_argument("kind")
    g.add_argument("--out", default=None)
    _add_generate_params(g)
    return parser


def generate_document(kind, n=1, k=(1,), samples=None, weights=None, coisotropic_dim=None, regular=False,
                      seed=None):
    """Scenario document for one of the built-in kinds."""
    if n < 1:
        raise ValidationError("n must be positive", "--n")
    if samples is not None and samples < 2:
        raise ValidationError("need at least 2 samples", "--samples")
    k = list(k)
    if kind == "sphere":
        doc = disk_document(sphere_scenario(n, samples or 128), "disk", f"sphere-n{n}")
    elif kind == "clutching":
        doc = clutching_document(clutching_scenario(k[0], n, samples or 64), f"clutching-k{k[0]}")
    elif kind == "lagrangian":
        # half-turn of the real line in the first complex coordinate
        grid = uniform_grid(samples or 64)
        base = np.eye(2 * n)[:, :n]
        bases = [half_turn(n, 0, t) @ base for t in grid]
        bases[-1] = base
        doc = lagrangian_document(grid, bases, 2 * n, "lagrangian-half-turn")
    elif kind == "group-action":
        w = weights if weights is not None else [1] * n
        doc = group_action_document(sphere_action(len(w), samples or 128, w), "group-action")
    elif kind == "planar":
        paths = [rotation_transport(kk, n, samples or 64) for kk in k]
        doc = planar_document(paths, "planar")
    elif kind == "framed-loop":
        cd = n + 1 if coisotropic_dim is None else coisotropic_dim
        if not n <= cd <= 2 * n:
            raise ValidationError("coisotropic dimension must lie in [n, 2n]", "--coisotropic-dim")
        fam = random_framed_family(0 if seed is None else seed, n, cd, regular=regular)
        loop = fam.loop(samples or 128)
        doc = disk_document(scenario_from_loop(loop), "framed-loop", "framed-loop")
    else:
        raise UnknownKind(f"unknown generator kind '{kind}'", "kind")
    if seed is not None:
        doc["options"] = {"seed": int(seed)}
    return doc


def _generate_from_args(kind, args):
    seed = args.seed if args.seed is not None else env_seed()
    return generate_document(kind, args.n, args.k, args.samples, args.weights, args.coisotropic_dim,
                             args.regular, seed)


def cmd_compute(args):
    overrides = _tol_overrides(args)
    docs = []
    if args.generate:
        docs.append(_generate_from_args(args.generate, args))
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read file: {exc.strerror}", path) from None
        docs.append(parse_document(text))
    if not docs:
        raise ValidationError("no scenario given", "files")
    records = []
    fallback = env_seed()
    for doc in docs:
        tol = resolve_tolerances(doc, overrides)
        records.append(evaluate(doc, tol, fallback).to_json())
    _emit("\n".join(records), args.out)
    return EXIT_OK


def cmd_verify(args):
    seed = args.seed if args.seed is not None else env_seed(0)
    if args.trials < 0:
        raise ValidationError("trials must be non-negative", "--trials")
    if args.dim < 2 or args.dim % 2:
        raise ValidationError("dim must be an even number >= 2", "--dim")
    tol = DEFAULT_TOL.updated(**_tol_overrides(args))
    report = run_verify(VerifyConfig(dim=args.dim, trials=args.trials, seed=seed, tol=tol))
    _emit(format_report(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


def cmd_generate(args):
    if args.kind not in GENERATE_KINDS:
        raise UnknownKind(f"unknown generator kind '{args.kind}'", "kind")
    _emit(dumps(_generate_from_args(args.kind, args)), args.out)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"compute": cmd_compute, "verify": cmd_verify, "generate": cmd_generate}[args.command]
    try:
        return handler(args)
    except ValidationError as exc:
        print(f"maslovkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"maslovkit: numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MaslovError as exc:  # pragma: no cover - every error belongs to one family
        print(f"maslovkit: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
