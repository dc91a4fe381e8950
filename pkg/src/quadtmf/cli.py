"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (error JSON on stderr), 2 on
a usage error such as a bad flag, unreadable file or malformed payload.
"""

import argparse
import json
import os
import random
import re
import sys
from importlib import resources

import jsonschema

from . import __version__, bilform, discform, invariants, jacobi, kirby, lattice, qseries, tmfcoeff, tmfmod
from .bilform import BilinearForm
from .errors import InputError, QuadTMFError
from .linalg import Matrix


class UsageError(Exception):
    pass


# input helpers

def _schema(name):
    text = resources.files("quadtmf").joinpath(f"data/schemas/{name}.v1.json").read_text()
    return json.loads(text)


def _validate(payload, name):
    try:
        jsonschema.validate(payload, _schema(name))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"{name} payload invalid at {path}: {exc.message}") from None
    return payload


def _load_json_text(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def _read_file(path, what):
    try:
        with open(path) as fh:
            return _load_json_text(fh.read(), what)
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from None


def _form_from(args, prefix=""):
    builtin = getattr(args, f"{prefix}builtin", None)
    path = getattr(args, f"{prefix}input", None)
    gram = getattr(args, f"{prefix}gram", None)
    given = [x for x in (builtin, path, gram) if x is not None]
    if len(given) != 1:
        raise UsageError(f"give exactly one of --{prefix}builtin, --{prefix}input, --{prefix}gram")
    if builtin is not None:
        return bilform.named_form(builtin)
    payload = _read_file(path, "form file") if path is not None else _load_json_text(gram, "--gram")
    return BilinearForm.from_json(_validate(payload, "form"))


def _form_arg(text):
    """A builtin name, a JSON Gram matrix, or a path to a form file."""
    if text in bilform.named_forms():
        return bilform.named_form(text)
    if text.lstrip().startswith("["):
        return BilinearForm.from_json(_validate(_load_json_text(text, "form"), "form"))
    return BilinearForm.from_json(_validate(_read_file(text, "form file"), "form"))


_MANIFOLDS = re.compile(r"^(S3|S2xS1|L(-?\d+)|Sigma(\d+)xS1)$")


def _presentation_from(args):
    given = [x for x in (args.builtin, args.link, args.gram) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --builtin, --link, --gram")
    P = invariants.ThreeManifoldPresentation
    if args.builtin is not None:
        m = _MANIFOLDS.match(args.builtin)
        if not m:
            raise UsageError("builtin manifolds: S3, S2xS1, L<n> (e.g. L-2), Sigma<g>xS1")
        if m.group(1) == "S3":
            return P.s3()
        if m.group(1) == "S2xS1":
            return P.s2xs1()
        if m.group(2) is not None:
            n = int(m.group(2))
            if n == 0:
                return P.s2xs1()
            return P.lens(n)
        return P.surface_times_circle(int(m.group(3)))
    if args.link is not None:
        payload = _validate(_read_file(args.link, "link file"), "link")
        return P.from_json(payload)
    payload = _validate(_load_json_text(args.gram, "--gram"), "form")
    return P.from_gram(BilinearForm.from_json(payload).gram)


def _bounded(kind, lo, hi):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {kind.__name__}, got {text!r}") from None
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"must lie in [{lo}, {hi}], got {v}")
        return v
    return parse


def _sign(text):
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError("sign must be + or -")


# commands

def cmd_form_analyze(args):
    b = _form_from(args)
    disc = discform.discriminant(b)
    module = tmfmod.from_bilinear(b)
    return {
        "form": b.to_json(),
        "rank": b.rank,
        "signature": b.signature.to_json(),
        "discriminant": disc.to_json(),
        "module": module.to_json(),
        "module_text": str(module),
    }


def cmd_form_compare(args):
    b = _form_from(args)
    c = _form_from(args, "other_")
    pm = discform.pm_equivalent(b, c)
    out = {"pm_equivalent": pm.to_json()}
    if max(b.rank, c.rank) <= 4:
        out["bruteforce"] = bilform.congruent_stably_bruteforce(b, c).to_json()
    return out


def cmd_form_list(args):
    return {name: f.to_json() for name, f in sorted(bilform.named_forms().items())}


def cmd_form_pullback(args):
    a = Matrix.from_json(_load_json_text(args.matrix, "--matrix"))
    b = _form_from(args)
    return {"gram": bilform.pullback(a, b).to_json()["gram"]}


def cmd_kirby_apply(args):
    payload = _validate(_read_file(args.input, "move file"), "moves")
    link = kirby.FramedLink.from_json(payload["link"])
    moves = [kirby.move_from_json(m) for m in payload["moves"]]
    after = kirby.apply_moves(link, moves)
    report = kirby.verify_boundary_invariance(link, moves)
    return {"result": after.to_json(), "report": report}


def cmd_kirby_random(args):
    reports = kirby.random_suite(args.sequences, args.max_length, args.seed)
    failures = [r for r in reports if not r["ok"]]
    return {"sequences": len(reports), "failures": len(failures), "seed": args.seed,
            "failed_reports": failures[:5], "ok": not failures}


def cmd_manifold_z3(args):
    m = _presentation_from(args)
    out = invariants.z3(m).to_json()
    if m.label:
        out["label"] = m.label
    return out


def cmd_manifold_reverse(args):
    m = _presentation_from(args)
    module, report = invariants.orientation_reverse(m)
    return {"module": module.to_json(), "report": report}


def cmd_manifold_z4(args):
    given = [x for x in (args.builtin, args.form, args.gram) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --builtin, --form, --gram")
    if args.builtin is not None:
        b = bilform.named_form(args.builtin)
    elif args.form is not None:
        b = BilinearForm.from_json(_validate(_read_file(args.form, "form file"), "form"))
    else:
        b = BilinearForm.from_json(_validate(_load_json_text(args.gram, "--gram"), "form"))
    return invariants.z4(b, sign=args.sign).to_json()


def _cobordism(args):
    payload = _validate(_read_file(args.data, "cobordism file"), "cobordism")
    return invariants.CobordismData.from_json(payload)


def cmd_cobordism_degree(args):
    c = _cobordism(args)
    return {"degree": invariants.cobordism_degree(c)}


def cmd_cobordism_linking(args):
    c = _cobordism(args)
    return invariants.cobordism_linking_check(c, args.samples, args.seed)


def cmd_theta_series(args):
    b = _form_from(args)
    s = qseries.theta_series(b, args.N, args.method)
    return dict(s.to_json(), backend=lattice.BACKEND)


def cmd_theta_edge_image(args):
    b = _form_from(args)
    s = qseries.edge_image(b, args.N, args.method)
    return dict(s.to_json(), integral=s.is_integral())


def cmd_jacobi_check(args):
    b = _form_arg(args.form)
    ev = jacobi.JacobiEvaluator(b, tol=args.tol, precision=args.precision)
    rng = random.Random(args.seed)
    g = jacobi.parse_element(args.element, b.rank)
    near_i = isinstance(g, jacobi.SL2) and g.c != 0
    pts = jacobi.sample_points(b.rank, args.samples, rng, near_i=near_i)
    rep = jacobi.check_transformation(ev, g, pts, args.tol)
    rep["residuals"] = [float(f"{r:.3e}") for r in rep["residuals"]]
    return rep


def cmd_jacobi_cocycle(args):
    b = _form_arg(args.form)
    ev = jacobi.JacobiEvaluator(b, tol=args.tol)
    rng = random.Random(args.seed)
    pairs = [(jacobi.random_sl2(rng), jacobi.random_sl2(rng)) for _ in range(args.pairs)]
    pts = jacobi.sample_points(b.rank, args.samples, rng)
    return jacobi.cocycle_composition_check(ev, pairs, pts, args.tol)


def cmd_jacobi_eval(args):
    b = _form_arg(args.form)
    ev = jacobi.JacobiEvaluator(b, tol=args.tol)
    try:
        tau = complex(args.tau.replace(" ", ""))
        z = [complex(x) for x in args.z.split(",")] if args.z else None
    except ValueError:
        raise UsageError("tau and z must be complex numbers like 0.1+1j") from None
    val, bound, X = ev.theta_eval(tau, z, with_bound=True)
    return {"value": [val.real, val.imag], "tail_bound": bound, "norm_cutoff": X}


def _table(args):
    return tmfcoeff.load_table(args.table) if args.table else tmfcoeff.default_table()


def cmd_tmf_validate(args):
    t = _table(args)
    return {"source": t.source, "valid": True, "generators": sorted(t.generators)}


def cmd_tmf_group(args):
    t = _table(args)
    return t.group_at(args.degree).to_json()


_TERM = re.compile(r"^\s*(?:(-?\d+)\s*\*?\s*)?([A-Za-z][\w^*]*|1)\s*$")


def _parse_element(t, text):
    m = _TERM.match(text)
    if not m:
        raise UsageError(f"cannot parse element {text!r}; use forms like eta, 12*nu, -nu")
    coeff = int(m.group(1)) if m.group(1) else 1
    if text.strip().startswith("-") and m.group(1) is None:
        coeff = -1
    name = m.group(2)
    base = t.one() if name == "1" else t.gen(name)
    return base * coeff


def cmd_tmf_mul(args):
    t = _table(args)
    x = _parse_element(t, args.left)
    y = _parse_element(t, args.right)
    return t.mul(x, y).to_json()


def cmd_tmf_composite(args):
    f = tmfmod.s2xs2_composite(args.sign, _table(args))
    return {"map": f.to_json(), "value": str(f.scalar()), "conditional": True}


# parser

def _add_form_source(p, prefix="", required_help="the form"):
    dash = prefix.replace("_", "-")
    p.add_argument(f"--{dash}builtin", dest=f"{prefix}builtin", metavar="NAME", help=f"builtin name for {required_help}")
    p.add_argument(f"--{dash}input", dest=f"{prefix}input", metavar="FILE", help="JSON form file")
    p.add_argument(f"--{dash}gram", dest=f"{prefix}gram", metavar="JSON", help="Gram matrix as JSON")


def _add_manifold_source(p):
    p.add_argument("--builtin", metavar="NAME", help="S3, S2xS1, L<n>, Sigma<g>xS1")
    p.add_argument("--link", metavar="FILE", help="JSON framed link file")
    p.add_argument("--gram", metavar="JSON", help="linking matrix as JSON")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="plain text output")
    common.add_argument("--table", metavar="PATH", help="pi_* table (default: $QUADTMF_TABLE or builtin)")
    common.set_defaults(fmt=None)

    parser = argparse.ArgumentParser(prog="quadtmf", parents=[common],
                                     description="Invariants of bilinear forms, framed links and 3-/4-manifolds.")
    parser.add_argument("--version", action="version", version=f"quadtmf {__version__}")
    sub = parser.add_subparsers(dest="group", required=True)

    def leaf(group_sub, name, func, help_):
        p = group_sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    g = sub.add_parser("form", help="bilinear forms").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "analyze", cmd_form_analyze, "signature, discriminant and module of a form")
    _add_form_source(p)
    p = leaf(g, "compare", cmd_form_compare, "equivalence up to <1> and <-1> summands")
    _add_form_source(p)
    _add_form_source(p, "other_", "the second form")
    leaf(g, "list", cmd_form_list, "builtin forms")
    p = leaf(g, "pullback", cmd_form_pullback, "A^T B A")
    p.add_argument("--matrix", required=True, metavar="JSON")
    _add_form_source(p)

    g = sub.add_parser("kirby", help="Kirby moves").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "apply", cmd_kirby_apply, "apply a move sequence and check invariance")
    p.add_argument("--input", required=True, metavar="FILE")
    p = leaf(g, "random", cmd_kirby_random, "randomized invariance suite")
    p.add_argument("--seed", type=_bounded(int, 0, 2 ** 32), default=0)
    p.add_argument("--sequences", type=_bounded(int, 1, 10000), default=100)
    p.add_argument("--max-length", type=_bounded(int, 1, 64), default=8)

    g = sub.add_parser("manifold", help="3- and 4-manifold invariants").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "z3", cmd_manifold_z3, "module of a 3-manifold")
    _add_manifold_source(p)
    p = leaf(g, "reverse", cmd_manifold_reverse, "orientation reversal, computed two ways")
    _add_manifold_source(p)
    p = leaf(g, "z4", cmd_manifold_z4, "value of a closed simply connected 4-manifold")
    p.add_argument("--builtin", metavar="NAME", help="builtin intersection form")
    p.add_argument("--form", metavar="FILE", help="JSON form file")
    p.add_argument("--gram", metavar="JSON", help="intersection form as JSON")
    p.add_argument("--sign", type=_sign, default=1, help="choice of the value of <1> as +nu or -nu")

    g = sub.add_parser("cobordism", help="2-handle cobordisms").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "degree", cmd_cobordism_degree, "degree of the cobordism map")
    p.add_argument("--data", required=True, metavar="FILE")
    p = leaf(g, "linking", cmd_cobordism_linking, "linking-form consistency through lifts")
    p.add_argument("--data", required=True, metavar="FILE")
    p.add_argument("--samples", type=_bounded(int, 1, 64), default=8)
    p.add_argument("--seed", type=_bounded(int, 0, 2 ** 32), default=0)

    g = sub.add_parser("theta", help="theta series").add_subparsers(dest="cmd", required=True)
    for name, func, help_ in (("series", cmd_theta_series, "theta series of an even positive definite form"),
                              ("edge-image", cmd_theta_edge_image, "Delta^(-d/8) Theta (conjectural)")):
        p = leaf(g, name, func, help_)
        _add_form_source(p)
        p.add_argument("-N", type=_bounded(int, 1, 200), default=10, help="truncation (default 10)")
        p.add_argument("--method", choices=("auto", "direct", "split"), default="auto")

    g = sub.add_parser("jacobi", help="numeric theta transformation checks").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "check", cmd_jacobi_check, "residual of a transformation law")
    p.add_argument("--form", required=True, help="builtin name, JSON Gram matrix or form file")
    p.add_argument("--element", default="T", help="S, T, I, a,b,c,d or shift:m1;m2")
    p.add_argument("--samples", type=_bounded(int, 1, 100), default=5)
    p.add_argument("--tol", type=_bounded(float, 1e-14, 1e-2), default=1e-8)
    p.add_argument("--seed", type=_bounded(int, 0, 2 ** 32), default=0)
    p.add_argument("--precision", type=_bounded(int, 53, 1000), default=53)
    p = leaf(g, "cocycle", cmd_jacobi_cocycle, "cocycle identity for random SL2 pairs")
    p.add_argument("--form", required=True)
    p.add_argument("--pairs", type=_bounded(int, 1, 1000), default=10)
    p.add_argument("--samples", type=_bounded(int, 1, 100), default=3)
    p.add_argument("--tol", type=_bounded(float, 1e-14, 1e-2), default=1e-8)
    p.add_argument("--seed", type=_bounded(int, 0, 2 ** 32), default=0)
    p = leaf(g, "eval", cmd_jacobi_eval, "evaluate theta(tau, z)")
    p.add_argument("--form", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--z", default=None, help="comma-separated complex entries")
    p.add_argument("--tol", type=_bounded(float, 1e-14, 1e-2), default=1e-8)

    g = sub.add_parser("tmf", help="pi_* TMF table").add_subparsers(dest="cmd", required=True)
    leaf(g, "validate", cmd_tmf_validate, "load and validate the table")
    p = leaf(g, "group", cmd_tmf_group, "presentation of pi_n")
    p.add_argument("degree", type=int)
    p = leaf(g, "mul", cmd_tmf_mul, "product of two elements")
    p.add_argument("left")
    p.add_argument("right")
    p = leaf(g, "composite", cmd_tmf_composite, "restriction after duality after transfer on L_(0)")
    p.add_argument("--sign", type=_sign, default=1)
    return parser


# output

def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat(x) for x in v)


def _scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def emit(result, fmt, stream):
    if fmt == "text":
        stream.write("\n".join(_text(result)) + "\n")
    else:
        stream.write(json.dumps(result, indent=2) + "\n")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.table:
        os.environ[tmfcoeff.TABLE_ENV] = args.table
    try:
        result = args.func(args)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"error": "UsageError", "message": str(exc)}) + "\n")
        return 2
    except QuadTMFError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return 1
    emit(result, args.fmt or "json", sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
