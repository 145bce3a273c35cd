"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a checked property fails,
2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import dual as dualmod
from . import flatness, monotone, spaces, varfun
from .quasilin import BoundVector, check_cauchy_schwarz
from .rational import ValidationError, as_rational
from .repro import reproduce
from .report import CheckReport
from .sampling import random_ground
from .serialize import SCHEMA, ProblemError, jsonable, load_problem, pairset_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    try:
        return load_problem(data)
    except ProblemError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except (TypeError, IndexError, KeyError) as exc:
        raise UsageError(f"{path}: malformed entity ({exc})") from None


def _get(table: dict, name: str | None, kind: str, flag: str):
    if name is None:
        raise UsageError(f"missing {flag}")
    if name not in table:
        raise UsageError(f"unknown {kind} {name!r} (given by {flag})")
    return table[name]


def _point(prob, name, flag):
    return _get(prob.points, name, "point", flag)


def _dual(prob, name, flag):
    if name in (None, "0", "zero"):
        return dualmod.ZERO
    return _get(prob.duals, name, "dual", flag)


def _set(prob, name, flag):
    return _get({**prob.pair_sets, **prob.ground_sets}, name, "pair set", flag)


def _names(value: str | None, flag: str) -> list[str]:
    if not value:
        raise UsageError(f"missing {flag}")
    return [s.strip() for s in value.split(",") if s.strip()]


# --- subcommand bodies; each returns (reports, payload) -----------------------


def cmd_check_monotone(args, prob):
    M = _set(prob, args.set, "--set")
    return [monotone.is_monotone(prob.space, M)], None


def _set_result(args, prob, fn):
    M, G = _set(prob, args.set, "--set"), _set(prob, args.ground, "--ground")
    res = fn(prob.space, M, G)
    return [], {"provenance": {"operation": args.command, "set": args.set, "ground": args.ground}, "result": pairset_to_json(res)}


def cmd_polar(args, prob):
    return _set_result(args, prob, monotone.polar)


def cmd_closure(args, prob):
    return _set_result(args, prob, monotone.mu_closure)


def cmd_extend(args, prob):
    order = None if args.order is None else [int(i) for i in _names(args.order, "--order")]
    M, G = _set(prob, args.set, "--set"), _set(prob, args.ground, "--ground")
    res = monotone.extend_maximal(prob.space, M, G, order)
    rep = CheckReport("extension-maximal", monotone.is_maximal_in(prob.space, res, G), relation="==")
    return [rep], {"provenance": {"operation": "extend", "set": args.set, "ground": args.ground, "order": order},
                   "result": pairset_to_json(res)}


def cmd_enumerate(args, prob):
    M, G = _set(prob, args.set, "--set"), _set(prob, args.ground, "--ground")
    exts = monotone.enumerate_maximal_extensions(prob.space, M, G, args.limit)
    return [], {"provenance": {"operation": "enumerate-extensions", "set": args.set, "ground": args.ground},
                "count": len(exts), "result": [pairset_to_json(e) for e in exts]}


def cmd_check_flat(args, prob):
    if args.x:
        rep = flatness.check_flat_identity(
            prob.space, _point(prob, args.x, "--x"), _point(prob, args.y, "--y"),
            _point(prob, args.a, "--a"), _point(prob, args.b, "--b"), as_rational(args.lam),
        )
        return [rep], None
    return [flatness.test_flatness(prob.space, args.seed, args.samples, not args.no_inject)], None


def cmd_check_fl(args, prob):
    M = _set(prob, args.set, "--set")
    sample = _get(prob.samples, args.sample, "sample", "--sample")
    reps = [flatness.check_fl_property(prob.space, M, sample)]
    if sample.base2 is not None:
        reps.append(flatness.check_fl_base_independence(prob.space, M, sample.base, sample.base2, sample))
    return reps, None


def cmd_check_cn(args, prob):
    rep = spaces.check_cn(prob.space, _point(prob, args.x, "--x"), _point(prob, args.y, "--y"),
                          _point(prob, args.z, "--z"), as_rational(args.t))
    return [rep], None


def _vector(prob, spec, flag) -> BoundVector:
    names = _names(spec, flag)
    if len(names) != 2:
        raise UsageError(f"{flag} expects TAIL,HEAD")
    return BoundVector(_point(prob, names[0], flag), _point(prob, names[1], flag))


def cmd_check_cs(args, prob):
    return [check_cauchy_schwarz(prob.space, _vector(prob, args.v, "--v"), _vector(prob, args.w, "--w"))], None


def cmd_dual_norm(args, prob):
    phi = _dual(prob, args.dual, "--dual")
    wit = [_point(prob, n, "--witnesses") for n in _names(args.witnesses, "--witnesses")]
    payload = {"lower_bound": dualmod.norm_lower_bound(prob.space, phi, wit)}
    if len(phi.terms) == 1:
        tm = phi.terms[0]
        payload["single_term_norm"] = dualmod.norm_single(prob.space, tm.alpha, tm.t, tm.tail, tm.head)
    return [], payload


def cmd_dual_equiv(args, prob):
    phi, psi = _dual(prob, args.dual, "--dual"), _dual(prob, args.other, "--other")
    wit = [_point(prob, n, "--witnesses") for n in _names(args.witnesses, "--witnesses")]
    same = dualmod.equiv_on_witnesses(prob.space, phi, psi, wit)
    details = {}
    if isinstance(prob.space, spaces.Euclidean):
        details["reductions_equal"] = dualmod.reduce_euclidean(prob.space, phi) == dualmod.reduce_euclidean(prob.space, psi)
    return [CheckReport("dual-equivalence-on-witnesses", same, relation="==", details=details)], None


def _grid(prob, name):
    return _get(prob.grids, name, "grid", "--grid")


def cmd_ifun(args, prob):
    f = _get(prob.objectives, args.objective, "objective", "--objective")
    val, arg = varfun.I_f(prob.space, f, _point(prob, args.x, "--x"), _dual(prob, args.xdual, "--xdual"),
                          _dual(prob, args.ydual, "--ydual"), _grid(prob, args.grid))
    return [], {"value": val, "argmin": arg}


def cmd_mf_member(args, prob):
    f = _get(prob.objectives, args.objective, "objective", "--objective")
    pair = monotone.Pair(_point(prob, args.x, "--x"), _dual(prob, args.xdual, "--xdual"))
    m = varfun.mf_membership(prob.space, f, pair, _dual(prob, args.ydual, "--ydual"), _grid(prob, args.grid))
    rep = CheckReport("mf-membership", m is not varfun.Membership.CERTIFIED_OUT, relation=">=", details={"verdict": m})
    return [rep], {"verdict": m}


def cmd_prox(args, prob):
    f = _get(prob.objectives, args.objective, "objective", "--objective")
    res = varfun.prox_step(prob.space, f, _point(prob, args.y, "--y"), _dual(prob, args.ydual, "--ydual"),
                           _point(prob, args.base, "--base"), args.method, args.seed)
    return [res.certificate], {"minimizer": res.minimizer, "value": res.value, "exact_value": res.exact_value,
                               "method": res.method, "flags": list(res.flags)}


def _law_instances(args, prob):
    rng = random.Random(args.seed)
    if prob is not None:
        G = _set(prob, args.ground, "--ground")
        return [(prob.space, G, random.Random(rng.random())) for _ in range(args.instances)]
    out = []
    for i in range(args.instances):
        space = spaces.SpokeTree() if i % 2 == 0 else spaces.Euclidean(rng.randint(1, 3))
        out.append((space, random_ground(space, rng, rng.randint(1, 10)), random.Random(rng.random())))
    return out


def cmd_check_laws(args, prob):
    inst = _law_instances(args, prob)
    threads = max(1, int(os.environ.get("HADAMONO_THREADS", "1") or 1))

    def run(t):
        space, G, rng = t
        return monotone.polarity_law_reports(space, G, rng)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(run, inst))
    else:
        results = [run(t) for t in inst]
    merged: dict[str, CheckReport] = {}
    for reps in results:
        for r in reps:
            if r.name not in merged or (merged[r.name].passed and not r.passed):
                merged[r.name] = r
    return list(merged.values()), {"instances": len(inst)}


def cmd_repro(args, prob):
    return reproduce(), None


COMMANDS = {
    "check-monotone": (cmd_check_monotone, "test whether a pair set is monotone"),
    "polar": (cmd_polar, "monotone polar of a pair set relative to a ground set"),
    "closure": (cmd_closure, "mu-closure (double polar) relative to a ground set"),
    "extend": (cmd_extend, "greedy maximal monotone extension inside a ground set"),
    "enumerate-extensions": (cmd_enumerate, "all maximal monotone extensions inside a ground set"),
    "check-flat": (cmd_check_flat, "flat identity on one tuple, or a seeded flatness search"),
    "check-fl": (cmd_check_fl, "F_l-property of a pair set on a sample"),
    "check-cn": (cmd_check_cn, "CN-inequality on one quadruple"),
    "check-cs": (cmd_check_cs, "Cauchy-Schwarz for two bound vectors"),
    "dual-norm": (cmd_dual_norm, "dual norm lower bound on witnesses"),
    "dual-equiv": (cmd_dual_equiv, "agreement of two duals on witness bound vectors"),
    "ifun": (cmd_ifun, "grid value of the I_f functional"),
    "mf-member": (cmd_mf_member, "three-valued M^f membership"),
    "prox": (cmd_prox, "proximal step with strong-convexity certificate"),
    "check-laws": (cmd_check_laws, "polarity-law suite on random subsets of a ground set"),
    "repro-paper": (cmd_repro, "reproduce the worked spoke-tree examples exactly"),
}

NO_FILE = {"repro-paper"}
OPTIONAL_FILE = {"check-laws"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="hadamono", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, parents=[common])
        if name in OPTIONAL_FILE:
            sp.add_argument("problem", nargs="?")
        elif name not in NO_FILE:
            sp.add_argument("problem")
        if name in ("check-monotone", "polar", "closure", "extend", "enumerate-extensions", "check-fl"):
            sp.add_argument("--set")
        if name in ("polar", "closure", "extend", "enumerate-extensions", "check-laws"):
            sp.add_argument("--ground")
    p = sub.choices
    p["extend"].add_argument("--order", help="comma-separated permutation of ground-set indices")
    p["enumerate-extensions"].add_argument("--limit", type=int, default=monotone.DEFAULT_ENUM_LIMIT)
    for opt in ("--x", "--y", "--a", "--b"):
        p["check-flat"].add_argument(opt)
    p["check-flat"].add_argument("--lambda", dest="lam", default="1/2")
    p["check-flat"].add_argument("--samples", type=int, default=200)
    p["check-flat"].add_argument("--no-inject", action="store_true")
    p["check-fl"].add_argument("--sample")
    for opt in ("--x", "--y", "--z"):
        p["check-cn"].add_argument(opt)
    p["check-cn"].add_argument("--t", default="1/2")
    p["check-cs"].add_argument("--v", help="TAIL,HEAD point names")
    p["check-cs"].add_argument("--w", help="TAIL,HEAD point names")
    p["dual-norm"].add_argument("--dual")
    p["dual-norm"].add_argument("--witnesses")
    p["dual-equiv"].add_argument("--dual")
    p["dual-equiv"].add_argument("--other")
    p["dual-equiv"].add_argument("--witnesses")
    for name in ("ifun", "mf-member"):
        for opt in ("--objective", "--x", "--xdual", "--ydual", "--grid"):
            p[name].add_argument(opt)
    for opt in ("--objective", "--y", "--ydual", "--base"):
        p["prox"].add_argument(opt)
    p["prox"].add_argument("--method", choices=("auto", "closed-form", "grid+refine"), default="auto")
    p["check-laws"].add_argument("--instances", type=int, default=20)
    return parser


def _emit(args, reports, payload, out) -> None:
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed,
               "passed": all(r.passed for r in reports), "checks": [r.to_json() for r in reports]}
        if payload is not None:
            doc.update(jsonable(payload))
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return
    for r in reports:
        out.write(r.to_text() + "\n")
    if payload is not None:
        for k, v in jsonable(payload).items():
            out.write(f"{k}: {json.dumps(v, ensure_ascii=False)}\n")
    if reports:
        ok = all(r.passed for r in reports)
        out.write(("all checks passed" if ok else "CHECK FAILED") + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    fn = COMMANDS[args.command][0]
    try:
        path = getattr(args, "problem", None)
        prob = _load(path) if path else None
        if prob is None and args.command not in NO_FILE | OPTIONAL_FILE:
            raise UsageError("missing problem file")
        reports, payload = fn(args, prob)
    except (UsageError, ValidationError, monotone.ContractError, monotone.SizeLimitError, varfun.UnboundedError) as exc:
        err.write(f"hadamono {args.command}: error: {exc}\n")
        return EXIT_USAGE
    _emit(args, reports, payload, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
