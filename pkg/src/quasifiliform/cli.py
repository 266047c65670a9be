"""Command-line front end.

Exit status: 0 success, 1 the mathematics said no (Jacobi defect, incomplete
completion, failed bound), 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from .catalog import (
    FAMILIES,
    FamilySpec,
    SpecError,
    build_family,
    completability_report,
    completion,
    parse_spec,
)
from .cohomology import cohomology_dim, cohomology_report
from .deform import h2_bound_check
from .derivations import derivation_space, diagonal_rank, inner_derivations, is_complete
from .exactlin import format_scalar
from .liecore import (
    AlgebraError,
    LieAlgebra,
    center,
    jacobi_defect,
    lower_central_series,
    psequence,
    type_of,
)

OK, MATH_FAILURE, INPUT_ERROR = 0, 1, 2

VERBS = ("build", "invariants", "derivations", "cohomology", "complete", "completable", "h2bound", "batch")


class InputError(ValueError):
    pass


def _defects_json(defects):
    return [{"triple": [i, j, k], "vector": [format_scalar(x) for x in v]} for i, j, k, v in defects]


def load_input(source: str) -> tuple[LieAlgebra, FamilySpec | None]:
    """A family spec string or a path to a JSON algebra document."""
    if source.endswith(".json") or os.path.isfile(source):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"input: cannot read {source!r}: {exc.strerror}") from None
        g = LieAlgebra.from_json(text)
        if g.name is None:
            g.name = os.path.basename(source)
        return g, None
    spec = parse_spec(source)
    return build_family(spec), spec


# each verb returns (status, payload)

def _verb_build(g, spec, args):
    defects = jacobi_defect(g)
    payload = {"algebra": g.name, "jacobi": not defects, "defects": _defects_json(defects),
               "document": g.to_dict()}
    return (MATH_FAILURE if defects else OK), payload


def _not_lie(g):
    return MATH_FAILURE, {"algebra": g.name, "jacobi": False,
                          "defects": _defects_json(jacobi_defect(g))}


def _verb_invariants(g, spec, args):
    if jacobi_defect(g):
        return _not_lie(g)
    _, m = lower_central_series(g)
    payload = {
        "algebra": g.name,
        "jacobi": True,
        "dim": g.dim,
        "nilindex": m,
        "type": type_of(g),
        "psequence": list(psequence(g)) if m is not None else None,
        "center_dim": center(g).dim,
        "diagonal_rank": diagonal_rank(g),
    }
    if spec is not None:
        info = FAMILIES[spec.family]
        payload["printed"] = {"type": info.type, "rank": info.rank}
    return OK, payload


def _matrix_rows(mat):
    return [[format_scalar(x) for x in row] for row in mat.to_dense()]


def _verb_derivations(g, spec, args):
    if jacobi_defect(g):
        return _not_lie(g)
    der, inner = derivation_space(g), inner_derivations(g)
    return OK, {"algebra": g.name, "der_dim": der.dim, "inner_dim": inner.dim,
                "outer_dim": der.dim - inner.dim,
                "basis": [_matrix_rows(d) for d in der.basis]}


def _target(g, spec, args):
    if getattr(args, "completed", False):
        if spec is None:
            raise InputError("--completed: needs a family spec, not a JSON algebra")
        return completion(spec)
    return g


def _verb_cohomology(g, spec, args):
    target = _target(g, spec, args)
    if jacobi_defect(target):
        return _not_lie(target)
    return OK, cohomology_report(target, label=target.name)


def _verb_complete(g, spec, args):
    target = completion(spec) if spec is not None else g
    if jacobi_defect(target):
        return _not_lie(target)
    verdict = is_complete(target)
    payload = {"algebra": target.name, "complete": verdict.complete,
               "center_dim": verdict.center_dim, "der_dim": verdict.der_dim,
               "ad_dim": verdict.ad_dim,
               "H0": cohomology_dim(target, 0), "H1": cohomology_dim(target, 1)}
    return (OK if verdict.complete else MATH_FAILURE), payload


def _verb_completable(g, spec, args):
    if spec is None:
        raise InputError("completable: needs a family spec")
    rep = completability_report(spec, with_h2=getattr(args, "h2", False))
    return (OK if rep.ok else MATH_FAILURE), rep.to_dict()


_PIPELINES: dict[str, Callable] = {
    "build": _verb_build,
    "invariants": _verb_invariants,
    "derivations": _verb_derivations,
    "cohomology": _verb_cohomology,
    "complete": _verb_complete,
    "completable": _verb_completable,
}


def _parse_h2_args(tokens):
    vals = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "k"):
            raise InputError(f"h2bound: expected n=<int> k=<int>, got {tok!r}")
        try:
            vals[key] = int(val)
        except ValueError:
            raise InputError(f"field {key!r}: expected an integer, got {val!r}") from None
    for key in ("n", "k"):
        if key not in vals:
            raise InputError(f"field {key!r} is required")
    return vals["n"], vals["k"]


def run_one(verb: str, source: str, args) -> tuple[int, dict]:
    """Run a single pipeline; input problems come back as status 2 with an error payload."""
    try:
        g, spec = load_input(source)
        if args.max_n is not None and g.dim > args.max_n:
            raise InputError(f"field 'n': {g.dim} exceeds --max-n {args.max_n}")
        return _PIPELINES[verb](g, spec, args)
    except (SpecError, AlgebraError, InputError) as exc:
        return INPUT_ERROR, {"input": source, "error": str(exc)}


def _batch_worker(job):
    verb, source, opts = job
    return run_one(verb, source, argparse.Namespace(**opts))


def _format_table(rows: list[dict]) -> str:
    keys: list[str] = [k for k in ("spec", "algebra", "input", "status") if any(k in r for r in rows)]
    for row in rows:
        for key in row:
            if key not in keys and not isinstance(row[key], (list, dict)):
                keys.append(key)
    width = {k: max(len(k), *(len(_cell(r.get(k))) for r in rows)) for k in keys}
    lines = ["  ".join(k.ljust(width[k]) for k in keys)]
    lines += ["  ".join(_cell(r.get(k)).ljust(width[k]) for k in keys) for r in rows]
    return "\n".join(lines)


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _flatten(payload: dict) -> dict:
    flat = {}
    for key, val in payload.items():
        if isinstance(val, dict) and all(not isinstance(x, (dict, list)) for x in val.values()):
            for sub, x in val.items():
                flat[f"{key}.{sub}" if key not in ("H", "dims", "ranks") else sub] = x
        else:
            flat[key] = val
    return flat


def _render_single(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=False)
    flat = _flatten(payload)
    width = max((len(k) for k in flat), default=0)
    out = []
    for key, val in flat.items():
        if isinstance(val, (list, dict)):
            val = json.dumps(val)
        out.append(f"{key.ljust(width)}  {_cell(val)}")
    return "\n".join(out)


def _common_options(defaults: bool) -> argparse.ArgumentParser:
    # accepted before or after the verb; subparsers must not reset the top-level values
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), **({"default": "json"} if defaults else kw))
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout",
                        **({"default": None} if defaults else kw))
    common.add_argument("--max-n", type=int, metavar="N", help="reject algebras of dimension above N",
                        **({"default": None} if defaults else kw))
    return common


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasifiliform", parents=[_common_options(True)],
                                description="Quasi-filiform Lie algebra catalog and invariants.")
    common = _common_options(False)
    sub = p.add_subparsers(dest="verb", required=True)
    for verb in ("build", "invariants", "derivations", "cohomology", "complete", "completable"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("input", help="family spec such as 'Lnr:n=6,r=3' or a JSON algebra file")
        if verb == "cohomology":
            sp.add_argument("--completed", action="store_true",
                            help="use the completion torus (+) n of a family spec")
        if verb == "completable":
            sp.add_argument("--h2", action="store_true", help="also report dim H^2 of the completion")
    sp = sub.add_parser("h2bound", parents=[common])
    sp.add_argument("params", nargs="+", help="n=<int> k=<int>")
    sp = sub.add_parser("batch", parents=[common])
    sp.add_argument("file", help="one family spec or JSON path per line; '#' starts a comment")
    sp.add_argument("--verb", dest="batch_verb", choices=tuple(_PIPELINES), default="completable")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK

    if args.verb == "h2bound":
        try:
            n, k = _parse_h2_args(args.params)
            if args.max_n is not None and n > args.max_n:
                raise InputError(f"field 'n': {n} exceeds --max-n {args.max_n}")
            row = h2_bound_check(n, k)
        except (SpecError, InputError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return INPUT_ERROR
        _emit(_render_single(row.to_dict(), args.format), args.out)
        return OK if row.holds else MATH_FAILURE

    if args.verb == "batch":
        return _run_batch(args)

    status, payload = run_one(args.verb, args.input, args)
    if status == INPUT_ERROR:
        print(f"error: {payload['error']}", file=sys.stderr)
        return status
    _emit(_render_single(payload, args.format), args.out)
    return status


def _run_batch(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
    except OSError as exc:
        print(f"error: input: cannot read {args.file!r}: {exc.strerror}", file=sys.stderr)
        return INPUT_ERROR
    sources = [ln for ln in lines if ln]
    opts = {"max_n": args.max_n, "completed": False, "h2": False}
    jobs = [(args.batch_verb, src, opts) for src in sources]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_worker, jobs))
    else:
        results = [_batch_worker(j) for j in jobs]
    statuses = [s for s, _ in results]
    records = [{"status": s, **p} for s, p in results]
    if args.format == "json":
        text = "\n".join(json.dumps(r) for r in records)
    else:
        keyed = sorted(zip(sources, records), key=lambda pair: pair[0])
        text = _format_table([_flatten(r) for _, r in keyed])
    _emit(text, args.out)
    if INPUT_ERROR in statuses:
        return INPUT_ERROR
    return MATH_FAILURE if MATH_FAILURE in statuses else OK


if __name__ == "__main__":
    sys.exit(main())
