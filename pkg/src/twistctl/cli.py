"""Command-line front end: ingest coefficient data, detect extra-twists,
classify per-prime images, validate cocycles, run finite-field oracles,
and talk to the newform tables.

Every subcommand emits the same facts in two shapes: a human-readable text
rendering (default) and a schema-stable JSON document (--format json) whose
bytes depend only on the run configuration and the inputs.  Exit status is
0 on success, 1 when a domain error surfaces (the error name is printed),
and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import lmfdb
from .eigensystem import load_system, normalize, serialize
from .errors import InsufficientData, Ramified, TwistctlError
from .finitefield import split_order, unitary_order
from .forms import (
    DEFAULT_BUDGET,
    cocycle_from_json,
    finite_model,
    finite_model_context,
    image_report,
    projection_iso_check,
    report_to_json,
    trivial_cocycle,
    twisted_fixed_points,
    unitary_cocycle,
)
from .numberfield import frobenius_at
from .twists import detect, detection_to_json


@dataclass(frozen=True)
class RunConfig:
    """Shared plumbing for one invocation; subcommand-specific arguments
    stay on the parsed namespace."""
    subcommand: str
    input_path: str | None = None
    output_path: str | None = None
    bound: int = 100
    n_max: int | None = None
    primes: tuple = ()
    fmt: str = "text"
    cache_dir: str | None = None
    network: bool = False
    budget: int = DEFAULT_BUDGET
    seed: int = 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def _primes_between(lo: int, hi: int) -> list:
    sieve = bytearray([1]) * (hi + 1)
    out = []
    for p in range(2, hi + 1):
        if sieve[p]:
            if p >= lo:
                out.append(p)
            for k in range(p * p, hi + 1, p):
                sieve[k] = 0
    return out


def _parse_primes(spec: str) -> tuple:
    """Accept a range like 3..100 or an explicit comma list like 5,13,17."""
    try:
        if ".." in spec:
            lo_text, hi_text = spec.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            primes = _primes_between(lo, hi)
        else:
            primes = [int(tok) for tok in spec.split(",")]
            for p in primes:
                if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                    raise argparse.ArgumentTypeError(f"{p} is not prime")
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse prime range {spec!r}")
    if not primes:
        raise argparse.ArgumentTypeError(f"prime range {spec!r} is empty")
    return tuple(primes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistctl",
        description="extra-twist detection and twisted-form classification "
                    "for tabulated Frobenius data")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("--input", required=True,
                           help="input document (JSON)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("twists", help="detect extra-twists and fixed fields")
    add_common(p)
    p.add_argument("--bound", type=_positive_int, default=100)
    p.add_argument("--n-max", type=_positive_int, default=None,
                   help="largest character modulus to scan")

    p = sub.add_parser("classify", help="per-prime image verdicts")
    add_common(p)
    p.add_argument("--bound", type=_positive_int, default=100)
    p.add_argument("--n-max", type=_positive_int, default=None)
    p.add_argument("--primes", type=_parse_primes, required=True,
                   help="range like 3..100 or comma list like 5,13,17")

    p = sub.add_parser("report", help="full detection and classification "
                                      "report")
    add_common(p)
    p.add_argument("--bound", type=_positive_int, default=100)
    p.add_argument("--n-max", type=_positive_int, default=None)
    p.add_argument("--primes", type=_parse_primes, required=True)

    p = sub.add_parser("verify-cocycle", help="validate a cocycle document")
    add_common(p)

    p = sub.add_parser("oracle", help="finite-field fixed-point enumeration "
                                      "against closed-form orders")
    add_common(p, with_input=False)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--flip", action="store_true",
                   help="twist by the transpose-inverse outer automorphism")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--check-projection", action="store_true",
                   help="also verify the group-law-preserving bijection")

    p = sub.add_parser("normalize", help="rescale determinant data away")
    add_common(p)
    p.add_argument("--output", default=None,
                   help="write the normalized document here instead of "
                        "stdout")
    p.add_argument("--scalings", default=None,
                   help="JSON file mapping places to scaling coordinates")

    p = sub.add_parser("lmfdb", help="newform table client")
    lsub = p.add_subparsers(dest="lmfdb_action", required=True)
    for action in ("fetch", "compare"):
        lp = lsub.add_parser(action)
        lp.add_argument("--label", required=True)
        lp.add_argument("--cache-dir", default=None)
        lp.add_argument("--network", action="store_true",
                        help="allow live requests on a cache miss")
        lp.add_argument("--format", choices=("text", "json"), default="text")
        lp.add_argument("--seed", type=int, default=0)
        if action == "compare":
            lp.add_argument("--bound", type=_positive_int, default=500)
            lp.add_argument("--aut-images", default=None,
                            help="JSON list of coefficient-field "
                                 "automorphism images, e.g. [[0,1],[1,-1]]")
    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=ns.subcommand,
        input_path=getattr(ns, "input", None),
        output_path=getattr(ns, "output", None),
        bound=getattr(ns, "bound", 100),
        n_max=getattr(ns, "n_max", None),
        primes=getattr(ns, "primes", ()),
        fmt=getattr(ns, "format", "text"),
        cache_dir=getattr(ns, "cache_dir", None),
        network=getattr(ns, "network", False),
        budget=getattr(ns, "budget", DEFAULT_BUDGET),
        seed=getattr(ns, "seed", 0),
    )


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _load_input_system(cfg: RunConfig, ns):
    text = Path(cfg.input_path).read_text()
    sys_ = load_system(json.loads(text))
    normalized_on_load = False
    if not sys_.is_normalized and sys_.n == 3:
        # rank-3 detection runs on determinant-trivialized data only
        sys_ = normalize(sys_)
        normalized_on_load = True
    return sys_, normalized_on_load


def _partition_primes(sys_, primes):
    """Split requested primes into usable ones and exclusions with reasons;
    bad places and primes ramified in the coefficient field never reach the
    classifier."""
    usable, excluded = [], {}
    for p in primes:
        if p in sys_.bad_places:
            excluded[p] = "bad place of the input data"
            continue
        try:
            frobenius_at(sys_.field, p)
        except Ramified:
            excluded[p] = "ramified in the coefficient field"
            continue
        usable.append(p)
    return usable, excluded


def _print_doc(doc: dict, cfg: RunConfig, render, out) -> None:
    if cfg.fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
    else:
        for line in render(doc):
            print(line, file=out)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _render_twists(doc) -> list:
    lines = [f"twist group order {doc['group_order']} "
             f"(inner subgroup order {doc['inner_order']})"]
    for t in doc["twists"]:
        chi = t["character"]
        lines.append(f"  {t['kind']} twist at automorphism "
                     f"{t['aut_index']}: character modulus "
                     f"{chi['modulus']}")
    lines.append(f"fixed field degree {doc['fixed_field']['degree']}, "
                 f"min poly {doc['fixed_field']['min_poly']}")
    lines.append(f"inner fixed field degree "
                 f"{doc['inner_fixed_field']['degree']}, "
                 f"min poly {doc['inner_fixed_field']['min_poly']}")
    lines.append(f"verdict: {doc['verdict']['kind']}")
    cent = doc["coefficient_field_check"]
    lines.append("coefficient-field check: "
                 f"inner {'ok' if cent['inner_matches'] else 'FAILED'}, "
                 f"full {'ok' if cent['full_matches'] else 'FAILED'}"
                 + (" (bound may be too small)" if cent["b_insufficiency"]
                    else ""))
    if doc.get("normalized_on_load"):
        lines.append("input was normalized on load")
    return lines


def _cmd_twists(cfg: RunConfig, ns) -> int:
    sys_, renormed = _load_input_system(cfg, ns)
    result = detect(sys_, cfg.bound, n_max=cfg.n_max)
    doc = {"command": "twists", "input": cfg.input_path,
           "normalized_on_load": renormed}
    doc.update(detection_to_json(result))
    _print_doc(doc, cfg, _render_twists, _sys.stdout)
    return 0


def _render_classify(doc) -> list:
    lines = [f"predicted dimension {doc['predicted_dimension']} "
             f"(upper bound {doc['mt_upper_bound_dimension']})"]
    for p in sorted(doc["primes"], key=int):
        parts = [f"{v['group_label']} at a place of residue degree "
                 f"{v['residue_degree']}" for v in doc["primes"][p]]
        lines.append(f"p={p}: " + "; ".join(parts))
    if doc["excluded"]:
        lines.append("excluded primes:")
        for p in sorted(doc["excluded"], key=int):
            lines.append(f"  {p}: {doc['excluded'][p]}")
    return lines


def _cmd_classify(cfg: RunConfig, ns) -> int:
    sys_, renormed = _load_input_system(cfg, ns)
    result = detect(sys_, cfg.bound, n_max=cfg.n_max)
    usable, excluded = _partition_primes(sys_, cfg.primes)
    full = report_to_json(image_report(sys_, result, usable))
    doc = {"command": "classify", "input": cfg.input_path,
           "bound": cfg.bound, "normalized_on_load": renormed,
           "primes": full["primes"],
           "excluded": {str(p): reason for p, reason in excluded.items()},
           "predicted_dimension": full["predicted_dimension"],
           "mt_upper_bound_dimension": full["mt_upper_bound_dimension"]}
    _print_doc(doc, cfg, _render_classify, _sys.stdout)
    return 0


def _render_report(doc) -> list:
    lines = [f"twist group order {doc['group_order']} "
             f"(inner subgroup order {doc['inner_order']})",
             f"verdict: {doc['verdict']}",
             f"fixed field degree {doc['fixed_field']['degree']}, "
             f"min poly {doc['fixed_field']['min_poly']}",
             f"inner fixed field degree "
             f"{doc['inner_fixed_field']['degree']}, "
             f"min poly {doc['inner_fixed_field']['min_poly']}"]
    lines += _render_classify(doc)
    return lines


def _cmd_report(cfg: RunConfig, ns) -> int:
    sys_, renormed = _load_input_system(cfg, ns)
    result = detect(sys_, cfg.bound, n_max=cfg.n_max)
    usable, excluded = _partition_primes(sys_, cfg.primes)
    doc = {"command": "report", "input": cfg.input_path,
           "normalized_on_load": renormed,
           "excluded": {str(p): reason for p, reason in excluded.items()}}
    doc.update(report_to_json(image_report(sys_, result, usable)))
    _print_doc(doc, cfg, _render_report, _sys.stdout)
    return 0


def _cmd_verify_cocycle(cfg: RunConfig, ns) -> int:
    doc_in = json.loads(Path(cfg.input_path).read_text())
    cocycle = cocycle_from_json(doc_in)
    flips = sum(1 for _, flip in cocycle.assignments.values() if flip)
    doc = {"command": "verify-cocycle", "input": cfg.input_path,
           "valid": True,
           "kind": "finite-model" if cocycle.context.model else
                   "number-field",
           "group_order": len(cocycle.context.elements),
           "outer_assignments": flips}
    _print_doc(doc, cfg, lambda d: [
        f"cocycle over a group of order {d['group_order']} is valid "
        f"({d['kind']}, {d['outer_assignments']} flip assignments)"],
        _sys.stdout)
    return 0


def _render_oracle(doc) -> list:
    lines = [str(doc["fixed_points"])]
    if doc["closed_form"] is None:
        lines.append("no closed-form order for this shape")
    elif doc["matches"]:
        lines.append(f"matches {doc['closed_form']}")
    else:
        lines.append(f"differs from {doc['closed_form']} "
                     f"(expected {doc['expected']})")
    if doc.get("projection") is not None:
        proj = doc["projection"]
        lines.append("projection check "
                     + ("passed" if proj["passed"] else "FAILED")
                     + f" on {proj['source_order']} group elements")
    return lines


def _cmd_oracle(cfg: RunConfig, ns) -> int:
    model = finite_model(ns.q, ns.m, ns.n, cfg.budget)
    if ns.flip:
        cocycle = unitary_cocycle(model)
    else:
        cocycle = trivial_cocycle(finite_model_context(model), ns.n)
    count = twisted_fixed_points(model, cocycle)
    if ns.flip and ns.m == 2:
        expected, label = unitary_order(ns.q, ns.n), f"SU_{ns.n}({ns.q})"
    elif not ns.flip:
        expected, label = split_order(ns.q, ns.n), f"SL_{ns.n}(F_{ns.q})"
    else:
        expected, label = None, None
    doc = {"command": "oracle", "q": ns.q, "m": ns.m, "n": ns.n,
           "flip": ns.flip, "fixed_points": count,
           "closed_form": label, "expected": expected,
           "matches": None if expected is None else count == expected}
    if ns.check_projection:
        proj = projection_iso_check(model, cocycle, seed=cfg.seed)
        doc["projection"] = {
            "source_order": proj.source_order,
            "tuple_order": proj.tuple_order,
            "passed": proj.passed,
        }
    else:
        doc["projection"] = None
    _print_doc(doc, cfg, _render_oracle, _sys.stdout)
    return 0 if doc["matches"] in (True, None) else 1


def _cmd_normalize(cfg: RunConfig, ns) -> int:
    sys_ = load_system(json.loads(Path(cfg.input_path).read_text()))
    scalings = None
    if ns.scalings:
        raw = json.loads(Path(ns.scalings).read_text())
        scalings = {key: sys_.field.element([Fraction(c) for c in coords])
                    for key, coords in raw.items()}
    doc = serialize(normalize(sys_, scalings))
    payload = json.dumps(doc, indent=2, sort_keys=True)
    if cfg.output_path:
        Path(cfg.output_path).write_text(payload + "\n")
        print(f"wrote {cfg.output_path}")
    else:
        print(payload)
    return 0


def _cmd_lmfdb(cfg: RunConfig, ns) -> int:
    record = lmfdb.fetch_newform(ns.label, cache_dir=cfg.cache_dir,
                                 allow_network=cfg.network or None)
    if ns.lmfdb_action == "fetch":
        doc = {"command": "lmfdb fetch", "label": record.label,
               "level": record.level, "weight": record.weight,
               "field_degree": record.hecke_field_poly.degree,
               "stored_coefficients": len(record.an_exact),
               "recorded_inner_twists": [
                   {"character": lab, "order": order, "proved": proved}
                   for lab, order, proved in record.recorded_inner_twists]}
        _print_doc(doc, cfg, lambda d: [
            f"{d['label']}: level {d['level']}, weight {d['weight']}, "
            f"Hecke field degree {d['field_degree']}, "
            f"{d['stored_coefficients']} stored coefficients, "
            f"{len(d['recorded_inner_twists'])} recorded inner twists"],
            _sys.stdout)
        return 0

    aut_images = json.loads(ns.aut_images) if ns.aut_images else None
    sys_ = lmfdb.to_eigensystem(record, aut_images=aut_images,
                                bound=cfg.bound)
    try:
        result = detect(sys_, cfg.bound)
    except InsufficientData:
        result = None
    cmp = lmfdb.compare_inner_twists(result, record, cfg.bound)
    doc = {"command": "lmfdb compare"}
    doc.update(lmfdb.comparison_to_json(cmp))
    _print_doc(doc, cfg, lambda d: [
        f"{d['label']} at bound {d['bound']}: {d['verdict']}",
        f"  detected: {d['detected']}",
        f"  recorded: {d['recorded']}"], _sys.stdout)
    return 0


_HANDLERS = {
    "twists": _cmd_twists,
    "classify": _cmd_classify,
    "report": _cmd_report,
    "verify-cocycle": _cmd_verify_cocycle,
    "oracle": _cmd_oracle,
    "normalize": _cmd_normalize,
    "lmfdb": _cmd_lmfdb,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    cfg = _config_from(ns)
    try:
        return _HANDLERS[cfg.subcommand](cfg, ns)
    except TwistctlError as exc:
        print(f"error[{exc.name}]: {exc}", file=_sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=_sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(run(_sys.argv[1:]))


if __name__ == "__main__":
    main()
