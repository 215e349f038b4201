"""Command-line driver: run the requests of an instance file and report.

Usage:
    multimult run <file> [--json out.json] [--no-cache] [--window-cap N]
                         [--band-cap N] [--jobs K]

Exit codes: 0 when no verified claim produced a MISMATCH verdict, 1 when any
did, and 2 on usage or parse errors.  The cache directory is taken from the
MULTIMULT_CACHE_DIR environment variable (default ~/.cache/multimult).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import hilbert as hilbert_mod
from . import koszul as koszul_mod
from .hilbert import MixedType, MultiDegree, interpolate, mixed_multiplicity, table_on_window
from .instances import InstanceFile, InstanceParseError, parse_instance
from .koszul import ReesDatum, euler_char_direct, euler_char_via_difference
from .multiplicity import (
    NotMultiplicitySystemError,
    mult_symbol,
    verify_base_type,
    verify_cor_filter_regular,
    verify_cor_height,
    verify_cor_sop,
    verify_cor_transition,
    verify_rees_mprimary,
    verify_theorem_recursion,
)
from .reductions import (
    J_SOURCE,
    PoolPolicy,
    is_filter_regular,
    is_rees_superficial,
    search_joint_reduction,
    verify_joint_reduction,
)
from .instances import parse_monomial
from .reports import (
    SCHEMA_VERSION,
    cache_tables,
    certificate_payload,
    fraction_str,
    load_tables,
    poly_payload,
    report_payload,
    table_key,
)


def _request_type(inst: InstanceFile, req: dict) -> MixedType:
    obj = req.get("type")
    if not isinstance(obj, dict):
        raise InstanceParseError("request needs a 'type'", "requests")
    return MixedType(int(obj["k0"]), tuple(int(x) for x in obj["k"]))


def _window_table(fam, which, base, extent, use_cache):
    if use_cache:
        key = table_key(fam, which, base, extent)
        cached = load_tables(key)
        if cached is not None:
            return cached, True
    table = table_on_window(fam, which, base, extent)
    if use_cache:
        cache_tables(key, table)
    return table, False


def _default_recursion_axis(cand) -> int | None:
    for idx, ki in enumerate(cand.declared_type.k):
        if ki > 0:
            return idx
    return None


def run_request(inst: InstanceFile, req: dict, use_cache: bool = True) -> dict:
    """Execute one request and return its deterministic result payload."""
    fam = inst.family
    command = req["command"]
    out = {"request": req}

    if command == "hilbert":
        which = req.get("which", "P")
        fit = interpolate(fam, which)
        table, hit = _window_table(fam, which, fit.base, fit.extent, use_cache)
        out["polynomial"] = poly_payload(fit.poly)
        out["table"] = {
            "base": list(table.base),
            "values": table.values.tolist(),
            "cache_hit": hit,
        }
        out["provenance"] = fit.provenance()
    elif command == "mixed":
        mt = _request_type(inst, req)
        value, defined = mixed_multiplicity(fam, mt)
        fit = interpolate(fam, "P")
        out["value"] = fraction_str(value)
        out["defined"] = defined
        out["provenance"] = fit.provenance()
    elif command == "verify-jr":
        cand = inst.candidate(req["candidate"])
        out["certificate"] = certificate_payload(verify_joint_reduction(fam, cand))
    elif command == "element-props":
        mono = parse_monomial(req["monomial"], list(inst.variables), fam.ctx, "request")
        idx = inst.ideal_index(req["ideal"])
        superficial = is_rees_superficial(fam, mono, idx)
        filter_reg = is_filter_regular(fam, mono)
        out["filter_regular"] = filter_reg
        out["rees_superficial"] = certificate_payload(superficial)
        out["weak_fc"] = filter_reg and superficial.holds
    elif command == "mult-symbol":
        cand = inst.candidate(req["candidate"])
        try:
            out["value"] = mult_symbol(fam.module, list(cand.monomials()))
        except NotMultiplicitySystemError as exc:
            out["error"] = str(exc)
    elif command == "chi":
        cand = inst.candidate(req["candidate"])
        datum = ReesDatum(fam, cand)
        diff = euler_char_via_difference(datum)
        out["difference"] = {"value": diff.value, "provenance": diff.provenance}
        if req.get("direct", False):
            base = interpolate(fam, "P").base
            direct = euler_char_direct(datum, MultiDegree(base, (base,) * fam.d))
            out["direct"] = {
                "value": direct.value,
                "provenance": direct.provenance,
                "band_certified": direct.certified,
            }
            out["methods_agree"] = (not direct.certified) or direct.value == diff.value
    elif command == "verify-theorem":
        cand = inst.candidate(req["candidate"])
        idx = inst.ideal_index(req["ideal"]) if "ideal" in req else _default_recursion_axis(cand)
        if idx is None:
            raise InstanceParseError("candidate type has no positive k_i", "requests")
        out["report"] = report_payload(verify_theorem_recursion(fam, cand, idx))
    elif command == "verify-corollaries":
        cand = inst.candidate(req["candidate"])
        idx = inst.ideal_index(req["ideal"]) if "ideal" in req else _default_recursion_axis(cand)
        reports = []
        if idx is not None:
            reports.append(verify_cor_filter_regular(fam, cand, idx))
        reports.append(verify_cor_transition(fam, cand))
        reports.append(verify_cor_sop(fam, cand))
        reports.append(verify_cor_height(fam, cand))
        if all(i.is_primary_to_max_ideal() for i in fam.ideals):
            reports.append(verify_rees_mprimary(fam, cand))
        if sum(cand.declared_type.k) == 0:
            reports.append(verify_base_type(fam, cand))
        out["reports"] = [report_payload(r) for r in reports]
    elif command == "search-jr":
        mt = _request_type(inst, req)
        policy = PoolPolicy(
            max_degree=int(req.get("max_degree", 2)), budget=int(req.get("budget", 2000))
        )
        cand = search_joint_reduction(fam, mt, policy)
        if cand is None:
            out["found"] = None
        else:
            out["found"] = [
                {
                    "monomial": str(u),
                    "source": "J" if s == J_SOURCE else inst.ideal_names[s],
                }
                for u, s in cand.elements
            ]
    else:
        raise InstanceParseError(f"unknown command {command!r}", "requests")
    return out


def _count_mismatches(payload) -> int:
    if isinstance(payload, dict):
        total = sum(_count_mismatches(v) for v in payload.values())
        if payload.get("verdict") == "MISMATCH":
            total += 1
        return total
    if isinstance(payload, list):
        return sum(_count_mismatches(v) for v in payload)
    return 0


def run_instance(inst: InstanceFile, use_cache: bool = True, jobs: int = 1) -> dict:
    """Run every request, in order, and assemble the report document."""
    started = time.monotonic()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(lambda r: run_request(inst, r, use_cache), inst.requests)
            )
    else:
        results = [run_request(inst, req, use_cache) for req in inst.requests]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "instance": inst.raw,
        "results": results,
        "mismatch_count": _count_mismatches(results),
        "timing_seconds": round(time.monotonic() - started, 3),
    }
    return doc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="multimult", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand")
    runp = sub.add_parser("run", help="run the requests of an instance file")
    runp.add_argument("file")
    runp.add_argument("--json", dest="json_out", metavar="OUT")
    runp.add_argument("--no-cache", action="store_true")
    runp.add_argument("--window-cap", type=int, metavar="N")
    runp.add_argument("--band-cap", type=int, metavar="N")
    runp.add_argument("--jobs", type=int, default=1, metavar="K")
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 2
    if args.subcommand != "run":
        parser.print_usage(sys.stderr)
        return 2
    if args.window_cap is not None:
        hilbert_mod.WINDOW_CAP_FACTOR = args.window_cap
    if args.band_cap is not None:
        koszul_mod.BAND_DOUBLINGS = args.band_cap
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        inst = parse_instance(text, name=args.file)
        doc = run_instance(inst, use_cache=not args.no_cache, jobs=max(1, args.jobs))
    except InstanceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = json.dumps(doc, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(rendered + "\n")
    print(rendered)
    return 1 if doc["mismatch_count"] else 0


if __name__ == "__main__":
    sys.exit(main())
