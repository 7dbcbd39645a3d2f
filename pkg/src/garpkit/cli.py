"""Command line interface.

Subcommands: check-garp, ccei, afriat, verify, generate, oracle.  Every run
produces a report document (JSON or text) carrying the tool version, the
command and its parameters, a content fingerprint of the dataset, and the
results.  Exit codes: 0 success (and passing verdicts), 1 a revealed
preference violation verdict, 2 input or usage errors.

File inputs are decimal text, so the exact lane is the default; ``--float``
opts into float64 arithmetic with tolerant comparisons.  Exact rationals are
serialized as "numerator/denominator" strings and parse back losslessly.
Observation indices in reports are 1-based, matching the ``t`` column of CSV
inputs; the library itself is 0-based.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from typing import Any

from . import __version__
from .afriat import solve_afriat, worst_residual
from .ccei import ccei_binary_search, ccei_exact
from .datagen import GeneratorSpec, generate
from .duality import (
    VerificationReport,
    check_duality_garp,
    verify_cost_rationalization,
    verify_rationalization,
)
from .errors import AfriatInfeasibleError, GarpkitError, ParseError
from .model import Dataset, coerce_efficiency, validate_dataset
from .oracle import ccei_oracle, garp_oracle
from .revpref import CycleWitness, check_e_garp

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


# ---------------------------------------------------------------- input


def _detect_format(path: str, declared: str) -> str:
    if declared != "auto":
        return declared
    ext = os.path.splitext(path)[1].lower()
    if ext == ".csv":
        return "csv"
    if ext == ".json":
        return "json"
    raise ParseError(path, "cannot infer input format from extension; pass --input-format")


def parse_input(path: str, fmt: str = "auto", exact: bool = True) -> Dataset:
    """Read a dataset file (CSV or JSON) into a validated Dataset.

    CSV layout: header ``t,p1..pL,x1..xL``, one row per observation.  JSON
    layout: an object with "prices" and "bundles" arrays of rows.  On the
    exact lane, numeric text is parsed as exact decimals.
    """
    fmt = _detect_format(path, fmt)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            content = fh.read()
    except OSError as err:
        raise ParseError(path, str(err)) from err
    if fmt == "csv":
        prices, bundles = _parse_csv(path, content)
    else:
        prices, bundles = _parse_json(path, content)
    return validate_dataset(prices, bundles, exact=exact)


def _parse_csv(path: str, content: str):
    rows = list(csv.reader(io.StringIO(content)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError(path, "empty file")
    header = [cell.strip() for cell in rows[0]]
    if not header or header[0] != "t" or len(header) % 2 == 0:
        raise ParseError(path, "header must be t,p1..pL,x1..xL")
    width = (len(header) - 1) // 2
    expected = ["t"] + [f"p{i}" for i in range(1, width + 1)] + \
        [f"x{i}" for i in range(1, width + 1)]
    if header != expected:
        raise ParseError(path, f"header must be {','.join(expected)}")
    prices, bundles = [], []
    for r, row in enumerate(rows[1:], start=2):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(header):
            raise ParseError(path, f"expected {len(header)} cells", row=r)
        for c, cell in enumerate(cells):
            try:
                Fraction(cell)
            except (ValueError, ZeroDivisionError) as err:
                raise ParseError(path, f"not a number: {cell!r}", row=r,
                                 column=header[c]) from err
        prices.append(cells[1 : width + 1])
        bundles.append(cells[width + 1 :])
    return prices, bundles


def _parse_json(path: str, content: str):
    try:
        doc = json.loads(content, parse_float=Fraction, parse_int=Fraction)
    except json.JSONDecodeError as err:
        raise ParseError(path, f"invalid JSON: {err}") from err
    if not isinstance(doc, dict) or "prices" not in doc or "bundles" not in doc:
        raise ParseError(path, 'JSON input needs "prices" and "bundles" arrays')
    return doc["prices"], doc["bundles"]


def _efficiency_argument(text: str):
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as err:
        raise GarpkitError(f"bad efficiency value in {text!r}") from err
    return values[0] if len(values) == 1 else values


# ---------------------------------------------------------------- encoding


def encode_number(value) -> Any:
    """Fractions as "num/den" strings (lossless); floats as JSON numbers."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def decode_number(value):
    if isinstance(value, str):
        return Fraction(value)
    return value


def _encode_witness(w: CycleWitness | None):
    if w is None:
        return None
    return {
        "cycle": [i + 1 for i in w.indices],
        "strict_edge": w.strict_edge,
    }


def dataset_fingerprint(dataset: Dataset) -> str:
    payload = json.dumps(
        {
            "mode": "exact" if dataset.exact else "float",
            "prices": [[encode_number(v) for v in row] for row in dataset.prices],
            "bundles": [[encode_number(v) for v in row] for row in dataset.bundles],
        },
        separators=(",", ":"),
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _verification_json(report: VerificationReport):
    return {
        "kind": report.kind,
        "seed": report.seed,
        "requested_per_observation": report.requested_per_observation,
        "total_samples": report.total_samples,
        "clean": report.clean,
        "exhausted_observations": [t + 1 for t in report.exhausted],
        "per_observation": [
            {"observation": o.observation + 1, "samples": o.samples,
             "violations": o.violations}
            for o in report.per_observation
        ],
        "violations": [
            {"observation": v.observation + 1, "bundle": list(v.bundle),
             "lhs": v.lhs, "rhs": v.rhs}
            for v in report.violations
        ],
    }


# ---------------------------------------------------------------- commands


def _cmd_check_garp(dataset: Dataset, args) -> tuple[dict, int]:
    verdict = check_e_garp(dataset, args.efficiency_value)
    results = {
        "efficiency": _echo_efficiency(dataset, args.efficiency_value),
        "holds": verdict.holds,
        "witness": _encode_witness(verdict.witness),
    }
    return results, EXIT_OK if verdict.holds else EXIT_VIOLATION


def _cmd_ccei(dataset: Dataset, args) -> tuple[dict, int]:
    exact_result = ccei_exact(dataset)
    bisect_value = ccei_binary_search(dataset, args.tol)
    agreement = abs(bisect_value - float(exact_result.value)) <= args.tol
    results = {
        "ccei_exact": encode_number(exact_result.value),
        "ccei_bisect": bisect_value,
        "tol": args.tol,
        "agreement": agreement,
        "attained": exact_result.attained,
        "garp_at_one": bool(exact_result.value == 1 and exact_result.attained),
        "witness_above": _encode_witness(exact_result.witness_above),
        "witness_probe": None if exact_result.witness_probe is None
        else encode_number(exact_result.witness_probe),
        "breakpoints": [encode_number(b) for b in exact_result.breakpoints],
    }
    return results, EXIT_OK


def _cmd_afriat(dataset: Dataset, args) -> tuple[dict, int]:
    try:
        solution = solve_afriat(dataset, args.efficiency_value)
    except AfriatInfeasibleError as err:
        results = {
            "efficiency": _echo_efficiency(dataset, args.efficiency_value),
            "feasible": False,
            "witness": _encode_witness(err.witness),
        }
        return results, EXIT_VIOLATION
    results = {
        "efficiency": _echo_efficiency(dataset, args.efficiency_value),
        "feasible": True,
        "phi": [encode_number(v) for v in solution.phi],
        "lambda": [encode_number(v) for v in solution.lam],
        "checked_pairs": dataset.n_observations ** 2,
        "worst_residual": float(worst_residual(solution, dataset)),
    }
    return results, EXIT_OK


def _cmd_verify(dataset: Dataset, args) -> tuple[dict, int]:
    base, code = _cmd_afriat(dataset, args)
    if not base["feasible"]:
        base.update({
            "rationalization": None,
            "cost_rationalization": None,
            "duality_consistent": check_duality_garp(
                dataset, args.efficiency_value, [None, None]
            ),
        })
        return base, code
    solution = solve_afriat(dataset, args.efficiency_value)
    rat = verify_rationalization(dataset, args.efficiency_value, solution,
                                 n_samples=args.samples, seed=args.seed)
    cost = verify_cost_rationalization(dataset, args.efficiency_value, solution,
                                       n_samples=args.samples, seed=args.seed)
    consistent = check_duality_garp(dataset, args.efficiency_value, [rat, cost])
    base.update({
        "rationalization": _verification_json(rat),
        "cost_rationalization": _verification_json(cost),
        "duality_consistent": consistent,
    })
    clean = rat.clean and cost.clean
    return base, EXIT_OK if clean else EXIT_VIOLATION


def _cmd_oracle(dataset: Dataset, args) -> tuple[dict, int]:
    verdict = garp_oracle(dataset, args.efficiency_value)
    value = ccei_oracle(dataset)
    results = {
        "efficiency": _echo_efficiency(dataset, args.efficiency_value),
        "garp_holds": verdict.garp_holds,
        "violating_cycles": [[i + 1 for i in c] for c in verdict.violating_cycles],
        "ccei": encode_number(value),
    }
    return results, EXIT_OK if verdict.garp_holds else EXIT_VIOLATION


def _echo_efficiency(dataset: Dataset, e) -> list:
    ev = coerce_efficiency(e, dataset)
    return [encode_number(v) for v in ev.values]


def _cmd_generate(args) -> tuple[dict, dict, int]:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ParseError(args.config, f"cannot read generator config: {err}") from err
    known = {
        "family", "weights", "elasticity", "n_observations", "price_range",
        "income_range", "waste", "seed",
    }
    unknown = set(raw) - known
    if unknown:
        raise ParseError(args.config, f"unknown config keys: {sorted(unknown)}")
    try:
        spec = GeneratorSpec(
            family=raw.get("family", "cobb_douglas"),
            weights=tuple(raw.get("weights", ())),
            elasticity=raw.get("elasticity"),
            n_observations=int(raw.get("n_observations", 0)),
            price_range=tuple(raw.get("price_range", (1.0, 1.0))),
            income_range=tuple(raw.get("income_range", (1.0, 1.0))),
            waste=raw.get("waste", 0.0) if isinstance(raw.get("waste", 0.0), (int, float))
            else tuple(raw.get("waste")),
            seed=int(raw.get("seed", 0)),
        )
    except (ValueError, TypeError) as err:
        raise ParseError(args.config, str(err)) from err
    dataset = generate(spec)
    _write_dataset(dataset, args.data_out)
    index = ccei_exact(dataset)
    results = {
        "data_out": args.data_out,
        "family": spec.family,
        "observations": dataset.n_observations,
        "goods": dataset.n_goods,
        "seed": spec.seed,
        "ccei": encode_number(index.value),
    }
    dataset_block = _dataset_block(dataset)
    return {"results": results, "dataset": dataset_block}, results, EXIT_OK


def _write_dataset(dataset: Dataset, path: str) -> None:
    width = dataset.n_goods
    if os.path.splitext(path)[1].lower() == ".json":
        payload = json.dumps({
            "prices": [[float(v) for v in row] for row in dataset.prices],
            "bundles": [[float(v) for v in row] for row in dataset.bundles],
        }, indent=2)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["t"] + [f"p{i}" for i in range(1, width + 1)]
                        + [f"x{i}" for i in range(1, width + 1)])
        for t in range(dataset.n_observations):
            writer.writerow(
                [t + 1]
                + [repr(float(v)) for v in dataset.prices[t]]
                + [repr(float(v)) for v in dataset.bundles[t]]
            )
        payload = buf.getvalue()
    _atomic_write(path, payload)


def _atomic_write(path: str, payload: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(payload)
    os.replace(tmp, path)


# ---------------------------------------------------------------- rendering


def _dataset_block(dataset: Dataset) -> dict:
    return {
        "fingerprint": dataset_fingerprint(dataset),
        "observations": dataset.n_observations,
        "goods": dataset.n_goods,
    }


def _render_text(report: dict) -> str:
    lines = [f"garpkit {report['version']} :: {report['command']} ({report['mode']})"]
    ds = report.get("dataset")
    if ds:
        lines.append(
            f"dataset {ds['fingerprint'][:12]} "
            f"({ds['observations']} observations, {ds['goods']} goods)"
        )
    results = report["results"]
    if "error" in results:
        lines.append(f"error [{results['error']['type']}]: {results['error']['message']}")
        return "\n".join(lines) + "\n"
    for key, value in results.items():
        if key in ("rationalization", "cost_rationalization") and value:
            lines.append(
                f"{key}: clean={value['clean']} samples={value['total_samples']} "
                f"violations={len(value['violations'])}"
            )
        elif key == "breakpoints":
            lines.append(f"breakpoints: {len(value)} candidates")
        elif key == "witness" or key == "witness_above":
            if value:
                lines.append(f"{key}: cycle {value['cycle']} (strict step {value['strict_edge']})")
            else:
                lines.append(f"{key}: none")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    if args.format == "json":
        payload = json.dumps(report, indent=2) + "\n"
    else:
        payload = _render_text(report)
    if args.out:
        _atomic_write(args.out, payload)
    else:
        sys.stdout.write(payload)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="garpkit",
        description="Revealed-preference rationality testing and utility recovery.",
    )
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="report format (default json)")
    common.add_argument("--out", help="write the report to this path (atomic)")

    data_common = argparse.ArgumentParser(add_help=False, parents=[common])
    data_common.add_argument("input", help="dataset file (CSV or JSON)")
    data_common.add_argument("--input-format", choices=("csv", "json", "auto"),
                             default="auto")
    mode = data_common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True,
                      help="exact rational arithmetic (default for file input)")
    mode.add_argument("--float", dest="exact", action="store_false",
                      help="float64 arithmetic with tolerant comparisons")

    eff = argparse.ArgumentParser(add_help=False)
    eff.add_argument("--efficiency", default="1",
                     help="budget deflator: scalar or comma list (default 1)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check-garp", parents=[data_common, eff],
                   help="test e-GARP, report a violating cycle if any")
    p_ccei = sub.add_parser("ccei", parents=[data_common],
                            help="critical cost efficiency, exact and bisected")
    p_ccei.add_argument("--tol", type=float, default=1e-9,
                        help="bisection tolerance (default 1e-9)")
    sub.add_parser("afriat", parents=[data_common, eff],
                   help="solve the Afriat inequalities")
    p_verify = sub.add_parser("verify", parents=[data_common, eff],
                              help="recover utility and verify both dualities by sampling")
    p_verify.add_argument("--samples", type=int, default=10_000,
                          help="samples per observation (default 10000)")
    p_verify.add_argument("--seed", type=int, default=0, help="master RNG seed")
    sub.add_parser("oracle", parents=[data_common, eff],
                   help="brute-force verdicts for small datasets")
    p_gen = sub.add_parser("generate", parents=[common],
                           help="draw a synthetic dataset from a config file")
    p_gen.add_argument("--config", required=True, help="generator spec (JSON)")
    p_gen.add_argument("--data-out", required=True,
                       help="where to write the dataset (CSV, or JSON by extension)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    report: dict = {
        "tool": "garpkit",
        "version": __version__,
        "command": args.command,
        "mode": "float" if getattr(args, "exact", True) is False else "exact",
        "parameters": {},
        "dataset": None,
        "results": {},
    }

    try:
        if args.command == "generate":
            report["parameters"] = {"config": args.config, "data_out": args.data_out}
            blocks, results, code = _cmd_generate(args)
            report["dataset"] = blocks["dataset"]
            report["mode"] = "float"
            report["results"] = results
        else:
            dataset = parse_input(args.input, args.input_format, exact=args.exact)
            report["dataset"] = _dataset_block(dataset)
            if hasattr(args, "efficiency"):
                args.efficiency_value = _efficiency_argument(args.efficiency)
                report["parameters"]["efficiency"] = args.efficiency
            if args.command == "check-garp":
                report["results"], code = _cmd_check_garp(dataset, args)
            elif args.command == "ccei":
                report["parameters"]["tol"] = args.tol
                report["results"], code = _cmd_ccei(dataset, args)
            elif args.command == "afriat":
                report["results"], code = _cmd_afriat(dataset, args)
            elif args.command == "verify":
                report["parameters"]["samples"] = args.samples
                report["parameters"]["seed"] = args.seed
                report["results"], code = _cmd_verify(dataset, args)
            elif args.command == "oracle":
                report["results"], code = _cmd_oracle(dataset, args)
            else:  # pragma: no cover - argparse restricts choices
                raise AssertionError(args.command)
    except GarpkitError as err:
        report["results"] = {
            "error": {"type": type(err).__name__, "message": str(err)}
        }
        # The message keeps the library's 0-based indices; the *_label fields
        # are 1-based display labels matching the CSV t column.
        for attr in ("observation", "good"):
            value = getattr(err, attr, None)
            if value is not None:
                report["results"]["error"][f"{attr}_label"] = value + 1
        for attr in ("row", "column"):
            value = getattr(err, attr, None)
            if value is not None:
                report["results"]["error"][attr] = value
        _emit(report, args)
        return EXIT_INPUT_ERROR
    except ValueError as err:
        report["results"] = {"error": {"type": "ValueError", "message": str(err)}}
        _emit(report, args)
        return EXIT_INPUT_ERROR

    _emit(report, args)
    return code


def entrypoint() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())
