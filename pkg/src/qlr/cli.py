"""Command-line front end: load tables, run estimators, emit reports.

Input formats
-------------
CSV: header row names the hypotheses (first cell is a corner label and is
ignored); each following row is a feature label plus one value per
hypothesis.  If the final row's label is ``__population__`` every value in
the file must be a nonnegative integer and the file is read as counts;
otherwise values are conditional probabilities in (0, 1].

JSON: an object with ``"kind": "probabilities"`` (fields ``values``,
optional ``features``/``hypotheses``/``priors``) or ``"kind": "counts"``
(fields ``counts``, ``populations``, optional labels).

Exit codes
----------
0 success; 2 invalid input (unparseable file, out-of-range values, bad
flags); 3 input that is valid but cannot support the request (wrong shape
for an estimator, probability-only file given to ``ranges``, zero counts
under a probability-based method).

JSON output is canonical: keys sorted, floats carrying 10 significant
digits, so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from . import __version__
from .classical import (
    bayes_posterior,
    mean_frequency_posterior,
    mean_range_posterior,
    naive_posterior,
)
from .errors import (
    BadIndex,
    BadShape,
    DegenerateRange,
    InvalidCell,
    InvalidHbar,
    InvalidOverlap,
    InvalidPriors,
    NonPositiveTotal,
    NotCounts,
    NotPositiveDefinite,
    ParseError,
    QlrError,
    Unsupported,
)
from .quantum import (
    OverlapMatrix,
    hbar_moderated_coefficients,
    overlap_coefficients,
    posterior_2x2,
    verify_constraint_suite,
)
from .tables import ContingencyTable, CountTable, from_counts, intersection_range, new_table
from .wavefunction import cross_path_suite, posterior_via_wavefunction

_INT_RE = re.compile(r"^[+-]?\d+$")
_POPULATION_LABEL = "__population__"

# Expansion order of --method all; also the deterministic report order.
_BASE_METHODS = ("naive", "mean-freq", "mean-range", "quantum", "wavefunction")


class _LoadedInput:
    """A parsed input file: always labels, counts when the file carries them,
    and a probability matrix when the file carries that instead."""

    def __init__(self, path, kind, features, hypotheses, values=None,
                 count_table=None, file_priors=None):
        self.path = path
        self.kind = kind
        self.features = features
        self.hypotheses = hypotheses
        self.values = values
        self.count_table = count_table
        self.file_priors = file_priors

    @property
    def m(self) -> int:
        return len(self.features)

    @property
    def n(self) -> int:
        return len(self.hypotheses)


def _parse_number(cell: str, line: int, column: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"{cell!r} is not a number", line=line, column=column) from None


def _parse_integer(cell: str, line: int, column: int) -> int:
    if not _INT_RE.match(cell):
        raise ParseError(
            f"{cell!r} is not an integer (count files allow integers only)",
            line=line,
            column=column,
        )
    return int(cell)


def _parse_csv(text: str, path: str) -> _LoadedInput:
    reader = csv.reader(io.StringIO(text))
    rows: list[tuple[int, list[str]]] = []
    for row in reader:
        cells = [cell.strip() for cell in row]
        if not any(cells):
            continue
        rows.append((reader.line_num, cells))
    if not rows:
        raise ParseError("empty file")
    header_line, header = rows[0]
    if len(header) < 2:
        raise ParseError(
            "header must name at least one hypothesis column", line=header_line
        )
    hypotheses = tuple(header[1:])
    body = rows[1:]
    if not body:
        raise ParseError("no feature rows after the header", line=header_line)
    for line, cells in body:
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, got {len(cells)}", line=line
            )
    for line, cells in body[:-1]:
        if cells[0] == _POPULATION_LABEL:
            raise ParseError(
                f"{_POPULATION_LABEL} must be the last row", line=line
            )

    is_counts = body[-1][1][0] == _POPULATION_LABEL
    if is_counts:
        feature_rows, (pop_line, pop_cells) = body[:-1], body[-1]
        if not feature_rows:
            raise ParseError("no feature rows before the population row", line=pop_line)
        features = tuple(cells[0] for _, cells in feature_rows)
        counts = [
            [_parse_integer(cell, line, col + 2) for col, cell in enumerate(cells[1:])]
            for line, cells in feature_rows
        ]
        populations = [
            _parse_integer(cell, pop_line, col + 2)
            for col, cell in enumerate(pop_cells[1:])
        ]
        table = CountTable(np.array(counts, dtype=np.int64),
                           np.array(populations, dtype=np.int64))
        return _LoadedInput(path, "counts", features, hypotheses, count_table=table)

    features = tuple(cells[0] for _, cells in body)
    values = [
        [_parse_number(cell, line, col + 2) for col, cell in enumerate(cells[1:])]
        for line, cells in body
    ]
    return _LoadedInput(path, "probabilities", features, hypotheses, values=values)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _parse_json(text: str, path: str) -> _LoadedInput:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from None
    _require(isinstance(data, dict), "top-level JSON value must be an object")
    kind = data.get("kind")
    _require(
        kind in ("probabilities", "counts"),
        'JSON input needs "kind": "probabilities" or "counts"',
    )

    def matrix(key: str, want_int: bool) -> list[list]:
        rows = data.get(key)
        _require(
            isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows),
            f'"{key}" must be a non-empty list of rows',
        )
        width = len(rows[0])
        for r in rows:
            _require(len(r) == width, f'all "{key}" rows must have equal length')
            for v in r:
                if want_int:
                    _require(
                        isinstance(v, int) and not isinstance(v, bool),
                        f'"{key}" entries must be integers',
                    )
                else:
                    _require(
                        isinstance(v, (int, float)) and not isinstance(v, bool),
                        f'"{key}" entries must be numbers',
                    )
        return rows

    def labels(key: str, fallback_prefix: str, count: int) -> tuple[str, ...]:
        raw = data.get(key)
        if raw is None:
            return tuple(f"{fallback_prefix}{k + 1}" for k in range(count))
        _require(
            isinstance(raw, list) and all(isinstance(s, str) for s in raw),
            f'"{key}" must be a list of strings',
        )
        _require(len(raw) == count, f'"{key}" must have {count} entries')
        return tuple(raw)

    if kind == "counts":
        counts = matrix("counts", want_int=True)
        pops = data.get("populations")
        _require(
            isinstance(pops, list)
            and all(isinstance(v, int) and not isinstance(v, bool) for v in pops),
            '"populations" must be a list of integers',
        )
        table = CountTable(np.array(counts, dtype=np.int64),
                           np.array(pops, dtype=np.int64))
        return _LoadedInput(
            path,
            "counts",
            labels("features", "D", table.m),
            labels("hypotheses", "H", table.n),
            count_table=table,
        )

    values = matrix("values", want_int=False)
    priors = data.get("priors")
    if priors is not None:
        _require(
            isinstance(priors, list)
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in priors),
            '"priors" must be a list of numbers',
        )
        priors = [float(v) for v in priors]
    return _LoadedInput(
        path,
        "probabilities",
        labels("features", "D", len(values)),
        labels("hypotheses", "H", len(values[0])),
        values=[[float(v) for v in row] for row in values],
        file_priors=priors,
    )


def _load_input(path: str) -> _LoadedInput:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    if path.lower().endswith(".json"):
        return _parse_json(text, path)
    return _parse_csv(text, path)


def _parse_priors_flag(raw: str | None, n: int) -> list[float] | None:
    if raw is None:
        return None
    parts = raw.split(",")
    values = []
    for part in parts:
        try:
            values.append(float(part))
        except ValueError:
            raise ParseError(f"--priors entry {part.strip()!r} is not a number") from None
    if len(values) != n:
        raise InvalidPriors(f"--priors needs {n} comma-separated values, got {len(values)}")
    return values


def _quantize(value: Any) -> Any:
    """Round every float to 10 significant digits, recursively.

    Applied before serialization so that parse + re-serialize round-trips
    byte-identically.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.10g}")
    if isinstance(value, dict):
        return {k: _quantize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_quantize(v) for v in value]
    return value


def render_json(report: dict) -> str:
    """Canonical JSON: sorted keys, 2-space indent, 10-significant-digit
    floats, trailing newline."""
    return json.dumps(_quantize(report), sort_keys=True, indent=2) + "\n"


def _format_float(value: float) -> str:
    return f"{value:.10g}"


class _MethodPlan:
    """One requested estimator: its canonical selector name, whether the user
    asked for it by name (skipping is then an error, not a warning), and how
    to run it."""

    def __init__(self, selector: str, explicit: bool):
        self.selector = selector
        self.explicit = explicit


def _expand_selectors(raw_methods: Sequence[str], m: int) -> list[_MethodPlan]:
    plans: dict[str, _MethodPlan] = {}

    def add(selector: str, explicit: bool) -> None:
        if selector in plans:
            plans[selector].explicit = plans[selector].explicit or explicit
        else:
            plans[selector] = _MethodPlan(selector, explicit)

    for raw in raw_methods:
        sel = raw.strip()
        if sel == "all":
            for k in range(1, m + 1):
                add(f"bayes:{k}", False)
            for name in _BASE_METHODS:
                add(name, False)
        elif sel in _BASE_METHODS:
            add(sel, True)
        elif sel.startswith("bayes:"):
            suffix = sel[len("bayes:"):]
            if not _INT_RE.match(suffix) or int(suffix) < 1:
                raise ParseError(
                    f"--method bayes needs a 1-based feature index, got {raw!r}"
                )
            add(f"bayes:{int(suffix)}", True)
        elif sel == "bayes":
            raise ParseError("--method bayes needs a feature index, e.g. bayes:1")
        else:
            raise ParseError(f"unknown method {raw!r}")
    return list(plans.values())


class _AnalysisRun:
    """Shared state while executing one analyze command."""

    def __init__(self, loaded: _LoadedInput, priors_flag: list[float] | None,
                 hbar: float | None):
        self.loaded = loaded
        self.priors_flag = priors_flag
        self.hbar = hbar
        self.warnings: list[str] = []
        self.diagnostics: dict[str, Any] | None = None
        self._prob_table: ContingencyTable | None = None
        self._solution = None

    def prob_table(self) -> ContingencyTable:
        """The probability-matrix view of the input, built on first use.

        For counts input a zero count makes this view unavailable; that is a
        capability gap of the request, not a defect of the file, so the
        zero-cell rejection is re-raised as Unsupported.
        """
        if self._prob_table is not None:
            return self._prob_table
        loaded = self.loaded
        if loaded.kind == "counts":
            try:
                base = from_counts(
                    loaded.count_table,
                    features=loaded.features,
                    hypotheses=loaded.hypotheses,
                )
            except InvalidCell as exc:
                raise Unsupported(
                    f"probability-based methods need nonzero counts ({exc})"
                ) from exc
            if self.priors_flag is not None:
                base = new_table(
                    base.x,
                    self.priors_flag,
                    features=loaded.features,
                    hypotheses=loaded.hypotheses,
                )
        else:
            priors = self.priors_flag
            if priors is None:
                priors = loaded.file_priors
            base = new_table(
                loaded.values,
                priors,
                features=loaded.features,
                hypotheses=loaded.hypotheses,
            )
        self._prob_table = base
        return base

    def coefficient_solution(self):
        if self._solution is None:
            table = self.prob_table()
            if (table.m, table.n) != (2, 2):
                raise Unsupported(
                    f"overlap coefficients need a 2x2 table, got {table.m}x{table.n}"
                )
            self._solution = overlap_coefficients(table)
            diag = self._solution.diagnostics
            self.diagnostics = {
                "c1": self._solution.c1,
                "c2": self._solution.c2,
                "within_unit_interval": diag.all_within_unit_interval,
                "gram_positive_definite": list(diag.gram_positive_definite),
            }
            if not diag.all_within_unit_interval:
                self.warnings.append(
                    "overlap coefficient magnitude >= 1 "
                    f"(c1={_format_float(self._solution.c1)}, "
                    f"c2={_format_float(self._solution.c2)}); "
                    "state-vector cross-check may be unavailable"
                )
            if self.hbar is not None:
                c1m, c2m = hbar_moderated_coefficients(
                    self._solution.c1, self._solution.c2, self.hbar
                )
                self.diagnostics["hbar"] = self.hbar
                self.diagnostics["c1_moderated"] = c1m
                self.diagnostics["c2_moderated"] = c2m
        return self._solution

    def run_method(self, selector: str):
        loaded = self.loaded
        if selector.startswith("bayes:"):
            feature = int(selector.split(":", 1)[1])
            table = self.prob_table()
            if feature > table.m:
                raise BadIndex(
                    f"feature index {feature} out of range for {table.m} features"
                )
            return bayes_posterior(table, feature - 1)
        if selector == "naive":
            return naive_posterior(self.prob_table())
        if selector == "mean-freq":
            if loaded.kind != "counts":
                raise Unsupported("mean-freq needs integer counts with populations")
            return mean_frequency_posterior(loaded.count_table, self.priors_flag)
        if selector == "mean-range":
            if loaded.kind != "counts":
                raise Unsupported("mean-range needs integer counts with populations")
            return mean_range_posterior(loaded.count_table, self.priors_flag)
        if selector == "quantum":
            table = self.prob_table()
            self.coefficient_solution()
            return posterior_2x2(table, self.hbar)
        if selector == "wavefunction":
            table = self.prob_table()
            solution = self.coefficient_solution()
            c1, c2 = solution.c1, solution.c2
            if self.hbar is not None:
                c1, c2 = hbar_moderated_coefficients(c1, c2, self.hbar)
            return posterior_via_wavefunction(table, OverlapMatrix.from_pair(c1, c2))
        raise ParseError(f"unknown method {selector!r}")


def _echo_priors(run: _AnalysisRun) -> list[float]:
    loaded = run.loaded
    if run.priors_flag is not None:
        return list(run.priors_flag)
    if loaded.kind == "counts":
        pops = loaded.count_table.populations
        return [float(v) for v in pops / pops.sum()]
    if loaded.file_priors is not None:
        return list(loaded.file_priors)
    return [1.0 / loaded.n] * loaded.n


def _input_echo(run: _AnalysisRun) -> dict[str, Any]:
    loaded = run.loaded
    echo: dict[str, Any] = {
        "path": loaded.path,
        "kind": loaded.kind,
        "features": list(loaded.features),
        "hypotheses": list(loaded.hypotheses),
        "priors": _echo_priors(run),
    }
    if loaded.kind == "counts":
        echo["counts"] = [[int(v) for v in row] for row in loaded.count_table.counts]
        echo["populations"] = [int(v) for v in loaded.count_table.populations]
    else:
        echo["values"] = [[float(v) for v in row] for row in loaded.values]
    return echo


def _ranges_payload(loaded: _LoadedInput) -> list[dict[str, Any]]:
    table = loaded.count_table
    payload = []
    for a in range(table.n):
        for i, j in combinations(range(table.m), 2):
            r = intersection_range(table, a, i, j)
            payload.append(
                {
                    "hypothesis": loaded.hypotheses[a],
                    "features": [loaded.features[i], loaded.features[j]],
                    "lo": r.lo,
                    "hi": r.hi,
                }
            )
    return payload


def _posterior_payload(pd, hypotheses) -> dict[str, Any]:
    return {
        "method": pd.method,
        "probabilities": list(pd.probabilities),
        "argmax_index": pd.argmax_index,
        "argmax": hypotheses[pd.argmax_index],
    }


def cmd_analyze(args) -> int:
    loaded = _load_input(args.input)
    priors_flag = _parse_priors_flag(args.priors, loaded.n)
    run = _AnalysisRun(loaded, priors_flag, args.hbar)
    plans = _expand_selectors(args.method or ["all"], loaded.m)

    if args.hbar == 0.0 and any(
        p.selector in ("quantum", "wavefunction") for p in plans
    ):
        run.warnings.append("overlap disabled at hbar=0")

    methods: dict[str, Any] = {}
    for plan in plans:
        try:
            pd = run.run_method(plan.selector)
        except (Unsupported, DegenerateRange, NotPositiveDefinite,
                NonPositiveTotal, BadIndex) as exc:
            if plan.explicit:
                raise
            run.warnings.append(f"skipped {plan.selector}: {exc}")
            continue
        methods[plan.selector] = _posterior_payload(pd, loaded.hypotheses)

    report: dict[str, Any] = {
        "command": "analyze",
        "version": __version__,
        "input": _input_echo(run),
        "methods": methods,
        "warnings": run.warnings,
    }
    if run.diagnostics is not None:
        report["diagnostics"] = run.diagnostics
    if loaded.kind == "counts" and loaded.m >= 2:
        report["ranges"] = _ranges_payload(loaded)

    if args.format == "json":
        sys.stdout.write(render_json(report))
    else:
        sys.stdout.write(_analyze_text(report))
    return 0


def _analyze_text(report: dict) -> str:
    lines = [f"qlr analyze (version {report['version']})"]
    echo = report["input"]
    lines.append(f"input: {echo['path']} ({echo['kind']})")
    lines.append("features: " + ", ".join(echo["features"]))
    lines.append("hypotheses: " + ", ".join(echo["hypotheses"]))
    if "populations" in echo:
        lines.append("populations: " + ", ".join(str(v) for v in echo["populations"]))
    lines.append("priors: " + ", ".join(_format_float(v) for v in echo["priors"]))
    if report.get("ranges"):
        lines.append("ranges:")
        for entry in report["ranges"]:
            pair = " & ".join(entry["features"])
            lines.append(
                f"  {entry['hypothesis']}: {pair} in [{entry['lo']}, {entry['hi']}]"
            )
    lines.append("posteriors:")
    for selector in sorted(report["methods"]):
        entry = report["methods"][selector]
        probs = "  ".join(
            f"{h}={_format_float(p)}"
            for h, p in zip(echo["hypotheses"], entry["probabilities"])
        )
        lines.append(f"  {selector:<14} {probs}  argmax={entry['argmax']}")
    diag = report.get("diagnostics")
    if diag is not None:
        parts = [f"c1={_format_float(diag['c1'])}", f"c2={_format_float(diag['c2'])}"]
        if "hbar" in diag:
            parts.append(f"hbar={_format_float(diag['hbar'])}")
            parts.append(f"c1'={_format_float(diag['c1_moderated'])}")
            parts.append(f"c2'={_format_float(diag['c2_moderated'])}")
        parts.append(
            "within unit interval: " + ("yes" if diag["within_unit_interval"] else "no")
        )
        lines.append("diagnostics: " + "  ".join(parts))
    if report["warnings"]:
        lines.append("warnings:")
        for warning in report["warnings"]:
            lines.append(f"  - {warning}")
    return "\n".join(lines) + "\n"


def cmd_ranges(args) -> int:
    loaded = _load_input(args.input)
    if loaded.kind != "counts":
        raise NotCounts(
            "ranges need integer counts with populations; "
            "this file carries probabilities"
        )
    if loaded.m < 2:
        raise Unsupported(f"ranges need at least 2 features, got {loaded.m}")
    payload = _ranges_payload(loaded)
    report = {
        "command": "ranges",
        "version": __version__,
        "input": {
            "path": loaded.path,
            "kind": loaded.kind,
            "features": list(loaded.features),
            "hypotheses": list(loaded.hypotheses),
            "counts": [[int(v) for v in row] for row in loaded.count_table.counts],
            "populations": [int(v) for v in loaded.count_table.populations],
        },
        "ranges": payload,
    }
    if args.format == "json":
        sys.stdout.write(render_json(report))
    else:
        lines = [f"qlr ranges (version {report['version']})"]
        for entry in payload:
            pair = " & ".join(entry["features"])
            lines.append(
                f"{entry['hypothesis']}: {pair} in [{entry['lo']}, {entry['hi']}]"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise ParseError(f"--samples must be >= 1, got {args.samples}")
    constraints = verify_constraint_suite(args.samples, args.seed)
    cross = cross_path_suite(args.samples, args.seed)
    passed = constraints.passed and cross.passed
    report = {
        "command": "verify",
        "version": __version__,
        "samples": args.samples,
        "seed": args.seed,
        "constraints": constraints.to_dict(),
        "cross_path": cross.to_dict(),
        "passed": passed,
    }
    if args.format == "json":
        sys.stdout.write(render_json(report))
    else:
        lines = [f"qlr verify (version {report['version']}): "
                 f"samples={args.samples} seed={args.seed}"]
        for suite_name, suite in (("constraints", constraints), ("cross-path", cross)):
            for check in suite.checks:
                status = "PASS" if check.passed else "FAIL"
                lines.append(
                    f"{status} {suite_name}/{check.name}: "
                    f"max deviation {_format_float(check.max_deviation)} "
                    f"(tolerance {_format_float(check.tolerance)}, "
                    f"{check.passes}/{check.samples} samples)"
                )
        lines.append("result: " + ("all checks passed" if passed else "FAILURES detected"))
        sys.stdout.write("\n".join(lines) + "\n")
    return 0 if passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlr",
        description="Likelihood-ratio estimators for contingency tables "
        "with co-dependent features.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="run estimators on a contingency table file"
    )
    analyze.add_argument("input", help="CSV or JSON table file")
    analyze.add_argument(
        "--method",
        action="append",
        metavar="M",
        help="estimator to run: bayes:<feature>, naive, mean-freq, mean-range, "
        "quantum, wavefunction, or all (may repeat; default all)",
    )
    analyze.add_argument(
        "--hbar",
        type=float,
        default=None,
        help="moderate overlap coefficients by 1 - exp(-hbar)",
    )
    analyze.add_argument(
        "--priors",
        default=None,
        metavar="P1,P2,...",
        help="comma-separated hypothesis priors (default: population shares "
        "for counts, uniform otherwise)",
    )
    analyze.add_argument(
        "--format", choices=("json", "text"), default="text", help="output format"
    )

    ranges = sub.add_parser(
        "ranges", help="feasible joint-count ranges for each feature pair"
    )
    ranges.add_argument("input", help="CSV or JSON counts file")
    ranges.add_argument(
        "--format", choices=("json", "text"), default="text", help="output format"
    )

    verify = sub.add_parser(
        "verify", help="run the randomized constraint and cross-path suites"
    )
    verify.add_argument("--samples", type=int, default=1000, help="samples per check")
    verify.add_argument("--seed", type=int, default=42, help="random seed")
    verify.add_argument(
        "--format", choices=("json", "text"), default="text", help="output format"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "ranges":
            return cmd_ranges(args)
        return cmd_verify(args)
    except (ParseError, BadShape, InvalidCell, InvalidPriors, InvalidHbar,
            InvalidOverlap) as exc:
        print(f"qlr: error: {exc}", file=sys.stderr)
        return 2
    except (Unsupported, NotCounts, DegenerateRange, NotPositiveDefinite,
            NonPositiveTotal, BadIndex) as exc:
        print(f"qlr: error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"qlr: error: {exc}", file=sys.stderr)
        return 2
    except QlrError as exc:
        print(f"qlr: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
