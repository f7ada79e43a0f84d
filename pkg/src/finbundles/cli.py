"""Command-line driver: fixture ingestion, suite execution, enumeration
and JSON report emission.

Subcommands: verify | enumerate | theorem | glue.  Reports are
deterministic for a fixed configuration apart from the elapsed_s field;
the exit code is 0 exactly when every check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .algebra import AlgebraError, group_from_json, groupoid_from_json
from .suites import (
    Bounds,
    enumerate_checks,
    glue_checks,
    theorem_checks,
    verify_checks,
)
from .torsor import bundle_from_json


class ParseError(Exception):
    def __init__(self, path, detail):
        super().__init__("%s: %s" % (path, detail))
        self.path = str(path)
        self.detail = detail


class ValidationError(Exception):
    def __init__(self, path, error):
        super().__init__("%s: %s" % (path, error))
        self.path = str(path)
        self.error = error


def _load_json(path: Path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(path, str(exc))


def load_fixtures(fixtures_dir: Path):
    """Read groups, groupoids and bundles from the fixture layout.  A
    fixture that parses but fails validation becomes a failed check entry
    instead of aborting the run."""
    groups, groupoids, bundles, failures = {}, {}, {}, []

    def record(path, exc):
        failures.append({"check": "fixture", "fixture": str(path),
                         "passed": False, "error": type(exc).__name__,
                         "witness": getattr(exc, "witness", None)
                         or getattr(exc, "detail", None)})

    for path in sorted((fixtures_dir / "groups").glob("*.json")):
        try:
            groups[path.stem] = group_from_json(_load_json(path))
        except (ParseError, AlgebraError, ValueError, KeyError) as exc:
            record(path, exc)
    for path in sorted((fixtures_dir / "groupoids").glob("*.json")):
        try:
            groupoids[path.stem] = groupoid_from_json(_load_json(path))
        except (ParseError, AlgebraError, ValueError, KeyError) as exc:
            record(path, exc)
    for path in sorted((fixtures_dir / "bundles").glob("*.json")):
        try:
            data = _load_json(path)
            ref = data["action"]["algebra"]
            kind, _, name = ref.partition("/")
            alg = groups[name] if kind == "groups" else groupoids[name]
            bundles[path.stem] = bundle_from_json(data, alg)
        except (ParseError, AlgebraError, ValueError, KeyError) as exc:
            record(path, exc)
    return groups, groupoids, bundles, failures


def build_report(command: str, bounds: Bounds, checks: list[dict],
                 elapsed: float) -> dict:
    return {"command": command,
            "bounds": bounds.to_json(),
            "checks": checks,
            "all_passed": all(c.get("passed", False) for c in checks),
            "elapsed_s": round(elapsed, 3)}


def run_verify(fixtures_dir: Path, bounds: Bounds) -> dict:
    start = time.perf_counter()
    groups, groupoids, bundles, failures = load_fixtures(fixtures_dir)
    checks = failures + verify_checks(groups, groupoids, bundles, bounds)
    return build_report("verify", bounds, checks, time.perf_counter() - start)


def run_enumerate(fixtures_dir: Path, bounds: Bounds) -> dict:
    start = time.perf_counter()
    groups, groupoids, bundles, failures = load_fixtures(fixtures_dir)
    checks = failures + enumerate_checks(groups, groupoids, bounds)
    return build_report("enumerate", bounds, checks, time.perf_counter() - start)


def run_theorem_suite(fixtures_dir: Path, bounds: Bounds) -> dict:
    start = time.perf_counter()
    groups, groupoids, bundles, failures = load_fixtures(fixtures_dir)
    checks = failures + theorem_checks(groups, groupoids, bounds)
    return build_report("theorem", bounds, checks, time.perf_counter() - start)


def run_glue(fixtures_dir: Path, bounds: Bounds) -> dict:
    start = time.perf_counter()
    checks = glue_checks(bounds)
    return build_report("glue", bounds, checks, time.perf_counter() - start)


COMMANDS = {"verify": run_verify, "enumerate": run_enumerate,
            "theorem": run_theorem_suite, "glue": run_glue}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finbundles",
        description="Exhaustive law checking for finite principal bundles")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--fixtures", default="fixtures", type=Path)
    parser.add_argument("--bound-group", type=int, default=4)
    parser.add_argument("--bound-carrier", type=int, default=6)
    parser.add_argument("--bound-base", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--json", action="store_true",
                        help="emit the full JSON report on stdout")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    for name, value in (("bound-group", args.bound_group),
                        ("bound-carrier", args.bound_carrier),
                        ("bound-base", args.bound_base)):
        if value <= 0:
            print("error: --%s must be positive" % name, file=sys.stderr)
            return 2
    bounds = Bounds(group_order=args.bound_group, carrier=args.bound_carrier,
                    base=args.bound_base, seed=args.seed)
    report = COMMANDS[args.command](args.fixtures, bounds)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out is not None:
        args.out.write_text(text + "\n")
    if args.json or args.out is None:
        print(text)
    else:
        for check in report["checks"]:
            label = check.get("fixture") or check.get("group") or \
                check.get("groupoid") or check.get("presentation") or \
                check.get("f") or ""
            print("%-28s %-24s %s" % (check["check"], label,
                                      "ok" if check.get("passed") else "FAIL"))
        print("all_passed:", report["all_passed"])
    return 0 if report["all_passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
