"""Command-line entry point.

    fnucis run <plan>                      start a deployment, supervise until Ctrl-C
    fnucis seed <fixture> [--gateway URL]  load a fixture through the HTTP API
    fnucis smoke <plan> [--out F]          run the end-to-end scenario, emit transcript
    fnucis bench <plan> --n --c --mix      load-generate, write summary TSV + figures
    fnucis report <kind> --term T          fetch a statistical report, write TSV + chart
    fnucis audit <db_dir>                  recheck all store invariants offline
    fnucis decode <capture>                pretty-print captured wire frames
    fnucis tier <name> <plan>              run a single tier (used by distributed mode)

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fnucis.middleware.capture import describe_capture
from fnucis.ops import bench as bench_mod
from fnucis.ops import figures
from fnucis.ops.audit import audit_store
from fnucis.ops.httpapi import ApiError, HttpClient
from fnucis.ops.plans import PlanError, load_plan
from fnucis.ops.runner import Deployment, HealthTimeout, PortInUse, run_tier_foreground, supervise
from fnucis.ops.seeding import FixtureSyntax, SeedError, Seeder
from fnucis.ops.smoke import StepFailed, run_scenario
from fnucis.storage.engine import StorageError


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="fnucis", description="campus system deployment and measurement tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="start all tiers per the plan and supervise")
    p_run.add_argument("plan")

    p_seed = sub.add_parser("seed", help="load a fixture file through the public API")
    p_seed.add_argument("fixture")
    p_seed.add_argument("--gateway", default="http://127.0.0.1:8080")
    p_seed.add_argument("--user", default="root")
    p_seed.add_argument("--password", default="root-password")

    p_smoke = sub.add_parser("smoke", help="run the canonical scenario against a fresh store")
    p_smoke.add_argument("plan")
    p_smoke.add_argument("--out", help="write the transcript here (default: stdout)")
    p_smoke.add_argument("--golden", help="compare the transcript to this file byte for byte")

    p_bench = sub.add_parser("bench", help="load-generate against a deployment")
    p_bench.add_argument("plan")
    p_bench.add_argument("--n", type=int, default=1000, help="total requests")
    p_bench.add_argument("--c", type=int, default=4, help="concurrent workers")
    p_bench.add_argument("--mix", choices=bench_mod.MIXES, default="mixed")
    p_bench.add_argument("--fixture", default=None, help="fixture to seed first (default: bundled demo)")
    p_bench.add_argument("--out", default="bench-out", help="directory for summary.tsv and figures")

    p_report = sub.add_parser("report", help="fetch a statistical report, write TSV and a chart")
    p_report.add_argument("kind", choices=["enrollment_counts", "pass_rates", "application_funnel"])
    p_report.add_argument("--term", required=True)
    p_report.add_argument("--gateway", default="http://127.0.0.1:8080")
    p_report.add_argument("--user", default="root")
    p_report.add_argument("--password", default="root-password")
    p_report.add_argument("--out", default="reports")

    p_audit = sub.add_parser("audit", help="recheck store invariants offline")
    p_audit.add_argument("db_dir", nargs="?", default=None,
                         help="store root (default: $FNUCIS_DB_DIR)")

    p_decode = sub.add_parser("decode", help="pretty-print a capture of wire frames")
    p_decode.add_argument("capture")

    p_tier = sub.add_parser("tier", help="run one tier in the foreground (internal)")
    p_tier.add_argument("name", choices=["registry", "app", "gateway"])
    p_tier.add_argument("plan")
    return parser


def _repo_fixture() -> Path:
    # installed layout: src/fnucis/ops/cli.py -> repo root two levels above src
    here = Path(__file__).resolve()
    for parent in here.parents:
        candidate = parent / "fixtures" / "demo.tsv"
        if candidate.is_file():
            return candidate
    raise FileNotFoundError("bundled demo fixture not found; pass --fixture")


def cmd_run(args) -> int:
    plan = load_plan(args.plan)
    deployment = Deployment(plan).start()
    print(f"registry  {plan.registry_host}:{plan.registry_port}")
    print(f"app       {plan.app.listen_host}:{plan.app.listen_port}")
    print(f"gateway   {plan.gateway_url}")
    print("serving; Ctrl-C stops all tiers", flush=True)
    return supervise(deployment)


def cmd_seed(args) -> int:
    seeder = Seeder(HttpClient(args.gateway), args.user, args.password)
    report = seeder.seed_file(args.fixture)
    for line in report.lines():
        print(line)
    return 0


def cmd_smoke(args) -> int:
    plan = load_plan(args.plan)
    with Deployment(plan):
        transcript = run_scenario(plan.gateway_url, plan.app.bootstrap_user,
                                  plan.app.bootstrap_password)
    if args.out:
        Path(args.out).write_text(transcript, "utf-8")
        print(f"transcript written to {args.out}")
    else:
        sys.stdout.write(transcript)
    if args.golden:
        golden = Path(args.golden).read_text("utf-8")
        if golden != transcript:
            print("transcript does NOT match the golden copy", file=sys.stderr)
            return 2
        print("transcript matches the golden copy")
    return 0


def cmd_bench(args) -> int:
    plan = load_plan(args.plan)
    fixture_path = Path(args.fixture) if args.fixture else _repo_fixture()
    fixture_text = fixture_path.read_text("utf-8")
    out_dir = Path(args.out)
    with Deployment(plan):
        seeder = Seeder(HttpClient(plan.gateway_url), plan.app.bootstrap_user,
                        plan.app.bootstrap_password)
        seeder.seed_text(fixture_text)
        result = bench_mod.run_bench(plan.gateway_url, fixture_text, args.n, args.c, args.mix)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = out_dir / "summary.tsv"
    summary.write_text("\n".join(result.summary_lines()) + "\n", "utf-8")
    written = figures.bench_figures(result, out_dir)
    for line in result.summary_lines():
        print(line)
    print(f"summary: {summary}")
    for path in written:
        print(f"figure:  {path}")
    violations = audit_store(plan.app.db_dir, plan.app.term)
    if violations:
        print(f"store audit: {len(violations)} invariant violations", file=sys.stderr)
        for violation in violations:
            print(f"  {violation}", file=sys.stderr)
        return 2
    print("store audit: clean")
    return 0


def cmd_report(args) -> int:
    client = HttpClient(args.gateway)
    client.login(args.user, args.password)
    report = client.get(f"/api/reports/{args.kind}", query={"term": args.term})
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv = out_dir / f"{args.kind}-{args.term}.tsv"
    lines = ["\t".join(report["columns"])] + ["\t".join(r["cells"]) for r in report["rows"]]
    tsv.write_text("\n".join(lines) + "\n", "utf-8")
    figure = figures.report_figure(report, out_dir / f"{args.kind}-{args.term}.png")
    for line in lines:
        print(line)
    print(f"table:  {tsv}")
    print(f"figure: {figure}")
    return 0


def cmd_audit(args) -> int:
    import os

    db_dir = args.db_dir or os.environ.get("FNUCIS_DB_DIR")
    if not db_dir:
        print("error: give a store directory or set FNUCIS_DB_DIR", file=sys.stderr)
        return 1
    violations = audit_store(db_dir)
    if violations:
        for violation in violations:
            print(violation)
        return 2
    print("store audit: clean")
    return 0


def cmd_decode(args) -> int:
    data = Path(args.capture).read_bytes()
    for line in describe_capture(data):
        print(line)
    return 0


def cmd_tier(args) -> int:
    plan = load_plan(args.plan)
    return run_tier_foreground(args.name, plan)


COMMANDS = {
    "run": cmd_run,
    "seed": cmd_seed,
    "smoke": cmd_smoke,
    "bench": cmd_bench,
    "report": cmd_report,
    "audit": cmd_audit,
    "decode": cmd_decode,
    "tier": cmd_tier,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PlanError, FixtureSyntax, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PortInUse, HealthTimeout, SeedError, StepFailed, ApiError, StorageError,
            bench_mod.TargetUnhealthy) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 0


if __name__ == "__main__":
    sys.exit(main())
