"""Command line harness.

    sim replay <file> [--http URL] [--outbox PATH] [--check-every mutation|end]
                      [--report OUT]
    sim fuzz --seed N [--worlds W] [--users K] [--actions M] [--report OUT]
    sim oracle <file> --node LABEL [--out FILE]
    sim generate --seed N [--users K] [--actions M] [--deployment] [--out FILE]

Exit status is 0 when every check passed and 1 when any mismatch was found.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import oracle
from .generate import generate, generate_deployment
from .replay import HttpReplayer, InProcessReplayer, run_fuzz
from .scenario import load_scenario


def _write_report(report_dict: dict, path: str | None) -> None:
    text = json.dumps(report_dict, sort_keys=True, indent=1)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def cmd_replay(args) -> int:
    scenario = load_scenario(args.file)
    if args.http:
        replayer = HttpReplayer(args.http, outbox_path=args.outbox,
                                moderator_email=args.moderator_email)
        report = replayer.run(scenario)
    else:
        report = InProcessReplayer(check_every=args.check_every).run(scenario)
    _write_report(report.to_dict(), args.report)
    if not report.ok:
        print(f"FAIL: {len(report.mismatches)} mismatches", file=sys.stderr)
        return 1
    print(f"ok: {report.actions_applied} actions, "
          f"{report.posts} posts, {report.comments} comments", file=sys.stderr)
    return 0


def cmd_fuzz(args) -> int:
    stats = run_fuzz(args.seed, args.worlds, max_users=args.users,
                     max_actions=args.actions, check_every=args.check_every,
                     fail_closed_samples=args.fail_closed_samples)
    _write_report(stats, args.report)
    if stats["mismatches"]:
        print(f"FAIL: {len(stats['mismatches'])} mismatches "
              f"over {stats['worlds']} worlds", file=sys.stderr)
        return 1
    print(f"ok: {stats['worlds']} worlds, {stats['actions']} actions, "
          f"zero mismatches", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    scenario = load_scenario(args.file)
    replayer = InProcessReplayer(check_every="end")
    report = replayer.run(scenario)
    audiences = report.node_audiences
    if args.node:
        key = args.node
        if key not in audiences:
            print(f"no node {key!r} in the replayed world", file=sys.stderr)
            return 1
        payload = {key: audiences[key]}
    else:
        payload = audiences
    _write_report(payload, args.out)
    return 0


def cmd_generate(args) -> int:
    if args.deployment:
        scenario = generate_deployment(args.seed, n_users=args.users)
    else:
        scenario = generate(args.seed, n_users=args.users, n_actions=args.actions)
    text = scenario.to_jsonl()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim", description="Scenario replay and verification harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    replay_p = sub.add_parser("replay", help="replay a scenario file with oracle checks")
    replay_p.add_argument("file")
    replay_p.add_argument("--http", metavar="URL", default=None,
                          help="drive a running service instead of in-process")
    replay_p.add_argument("--outbox", default=None,
                          help="server outbox file, for notification checks in http mode")
    replay_p.add_argument("--moderator-email", default="moderator@univ.edu")
    replay_p.add_argument("--check-every", choices=("mutation", "end"),
                          default="mutation")
    replay_p.add_argument("--report", default=None, help="write the JSON report here")
    replay_p.set_defaults(func=cmd_replay)

    fuzz_p = sub.add_parser("fuzz", help="generate and replay many random worlds")
    fuzz_p.add_argument("--seed", type=int, required=True)
    fuzz_p.add_argument("--worlds", type=int, default=20)
    fuzz_p.add_argument("--users", type=int, default=50)
    fuzz_p.add_argument("--actions", type=int, default=200)
    fuzz_p.add_argument("--check-every", choices=("mutation", "end"), default="end")
    fuzz_p.add_argument("--fail-closed-samples", type=int, default=3)
    fuzz_p.add_argument("--report", default=None)
    fuzz_p.set_defaults(func=cmd_fuzz)

    oracle_p = sub.add_parser("oracle", help="brute-force audiences for a scenario")
    oracle_p.add_argument("file")
    oracle_p.add_argument("--node", default=None,
                          help="node label; omit to print every node")
    oracle_p.add_argument("--out", default=None)
    oracle_p.set_defaults(func=cmd_oracle)

    gen_p = sub.add_parser("generate", help="emit a deterministic scenario file")
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--users", type=int, default=47)
    gen_p.add_argument("--actions", type=int, default=200)
    gen_p.add_argument("--deployment", action="store_true",
                       help="exact deployment-scale counts (18 posts, 139 comments)")
    gen_p.add_argument("--out", default=None)
    gen_p.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
