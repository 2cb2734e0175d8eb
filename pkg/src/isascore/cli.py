"""Operator entry point.

Subcommands::

    isascore ingest {agent|pcap|questionnaire} INPUT --config CFG --out FILE
    isascore score MEASUREMENTS MODEL --source SRC [--beta B] --out FILE
    isascore evaluate SCORES OUTCOMES [--config CFG] --out-dir DIR
    isascore synth SPEC --seed N --out-dir DIR

Exit codes: 0 success, 2 input error, 3 configuration or model mismatch,
4 data inconsistency.  Every command is deterministic given identical
inputs (and seed), so pipelines can be replayed stage by stage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import DataSource
from .config import RunConfig, load_config
from .errors import ConfigError, DataMismatchError, InputError
from .evaluation import (
    Challenge,
    evaluate_data_source,
    load_outcomes,
    write_report_csv,
    write_report_json,
)
from .ingest import ingest_agent_log, ingest_capture, ingest_findings, ingest_questionnaire
from .measurements import read_measurements, write_measurements
from .models import AttackClass, load_model
from .net.pcap import load_ip_user_map
from .net.tls import load_trust_store
from .reputation import load_reputation_db
from .scorefile import read_scores, write_scores
from .scoring import compute_isa_score, level_of, population_stats
from .synth import SynthSpec, generate_synthetic_population, write_dataset
from .versions import load_version_table

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_MISMATCH = 4

# which challenge validates which attack-class model
DEFAULT_CHALLENGE_CLASSES = {
    Challenge.PHISHING: AttackClass.PHISHING,
    Challenge.SPAM: AttackClass.PHISHING,
    Challenge.PERMISSIONS: AttackClass.APPLICATION,
    Challenge.CERTIFICATE: AttackClass.MITM,
}

_PCAP_MAGICS = (b"\xa1\xb2\xc3\xd4", b"\xd4\xc3\xb2\xa1")


def _cmd_ingest(args) -> int:
    config = load_config(args.config)
    input_path = Path(args.input)
    if not input_path.exists():
        raise InputError(f"input file not found: {input_path}")
    if args.source == "agent":
        reputation = load_reputation_db(config.require_path("reputation_db"),
                                        config.path("hash_list"))
        version_table = load_version_table(config.require_path("version_table"))
        result = ingest_agent_log(
            input_path, reputation, version_table,
            packages=_optional(config, "package_categories"),
            dangerous_permissions=_optional(config, "dangerous_permissions"),
            burst_min=int(config.params["burst_min"]),
            burst_window=config.params["burst_window"],
            quiet_gap=config.params["quiet_gap"],
            malformed_threshold=config.params["malformed_threshold"],
        )
    elif args.source == "pcap":
        with open(input_path, "rb") as fh:
            magic = fh.read(4)
        if magic in _PCAP_MAGICS:
            reputation = load_reputation_db(config.require_path("reputation_db"),
                                            config.path("hash_list"))
            version_table = load_version_table(config.require_path("version_table"))
            ip_map = load_ip_user_map(config.require_path("ip_user_map"))
            trust = load_trust_store(config.require_path("trust_store"))
            result = ingest_capture(
                input_path, ip_map, reputation, trust, version_table,
                correlation_window=config.params["correlation_window"],
                recurrence_days=int(config.params["recurrence_days"]),
            )
        else:
            # findings JSONL produced by a previous analysis or the generator
            result = ingest_findings(
                input_path, recurrence_days=int(config.params["recurrence_days"]),
            )
    else:
        result = ingest_questionnaire(input_path, config.path("question_map"))

    write_measurements(result.vectors, args.out)
    print(result.coverage_summary())
    print(f"wrote {args.out}")
    return EXIT_OK


def _optional(config: RunConfig, key: str):
    path = config.path(key)
    if path is None:
        return None
    if key == "package_categories":
        from .agent import load_package_categories
        return load_package_categories(path)
    if key == "dangerous_permissions":
        from .agent import load_dangerous_permissions
        return load_dangerous_permissions(path)
    return None


def _cmd_score(args) -> int:
    config = load_config(args.config)
    beta = args.beta if args.beta is not None else config.params["beta"]
    if beta < 0:
        raise ConfigError("beta must be nonnegative")
    source = DataSource(args.source)
    vectors = read_measurements(args.measurements, source)
    if not vectors:
        raise InputError(f"{args.measurements}: no measurement rows")
    model = load_model(args.model)

    scores = []
    skipped = []
    for mv in vectors:
        try:
            scores.append(compute_isa_score(mv, model))
        except InputError:
            skipped.append(mv.user_id)
    if not scores:
        raise ConfigError(
            "no user has any coverage overlapping the model weights"
        )
    stats = population_stats(scores, beta)
    rows = [(s, level_of(s.score, stats)) for s in scores]
    write_scores(rows, args.out)
    if skipped:
        print(f"skipped {len(skipped)} users with no model overlap: "
              + ",".join(skipped[:10]))
    print(f"scored {len(scores)} users (mu={stats.mean:.4f} sigma={stats.std:.4f} "
          f"beta={beta:g}); wrote {args.out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    config = load_config(args.config) if args.config else load_config()
    rows = read_scores(args.scores)
    if not rows:
        raise InputError(f"{args.scores}: empty score file")
    outcomes = load_outcomes(args.outcomes)
    if not outcomes:
        raise InputError(f"{args.outcomes}: empty outcomes file")

    scored_uids = {s.user_id for s, _ in rows}
    orphans = sorted({o.user_id for o in outcomes} - scored_uids)
    if orphans:
        raise DataMismatchError(
            "outcomes reference users with no scores: " + ",".join(orphans)
        )

    groups: dict[tuple, list] = {}
    for score, level in rows:
        groups.setdefault((score.attack_class, score.data_source), []).append((score, level))

    from .scoring import AwarenessLevel
    reports = []
    for (attack_class, source), members in sorted(groups.items(),
                                                  key=lambda kv: (kv[0][0].value, kv[0][1].value)):
        scores = [s for s, _ in members]
        levels = [AwarenessLevel(s.user_id, lv) for s, lv in members]
        for challenge, challenge_class in DEFAULT_CHALLENGE_CLASSES.items():
            if challenge_class is not attack_class:
                continue
            report = evaluate_data_source(
                scores, levels, outcomes, attack_class, source, challenge,
            )
            reports.append(report)
            if report.warnings:
                print(f"warning [{challenge.value}/{attack_class.value}/{source.value}]: "
                      + "; ".join(report.warnings))

    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_report_csv(reports, outdir / "evaluation.csv")
    write_report_json(reports, outdir / "evaluation.json")
    print(f"wrote {outdir / 'evaluation.csv'} and {outdir / 'evaluation.json'}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec_path = Path(args.spec)
    if not spec_path.exists():
        raise InputError(f"spec file not found: {spec_path}")
    try:
        obj = json.loads(spec_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise InputError(f"{spec_path}: invalid JSON: {exc}") from exc
    spec = SynthSpec.from_dict(obj)
    dataset = generate_synthetic_population(spec, args.seed)
    write_dataset(dataset, args.out_dir)
    print(f"wrote synthetic dataset for {spec.n_users} users to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isascore",
        description="security-awareness scoring from agent logs, captures, "
                    "and questionnaires",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="measure one data source into a measurement file")
    p.add_argument("source", choices=["agent", "pcap", "questionnaire"])
    p.add_argument("input")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("score", help="score a measurement file against a model")
    p.add_argument("measurements")
    p.add_argument("model")
    p.add_argument("--source", required=True,
                   choices=[s.value for s in DataSource])
    p.add_argument("--config", default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("evaluate", help="validate scores against challenge outcomes")
    p.add_argument("scores")
    p.add_argument("outcomes")
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic dataset with ground truth")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
