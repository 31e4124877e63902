"""Command-line entry point for macrocause."""
from pathlib import Path
from typing import List, Optional, Sequence

import argparse
import logging
import sys
import numpy as np
from pydantic import ValidationError

from macrocause.config.settings import settings
from macrocause.core.coarsen import coarsen_cpt, uniform_marginal
from macrocause.core.partitions import identity_partition
from macrocause.learners.cfl_learner import run_cfl
from macrocause.learners.pcfl_learner import run_pcfl
from macrocause.models.errors import CoarseningError, InputError
from macrocause.models.schemas import (
    ClusterMethod,
    CptKind,
    EffectCoding,
    OutputFormat,
    Partition,
    Relation,
    RunConfig,
)
from macrocause.orchestration.workflow import pragmatic_pipeline
from macrocause.services.distribution_service import distribution_service
from macrocause.services.equivalence_service import equivalence_service
from macrocause.services.report_service import report_service
from macrocause.simulation.prop2 import RELATIONS, planted_refinement_probe, prop2_probe
from macrocause.simulation.scm import build_fig1_scm, sample_dataset
from macrocause.utils.csv_io import parse_matrix_csv, parse_samples_csv, write_samples_csv
from macrocause.utils.fixtures import load_expected_coarse, load_scm_tables, load_smoking

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

KINDS = {"obs": CptKind.OBSERVATIONAL, "int": CptKind.INTERVENTIONAL}


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=settings.output_format)
    common.add_argument("--out", type=Path, default=None, help="write the report (or dataset) here")
    common.add_argument("--log-level", default=settings.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    return common


def _clustering_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=[m.value for m in ClusterMethod], default=settings.cluster_method)
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--cluster-tol", type=float, default=None)
    group.add_argument("-k", dest="k_clusters", type=int, default=None)
    parser.add_argument("--knn-k", type=int, default=settings.knn_k)
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--alpha", type=float, default=settings.smoothing_alpha, help="Laplace smoothing")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="macrocause",
                                     description="Causal and pragmatic coarsening of cause/effect variables")
    sub = parser.add_subparsers(dest="command", required=True)

    exact = sub.add_parser("exact", parents=[common], help="coarsen a known CPT")
    exact.add_argument("--cpt", type=Path, required=True)
    exact.add_argument("--kind", choices=sorted(KINDS), required=True)
    exact.add_argument("--util", type=Path)
    exact.add_argument("--relation", choices=[r.value for r in Relation], required=True)
    exact.add_argument("--tol", type=float, default=settings.tolerance)

    cfl = sub.add_parser("cfl", parents=[common], help="observational coarsening from samples")
    cfl.add_argument("--data", type=Path, required=True)
    cfl.add_argument("--coding", choices=[c.value for c in EffectCoding], default=EffectCoding.NUMERIC.value)
    _clustering_flags(cfl)

    pcfl = sub.add_parser("pcfl", parents=[common], help="pragmatic coarsening from samples")
    pcfl.add_argument("--data", type=Path, required=True)
    pcfl.add_argument("--util", type=Path)
    _clustering_flags(pcfl)

    pipeline = sub.add_parser("pipeline", parents=[common], help="observational-then-interventional procedure")
    pipeline.add_argument("--joint", type=Path, required=True)
    pipeline.add_argument("--util", type=Path, required=True)
    pipeline.add_argument("--tol", type=float, default=settings.tolerance)

    simulate = sub.add_parser("simulate", parents=[common], help="sample a dataset from the two-layer SCM")
    simulate.add_argument("--scm", choices=["fig1"], default="fig1")
    simulate.add_argument("-n", type=int, default=settings.n_samples)
    simulate.add_argument("--seed", type=int, default=settings.seed)
    simulate.add_argument("--util", type=Path)

    prop2 = sub.add_parser("prop2", parents=[common], help="probe observational ties under intervention")
    prop2.add_argument("--dims", type=_int_list, required=True)
    prop2.add_argument("--trials", type=int, default=1000)
    prop2.add_argument("--eps-grid", type=_float_list, default=[1e-1, 1e-2, 1e-3, 1e-4])
    prop2.add_argument("--seed", type=int, default=settings.seed)
    prop2.add_argument("--delta", type=float, default=settings.prop2_delta)
    prop2.add_argument("--planted", action="store_true", help="plant exact ties by duplicating a cause")
    prop2.add_argument("--relation", choices=RELATIONS, default="pragmatic")

    demo = sub.add_parser("demo", parents=[common], help="reproduce the worked examples")
    demo.add_argument("name", choices=["smoking", "scm"])
    demo.add_argument("-n", type=int, default=settings.n_samples)
    demo.add_argument("--seed", type=int, default=settings.seed)
    return parser


def _run_config(args: argparse.Namespace, **overrides) -> RunConfig:
    cluster_tol = getattr(args, "cluster_tol", None)
    k_clusters = getattr(args, "k_clusters", None)
    fields = dict(
        tolerance=getattr(args, "tol", settings.tolerance),
        method=getattr(args, "method", settings.cluster_method),
        cluster_tol=settings.cluster_tol if cluster_tol is None else cluster_tol,
        k_clusters=settings.k_clusters if k_clusters is None else k_clusters,
        knn_k=getattr(args, "knn_k", settings.knn_k),
        seed=getattr(args, "seed", settings.seed),
        n_samples=getattr(args, "n", settings.n_samples),
        smoothing_alpha=getattr(args, "alpha", settings.smoothing_alpha),
        output_format=args.format,
    )
    fields.update(overrides)
    return RunConfig(**fields)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote report to {out}")


def cmd_exact(args: argparse.Namespace, config: RunConfig) -> str:
    cpt = parse_matrix_csv(args.cpt, "cpt", KINDS[args.kind])
    util = parse_matrix_csv(args.util, "utility") if args.util else None
    relation = Relation(args.relation)
    partition = equivalence_service.coarsen(relation, cpt, util, config.tolerance)
    cause_part = partition if relation.on_causes else identity_partition(cpt.cause_space)
    effect_part = identity_partition(cpt.effect_space) if relation.on_causes else partition
    coarse = coarsen_cpt(cpt, cause_part, effect_part, uniform_marginal(cpt.cause_space))
    profile = equivalence_service.expected_utilities(cpt, util) if util is not None else None
    report = report_service.build(
        f"{relation.name.lower().replace('_', ' ')} coarsening",
        cause_partition=cause_part, effect_partition=effect_part, coarse_cpt=coarse, profile=profile,
        notes=["coarse rows weight member causes uniformly"],
    )
    return report_service.emit_report(report, config.output_format)


def _cluster_config(args: argparse.Namespace, config: RunConfig, **overrides):
    if config.method is ClusterMethod.KMEANS and config.k_clusters is None:
        raise InputError("kmeans clustering needs -k")
    return config.cluster_config(**overrides)


def cmd_cfl(args: argparse.Namespace, config: RunConfig) -> str:
    data = parse_samples_csv(args.data)
    result = run_cfl(data, _cluster_config(args, config, effect_coding=EffectCoding(args.coding)))
    return report_service.emit_report(report_service.from_coarsening(result, "CFL"), config.output_format)


def cmd_pcfl(args: argparse.Namespace, config: RunConfig) -> str:
    data = parse_samples_csv(args.data)
    util = parse_matrix_csv(args.util, "utility") if args.util else None
    result = run_pcfl(data, _cluster_config(args, config), util)
    return report_service.emit_report(report_service.from_coarsening(result, "PCFL"), config.output_format)


def cmd_pipeline(args: argparse.Namespace, config: RunConfig) -> str:
    joint = distribution_service.load(args.joint)
    util = parse_matrix_csv(args.util, "utility")
    result = pragmatic_pipeline(joint, util, config.tolerance)
    profile = equivalence_service.expected_utilities(distribution_service.interventional_cpt(joint), util)
    report = report_service.from_pipeline(result, "pragmatic pipeline", profile)
    return report_service.emit_report(report, config.output_format)


def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> Optional[str]:
    if args.out is None:
        raise InputError("simulate needs --out for the dataset file")
    util = parse_matrix_csv(args.util, "utility") if args.util else None
    data = sample_dataset(build_fig1_scm(), config.n_samples, np.random.default_rng(config.seed), util)
    write_samples_csv(data, args.out)
    logger.info(f"Wrote {data.size} records to {args.out}")
    return None


def cmd_prop2(args: argparse.Namespace, config: RunConfig) -> str:
    if len(args.dims) != 3:
        raise InputError(f"--dims needs three sizes m,n,w, got {args.dims}")
    if args.planted:
        report = planted_refinement_probe(args.dims, args.trials, config.seed, args.relation)
    else:
        report = prop2_probe(args.dims, args.trials, args.eps_grid, args.delta, seed=config.seed)
    return report_service.emit_report(report, config.output_format)


def _max_gap(computed, expected) -> float:
    return float(np.abs(np.asarray(computed) - np.asarray(expected)).max())


def _labels(partition: Partition) -> str:
    return " | ".join(partition.macro_labels())


def demo_smoking(config: RunConfig) -> str:
    cpt, util = load_smoking()
    tol = config.tolerance
    profile = equivalence_service.expected_utilities(cpt, util)
    pc = equivalence_service.pragmatic_causal_coarsening(cpt, util, tol)
    pe = equivalence_service.pragmatic_effect_coarsening(util, tol)
    causal = equivalence_service.causal_coarsening(cpt, tol)
    effect = equivalence_service.effect_coarsening(cpt, tol)
    checks = [
        report_service.check("eta", 1947.05, profile.eta, abs(profile.eta - 1947.05) < 1e-9),
        report_service.check("expected utilities", "1772 | 1729.32 | 1947.05",
                             " | ".join(f"{v:.6g}" for v in profile.values),
                             _max_gap(profile.values, [1772.0, 1729.32, 1947.05]) < 1e-9),
        report_service.check("pragmatic causal classes", "Marlboro∨Other | Nothing", _labels(pc),
                             _labels(pc) == "Marlboro∨Other | Nothing"),
        report_service.check("causal classes", "Marlboro | Other | Nothing", _labels(causal),
                             causal.is_identity()),
        report_service.check("effect classes", "[0,49]∨[90,Inf] | [50,69] | [70,90]", _labels(effect),
                             _labels(effect) == "[0,49]∨[90,Inf] | [50,69] | [70,90]"),
    ]
    coarse = coarsen_cpt(cpt, pc, pe, uniform_marginal(cpt.cause_space))
    report = report_service.build("smoking decision", pc, pe, coarse, profile, checks)
    return report_service.emit_report(report, config.output_format)


def demo_scm(config: RunConfig) -> str:
    joint = build_fig1_scm()
    table4, table6 = load_scm_tables()
    obs = distribution_service.observational_cpt(joint)
    marginal = distribution_service.cause_marginal(joint)
    tol = config.tolerance
    checks = [report_service.check("observational CPT max gap", 0.0, _max_gap(obs.rows, table4.rows),
                                   _max_gap(obs.rows, table4.rows) < 1e-6)]

    exact = {
        "cfl": (equivalence_service.observational_causal_coarsening(obs, tol),
                equivalence_service.observational_effect_coarsening(obs, tol)),
        "pcfl": (equivalence_service.observational_pragmatic_causal_coarsening(obs, table6, tol),
                 equivalence_service.pragmatic_effect_coarsening(table6, tol)),
    }
    data = sample_dataset(joint, config.n_samples, np.random.default_rng(config.seed), table6)
    sampled = {
        "cfl": run_cfl(data, config.cluster_config(method=ClusterMethod.TOLERANCE_LINK, cluster_tol=0.05,
                                                   effect_coding=EffectCoding.ONEHOT)),
        "pcfl": run_pcfl(data, config.cluster_config(method=ClusterMethod.TOLERANCE_LINK, cluster_tol=0.5)),
    }
    for name, (cause_part, effect_part) in exact.items():
        expected = load_expected_coarse(name)
        coarse = coarsen_cpt(obs, cause_part, effect_part, marginal)
        checks.append(report_service.check(f"{name} exact coarse CPT max gap", 0.0,
                                           _max_gap(coarse.rows, expected.rows),
                                           coarse.cause_space == expected.cause_space
                                           and _max_gap(coarse.rows, expected.rows) < 1e-9))
        result = sampled[name]
        same = (report_service.matches_exact(result.cause_partition, cause_part)
                and report_service.matches_exact(result.effect_partition, effect_part))
        checks.append(report_service.check(f"{name} sampled classes",
                                           f"{_labels(cause_part)} / {_labels(effect_part)}",
                                           f"{_labels(result.cause_partition)} / {_labels(result.effect_partition)}",
                                           same))
        if same and result.coarse_cpt.cause_space == expected.cause_space:
            gap = _max_gap(result.coarse_cpt.rows, expected.rows)
            checks.append(report_service.check(f"{name} sampled coarse CPT max gap", 0.0, gap, gap <= 0.03))

    report = report_service.build(f"two-layer SCM ({config.n_samples} samples, seed {config.seed})",
                                  checks=checks)
    return report_service.emit_report(report, config.output_format)


def cmd_demo(args: argparse.Namespace, config: RunConfig) -> str:
    return demo_smoking(config) if args.name == "smoking" else demo_scm(config)


COMMANDS = {
    "exact": cmd_exact,
    "cfl": cmd_cfl,
    "pcfl": cmd_pcfl,
    "pipeline": cmd_pipeline,
    "simulate": cmd_simulate,
    "prop2": cmd_prop2,
    "demo": cmd_demo,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns 0 on success and 2 on invalid input."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        config = _run_config(args)
        text = COMMANDS[args.command](args, config)
    except (CoarseningError, ValidationError, FileNotFoundError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 2

    if text is not None:
        _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
