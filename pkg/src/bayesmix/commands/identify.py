from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from bayesmix.postprocess.identify import (
    IdentifiedDraws,
    PosteriorSummary,
    posterior_summary,
    ppr_identify,
)
from bayesmix.postprocess.kplus import filter_to_kplus, kplus_distribution, kplus_mode
from bayesmix.postprocess.partition import (
    Partition,
    coallocation_matrix,
    map_partition,
    vi_partition,
)
from bayesmix.schemas.chain import SamplerMode
from bayesmix.schemas.report import IdentificationReport
from bayesmix.services.chain_store import ASSIGNMENTS_NAME, read_chain
from bayesmix.services.manifest import read_manifest

log = structlog.get_logger()


@dataclass
class IdentifyResult:
    report: IdentificationReport
    identified: IdentifiedDraws
    summary: PosteriorSummary
    feature_names: list[str] | None
    map_partition: Partition | None = None
    vi_partition: Partition | None = None


def _write_partition(partition: Partition, path: Path) -> str:
    pd.DataFrame({"cluster": partition.labels}).to_csv(path, index=False)
    log.info("artifact_written", kind="partition", path=str(path))
    return str(path)


def cmd_identify(
    draws_path: str | Path,
    out_dir: str | Path | None = None,
    kplus: str | int = "auto",
    functional: str = "mu",
    seed: int = 1,
) -> IdentifyResult:
    """Select K+, relabel by ppr and write summaries and partitions.

    Reads ``assignments.csv`` and ``manifest.json`` from the directory of the draws file when
    they exist; partitions and the co-allocation matrix need the assignments.
    """
    draws_path = Path(draws_path)
    run_dir = draws_path.parent
    out_dir = Path(out_dir) if out_dir is not None else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = read_manifest(run_dir)
    mode = SamplerMode(manifest.config_echo["mode"]) if manifest else None
    assignments_path = run_dir / ASSIGNMENTS_NAME
    chain = read_chain(
        draws_path, assignments_path if assignments_path.exists() else None, mode=mode
    )

    distribution = kplus_distribution(chain)
    k_plus = kplus_mode(distribution) if kplus == "auto" else int(kplus)
    filtered = filter_to_kplus(chain, k_plus)
    identified = ppr_identify(filtered, np.random.default_rng(seed), functional)
    summary = posterior_summary(identified)
    feature_names = manifest.feature_names if manifest else None

    artifacts: dict[str, str] = {}
    kplus_path = out_dir / "kplus.csv"
    pd.DataFrame(
        {"K_plus": list(distribution), "frequency": list(distribution.values())}
    ).to_csv(kplus_path, index=False)
    artifacts["kplus"] = str(kplus_path)
    summary_path = out_dir / "summary.csv"
    summary.to_frame(feature_names).to_csv(summary_path)
    artifacts["summary"] = str(summary_path)
    draws_out = out_dir / "identified_draws.csv"
    identified.to_frame(feature_names).to_csv(draws_out, index=False)
    artifacts["identified_draws"] = str(draws_out)

    result_map = result_vi = None
    if identified.S is not None:
        result_map = map_partition(identified.S)
        artifacts["partition_map"] = _write_partition(result_map, out_dir / "partition_map.csv")
        all_S = np.stack([rec.S for rec in chain.records if rec.S is not None])
        coalloc_path = out_dir / "coallocation.csv"
        coalloc = coallocation_matrix(all_S)
        pd.DataFrame(coalloc, columns=[f"j_{j + 1}" for j in range(coalloc.shape[1])]).to_csv(
            coalloc_path, index=False
        )
        artifacts["coallocation"] = str(coalloc_path)
        if all_S.shape[0] >= 2:
            result_vi = vi_partition(all_S)
            artifacts["partition_vi"] = _write_partition(result_vi, out_dir / "partition_vi.csv")

    report = IdentificationReport(
        K_plus=k_plus,
        K_plus_distribution=distribution,
        functional=functional,
        n_eligible=filtered.n_eligible,
        n_selected=filtered.M,
        n_kept=int(identified.kept_sweeps.size),
        non_permutation_rate=identified.non_permutation_rate,
        map_partition_sizes=result_map.sizes().tolist() if result_map else [],
        vi_partition_sizes=result_vi.sizes().tolist() if result_vi else [],
        artifact_paths=artifacts,
    )
    report_path = out_dir / "identification.json"
    report.artifact_paths["report"] = str(report_path)
    report_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    log.info("artifact_written", kind="report", path=str(report_path))
    return IdentifyResult(
        report=report,
        identified=identified,
        summary=summary,
        feature_names=feature_names,
        map_partition=result_map,
        vi_partition=result_vi,
    )
