from pathlib import Path

import structlog

from bayesmix.postprocess.metrics import ConfusionTable, ari, confusion_and_mcr
from bayesmix.postprocess.partition import Partition
from bayesmix.schemas.report import MetricsReport
from bayesmix.services.data_loader import load_labels

log = structlog.get_logger()


def cmd_evaluate(
    partition_path: str | Path,
    truth_path: str | Path,
    label_col: str = "class",
    partition_col: str | None = None,
    out_path: str | Path | None = None,
) -> tuple[MetricsReport, ConfusionTable]:
    """Compare an estimated partition with true classes; writes ``metrics.json``."""
    estimated = Partition.from_labels(load_labels(partition_path, partition_col))
    truth = Partition.from_labels(load_labels(truth_path, label_col))
    score = ari(estimated, truth)
    confusion = confusion_and_mcr(estimated, truth)
    report = MetricsReport(
        ari=score,
        mcr=confusion.mcr,
        n_observations=truth.N,
        truth_groups=confusion.row_labels,
        estimated_groups=confusion.col_labels,
        confusion=confusion.table.tolist(),
    )
    out = Path(out_path) if out_path else Path(partition_path).with_name("metrics.json")
    out.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    log.info("artifact_written", kind="metrics", path=str(out), ari=score, mcr=confusion.mcr)
    return report, confusion
