"""CSV persistence of chain output.

``draws.csv`` holds one row per stored sweep: iter, K, K_plus, eta_k, mu_k_j (row-major),
Sigma_k_a_b (lower triangle, a >= b), N_k and log_lik, with components and variables numbered
from 1. Columns run up to the largest K of the chain; a row leaves the cells beyond its own K
empty. ``assignments.csv`` holds iter and s_1..s_N (1-based component labels).
"""

from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from bayesmix.errors import DataIngestionError, PreconditionError
from bayesmix.pipeline.records import ChainOutput, SweepRecord
from bayesmix.postprocess.traces import trace_series
from bayesmix.schemas.chain import ChainConfig, SamplerMode
from bayesmix.services.data_loader import read_csv_frame

log = structlog.get_logger()

DRAWS_NAME = "draws.csv"
ASSIGNMENTS_NAME = "assignments.csv"
TRACES_NAME = "traces.csv"


def _tril(r: int) -> tuple[np.ndarray, np.ndarray]:
    return np.tril_indices(r)


def draws_columns(K: int, r: int) -> dict[str, list[str]]:
    rows, cols = _tril(r)
    return {
        "eta": [f"eta_{k + 1}" for k in range(K)],
        "mu": [f"mu_{k + 1}_{j + 1}" for k in range(K) for j in range(r)],
        "Sigma": [
            f"Sigma_{k + 1}_{a + 1}_{b + 1}"
            for k in range(K)
            for a, b in zip(rows, cols, strict=True)
        ],
        "N": [f"N_{k + 1}" for k in range(K)],
    }


def draws_frame(chain: ChainOutput) -> pd.DataFrame:
    if not chain.records:
        raise PreconditionError("chain has no stored sweeps")
    K_max = max(rec.K for rec in chain.records)
    r = chain.r
    M = len(chain.records)
    rows, cols = _tril(r)
    n_tri = rows.size
    eta = np.full((M, K_max), np.nan)
    mu = np.full((M, K_max * r), np.nan)
    Sigma = np.full((M, K_max * n_tri), np.nan)
    N = np.zeros((M, K_max), dtype=np.int64)
    N_missing = np.ones((M, K_max), dtype=bool)
    for m, rec in enumerate(chain.records):
        K = rec.K
        eta[m, :K] = rec.eta
        mu[m, : K * r] = rec.mu.reshape(-1)
        Sigma[m, : K * n_tri] = rec.Sigma[:, rows, cols].reshape(-1)
        N[m, :K] = rec.N_k
        N_missing[m, :K] = False

    names = draws_columns(K_max, r)
    frame = pd.DataFrame(
        {
            "iter": [rec.iter for rec in chain.records],
            "K": [rec.K for rec in chain.records],
            "K_plus": [rec.K_plus for rec in chain.records],
        }
    )
    blocks = [
        pd.DataFrame(eta, columns=names["eta"]),
        pd.DataFrame(mu, columns=names["mu"]),
        pd.DataFrame(Sigma, columns=names["Sigma"]),
        pd.DataFrame(N, columns=names["N"]).astype("Int64").mask(N_missing),
        pd.DataFrame({"log_lik": [rec.log_lik for rec in chain.records]}),
    ]
    return pd.concat([frame, *blocks], axis=1)


def assignments_frame(chain: ChainOutput) -> pd.DataFrame:
    S = np.stack([rec.S for rec in chain.records if rec.S is not None]) + 1
    frame = pd.DataFrame(S, columns=[f"s_{i + 1}" for i in range(S.shape[1])])
    frame.insert(0, "iter", [rec.iter for rec in chain.records])
    return frame


def write_chain(chain: ChainOutput, out_dir: str | Path) -> dict[str, str]:
    """Write draws, traces and (when stored) assignments; returns the artifact map."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {
        "draws": out_dir / DRAWS_NAME,
        "traces": out_dir / TRACES_NAME,
    }
    draws_frame(chain).to_csv(artifacts["draws"], index=False)
    trace_series(chain).to_csv(artifacts["traces"], index=False)
    if chain.has_assignments:
        artifacts["assignments"] = out_dir / ASSIGNMENTS_NAME
        assignments_frame(chain).to_csv(artifacts["assignments"], index=False)
    for kind, path in artifacts.items():
        log.info("artifact_written", kind=kind, path=str(path))
    return {kind: str(path) for kind, path in artifacts.items()}


def _infer_config(iters: np.ndarray, store_assignments: bool) -> ChainConfig:
    thinning = int(iters[1] - iters[0]) if iters.size > 1 else 1
    return ChainConfig(
        n_iter=int(iters[-1]),
        burn_in=max(int(iters[0]) - thinning, 0),
        thinning=thinning,
        store_assignments=store_assignments,
    )


def read_chain(
    draws_path: str | Path,
    assignments_path: str | Path | None = None,
    mode: SamplerMode | None = None,
    config: ChainConfig | None = None,
) -> ChainOutput:
    """Rebuild a ChainOutput from ``draws.csv`` (and ``assignments.csv``)."""
    draws_path = Path(draws_path)
    frame = read_csv_frame(draws_path)
    required = {"iter", "K", "K_plus", "log_lik"}
    if not required <= set(frame.columns):
        missing = sorted(required - set(frame.columns))
        raise DataIngestionError(str(draws_path), f"missing columns {missing}")
    r = sum(1 for c in frame.columns if str(c).startswith("mu_1_"))
    if r == 0:
        raise DataIngestionError(str(draws_path), "no mean columns")
    rows, cols = _tril(r)

    S_all = None
    if assignments_path is not None:
        assignments = read_csv_frame(Path(assignments_path))
        if not np.array_equal(assignments["iter"].to_numpy(), frame["iter"].to_numpy()):
            raise DataIngestionError(str(assignments_path), "iterations do not match the draws")
        S_all = assignments.drop(columns="iter").to_numpy(dtype=np.int64) - 1

    records = []
    for m, values in enumerate(frame.to_dict(orient="records")):
        K = int(values["K"])
        names = draws_columns(K, r)
        try:
            eta = np.array([values[c] for c in names["eta"]], dtype=float)
            mu = np.array([values[c] for c in names["mu"]], dtype=float).reshape(K, r)
            tri = np.array([values[c] for c in names["Sigma"]], dtype=float).reshape(K, -1)
            N_k = np.array([values[c] for c in names["N"]], dtype=float)
        except KeyError as e:
            raise DataIngestionError(str(draws_path), f"row {m + 1}: missing column {e}") from None
        if np.isnan(eta).any() or np.isnan(mu).any() or np.isnan(N_k).any():
            raise DataIngestionError(str(draws_path), f"row {m + 1}: empty cell within K = {K}")
        Sigma = np.zeros((K, r, r))
        Sigma[:, rows, cols] = tri
        Sigma[:, cols, rows] = tri
        records.append(
            SweepRecord(
                iter=int(values["iter"]),
                K=K,
                K_plus=int(values["K_plus"]),
                eta=eta,
                mu=mu,
                Sigma=Sigma,
                N_k=N_k.astype(np.int64),
                S=S_all[m] if S_all is not None else None,
                log_lik=float(values["log_lik"]),
            )
        )

    iters = frame["iter"].to_numpy()
    if mode is None:
        mode = SamplerMode.TELESCOPING if frame["K"].nunique() > 1 else SamplerMode.FIXED_K
    return ChainOutput(
        records=records,
        config=config or _infer_config(iters, S_all is not None),
        mode=mode,
    )
