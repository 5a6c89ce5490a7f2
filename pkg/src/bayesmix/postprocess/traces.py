import pandas as pd

from bayesmix.pipeline.records import ChainOutput


def trace_series(chain: ChainOutput) -> pd.DataFrame:
    """Long-format (iter, series, value) rows for K, K_plus, log_lik and per-component
    eta_k, mu_k_1 and N_k (components 1-based)."""
    rows: list[tuple[int, str, float]] = []
    for rec in chain.records:
        rows.append((rec.iter, "K", float(rec.K)))
        rows.append((rec.iter, "K_plus", float(rec.K_plus)))
        rows.append((rec.iter, "log_lik", rec.log_lik))
        for k in range(rec.K):
            rows.append((rec.iter, f"eta_{k + 1}", float(rec.eta[k])))
            rows.append((rec.iter, f"mu_{k + 1}_1", float(rec.mu[k, 0])))
            rows.append((rec.iter, f"N_{k + 1}", float(rec.N_k[k])))
    return pd.DataFrame(rows, columns=["iter", "series", "value"])
