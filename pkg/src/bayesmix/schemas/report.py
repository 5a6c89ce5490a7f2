from pydantic import BaseModel, Field


class IdentificationReport(BaseModel):
    K_plus: int
    K_plus_distribution: dict[int, float]
    functional: str
    n_eligible: int
    n_selected: int
    n_kept: int
    non_permutation_rate: float
    map_partition_sizes: list[int] = Field(default_factory=list)
    vi_partition_sizes: list[int] = Field(default_factory=list)
    artifact_paths: dict[str, str] = Field(default_factory=dict)


class MetricsReport(BaseModel):
    ari: float
    mcr: float
    n_observations: int
    truth_groups: list[str]
    estimated_groups: list[str]
    confusion: list[list[int]]
