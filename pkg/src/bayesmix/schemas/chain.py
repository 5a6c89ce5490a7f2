from enum import StrEnum

from pydantic import BaseModel, Field, model_validator


class SamplerMode(StrEnum):
    FIXED_K = "fixed-k"
    SFM = "sfm"
    TELESCOPING = "mfm"


class ChainConfig(BaseModel):
    n_iter: int = Field(default=30000, ge=1)
    burn_in: int = Field(default=5000, ge=0)
    seed: int = Field(default=1, ge=0)
    store_assignments: bool = True
    permutation_step: bool = False
    thinning: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_burn_in(self) -> "ChainConfig":
        if self.burn_in >= self.n_iter:
            raise ValueError(
                f"burn_in ({self.burn_in}) must be smaller than n_iter ({self.n_iter})"
            )
        return self

    @property
    def n_stored(self) -> int:
        return (self.n_iter - self.burn_in) // self.thinning

    def stores(self, iteration: int) -> bool:
        """Whether the sweep with 1-based index ``iteration`` is kept."""
        kept = iteration - self.burn_in
        return kept > 0 and kept % self.thinning == 0

    model_config = {"frozen": True}
