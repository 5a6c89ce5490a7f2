from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from bayesmix.config import settings
from bayesmix.models.prior import (
    DynamicGamma,
    FixedGamma,
    FixedK,
    GammaSpec,
    KPrior,
    RandomK,
    SparseK,
)
from bayesmix.schemas.chain import ChainConfig, SamplerMode


class BnbParams(BaseModel):
    a_l: float = Field(default=1.0, gt=0)
    a_pi: float = Field(default=4.0, gt=0)
    b_pi: float = Field(default=3.0, gt=0)

    @classmethod
    def parse(cls, text: str) -> "BnbParams":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'a_l,a_pi,b_pi', got '{text}'")
        return cls(a_l=float(parts[0]), a_pi=float(parts[1]), b_pi=float(parts[2]))


class FitConfig(BaseModel):
    """Fully resolved configuration of a `fit` run; echoed verbatim into the run manifest."""

    mode: SamplerMode = SamplerMode.FIXED_K
    k: int = Field(default=3, ge=1)
    gamma: float | None = Field(default=None, gt=0)
    alpha: float | None = Field(default=None, gt=0)
    bnb: BnbParams = Field(default_factory=BnbParams)
    k_max: int = Field(default_factory=lambda: settings.k_max, ge=1)

    c: float = Field(default=2.5, gt=0)
    phi: float = Field(default=0.75, gt=0)

    iters: int = Field(default=30000, ge=1)
    burnin: int = Field(default=5000, ge=0)
    thinning: int = Field(default=1, ge=1)
    seed: int = Field(default=1, ge=0)
    store_assignments: bool = True
    permutation_step: bool = False
    chains: int = Field(default=1, ge=1)

    columns: list[str] | None = None
    label_col: str | None = None

    @field_validator("bnb", mode="before")
    @classmethod
    def _parse_bnb(cls, value: Any) -> Any:
        return BnbParams.parse(value) if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_mode(self) -> "FitConfig":
        if self.burnin >= self.iters:
            raise ValueError(f"burnin ({self.burnin}) must be smaller than iters ({self.iters})")
        if self.mode is SamplerMode.TELESCOPING:
            if self.gamma is not None and self.alpha is not None:
                raise ValueError("give either gamma (static MFM) or alpha (dynamic MFM), not both")
            if self.k > self.k_max:
                raise ValueError(f"starting k ({self.k}) exceeds k_max ({self.k_max})")
        elif self.alpha is not None:
            raise ValueError(f"alpha only applies to mode '{SamplerMode.TELESCOPING}'")
        return self

    def gamma_spec(self) -> GammaSpec:
        match self.mode:
            case SamplerMode.FIXED_K:
                return FixedGamma(self.gamma if self.gamma is not None else 1.0)
            case SamplerMode.SFM:
                return FixedGamma(self.gamma if self.gamma is not None else 0.01)
            case SamplerMode.TELESCOPING:
                if self.gamma is not None:
                    return FixedGamma(self.gamma)
                return DynamicGamma(self.alpha if self.alpha is not None else 0.5)

    def k_prior(self) -> KPrior:
        match self.mode:
            case SamplerMode.FIXED_K:
                return FixedK(self.k)
            case SamplerMode.SFM:
                return SparseK(self.k, self.gamma if self.gamma is not None else 0.01)
            case SamplerMode.TELESCOPING:
                return RandomK(self.bnb.a_l, self.bnb.a_pi, self.bnb.b_pi, self.k_max)

    def chain_config(self, chain_index: int = 0) -> ChainConfig:
        return ChainConfig(
            n_iter=self.iters,
            burn_in=self.burnin,
            seed=self.seed + chain_index,
            store_assignments=self.store_assignments,
            permutation_step=self.permutation_step,
            thinning=self.thinning,
        )

    @classmethod
    def resolve(cls, file_values: dict[str, Any], overrides: dict[str, Any]) -> "FitConfig":
        """Defaults < config file < command-line flags (flags left as None do not override)."""
        merged = dict(file_values)
        merged.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(merged)
