from functools import lru_cache

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from IwasawaLambda.logger import log


class AppSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # --- p-adic ---
    prec: int = Field(default=8, alias="LAMBDA_PREC")

    # --- Enumeration ---
    enum_budget: int = Field(default=10**12, alias="LAMBDA_ENUM_BUDGET")

    # --- Cohomology budgets ---
    max_group_order: int = Field(default=243, alias="LAMBDA_MAX_GROUP_ORDER")
    max_h2_order: int = Field(default=27, alias="LAMBDA_MAX_H2_ORDER")
    max_module_dim: int = Field(default=6, alias="LAMBDA_MAX_MODULE_DIM")

    # --- Cyclotomic layer / unipotent groups ---
    period_degree_cap: int = Field(default=13, alias="LAMBDA_PERIOD_DEGREE_CAP")
    max_matrix_size: int = Field(default=6, alias="LAMBDA_MAX_MATRIX_SIZE")

    # --- Sweep ---
    sweep_workers: int = Field(default=4, alias="LAMBDA_SWEEP_WORKERS")

    # --- Randomized checks ---
    random_seed: int = Field(default=20240917, alias="LAMBDA_RANDOM_SEED")

    @field_validator("prec")
    @classmethod
    def validate_prec(cls, v: int) -> int:
        if v < 3:
            raise ValueError("LAMBDA_PREC must be at least 3.")
        return v

    @field_validator("enum_budget", "max_group_order", "max_h2_order", "max_module_dim", "max_matrix_size")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("budget values must be positive.")
        return v

    @field_validator("period_degree_cap")
    @classmethod
    def validate_degree_cap(cls, v: int) -> int:
        if v < 3:
            raise ValueError("LAMBDA_PERIOD_DEGREE_CAP must be at least 3.")
        return v

    @field_validator("sweep_workers")
    @classmethod
    def validate_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("LAMBDA_SWEEP_WORKERS must be at least 1.")
        return v


@lru_cache(maxsize=1)
def get_settings() -> AppSettings:
    try:
        s = AppSettings()
    except ValidationError as e:
        for err in e.errors():
            field = err.get("loc", ("unknown",))[-1]
            msg = err.get("msg", "unknown error")
            log.error("Configuration error", field=field, detail=msg)
        log.error("Failed to load settings. Check your .env file or environment variables.")
        raise SystemExit(1)
    log.debug(
        "Initialized IwasawaLambda with",
        prec=s.prec,
        enum_budget=s.enum_budget,
        max_group_order=s.max_group_order,
        max_h2_order=s.max_h2_order,
        period_degree_cap=s.period_degree_cap,
        sweep_workers=s.sweep_workers,
    )
    return s


settings = get_settings()
