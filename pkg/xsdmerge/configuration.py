# Configuration for the matching and integration pipeline

import logging
import os
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

ENV_PREFIX = "XSDMERGE_"


class Configuration(BaseModel):
    # Matching Configuration
    thesaurus: Optional[str] = Field(
        default=None,
        description="Path of the TSV thesaurus; when unset only identical names are synonymous",
    )
    severity: int = Field(
        default=0,
        ge=0,
        description="Default severity level used when a command does not pass one",
    )
    max_workers: int = Field(
        default=4,
        ge=1,
        le=32,
        description="Worker threads used to scan instance documents and evaluate candidate pairs",
    )
    # Integration Configuration
    root_name: str = Field(
        default="root",
        min_length=1,
        description="Name of the synthetic root created when the two roots are not merged",
    )
    rename_suffix_start: int = Field(
        default=2,
        ge=2,
        description="First numeric suffix tried when renaming a homonymous S2 component",
    )
    # Logging
    log_level: str = Field(
        default="INFO",
        description="Level passed to logging.basicConfig by the entry points",
    )

    @classmethod
    def from_environment(cls, **overrides: Any) -> "Configuration":
        """Build a Configuration from .env, XSDMERGE_* variables and explicit overrides.

        Overrides whose value is None are ignored so that unset CLI flags fall back to the
        environment.
        """
        load_dotenv()
        values: dict[str, Any] = {}
        for field_name in cls.model_fields:
            env_value = os.environ.get(f"{ENV_PREFIX}{field_name.upper()}")
            if env_value is not None and env_value != "":
                values[field_name] = env_value
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def configure_logging(self) -> None:
        logging.basicConfig(
            level=getattr(logging, self.log_level.upper(), logging.INFO),
            format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        )
