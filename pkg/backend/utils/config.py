"""
Configuration
Analysis settings from a YAML file, command-line overrides and optional
environment defaults (.env is honoured through python-dotenv).

Precedence: command line > YAML file > environment > built-in defaults.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Set

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from zipflaws.binning import RemainderPolicy
from zipflaws.errors import ConfigError
from zipflaws.lexicon import DEFAULT_DELIMITER, DEFAULT_EXCLUDED_TAGS, TokenFilterConfig
from zipflaws.regimes import DEFAULT_MIN_SEGMENT, BreakpointStrategy

load_dotenv()

PATH_FIELDS = ("frequencies", "tokens", "meanings", "output_dir")


class RegimeMode(str, Enum):
    ONE = "one"
    TWO = "two"
    BOTH = "both"


class OutputFormat(str, Enum):
    REPORT = "report"
    PLOT_DATA = "plot-data"
    FIGURES = "figures"


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    frequencies: Optional[Path] = None
    tokens: Optional[Path] = None
    meanings: Path
    excluded_tags: List[str] = Field(default_factory=lambda: sorted(DEFAULT_EXCLUDED_TAGS))
    delimiter: str = DEFAULT_DELIMITER

    bin_sizes: List[int] = Field(default_factory=list)
    include_raw: bool = True
    remainder_policy: RemainderPolicy = RemainderPolicy.STRICT

    regimes: RegimeMode = RegimeMode.BOTH
    strategy: BreakpointStrategy = BreakpointStrategy.FIRST_LOCAL_MIN
    manual_split: Optional[int] = None
    min_segment: int = Field(default=DEFAULT_MIN_SEGMENT, ge=2)

    output_dir: Path = Path("zipflaws_output")
    formats: Set[OutputFormat] = Field(default_factory=lambda: set(OutputFormat))
    delta_tolerance: float = Field(default=0.02, ge=0)
    run_name: str = "analysis"

    @field_validator("bin_sizes")
    @classmethod
    def _positive_bin_sizes(cls, value: List[int]) -> List[int]:
        for size in value:
            if size < 1:
                raise ValueError(f"bin sizes must be at least 1, got {size}")
        return value

    @model_validator(mode="after")
    def _check_sources(self) -> "AnalysisConfig":
        if (self.frequencies is None) == (self.tokens is None):
            raise ValueError("give exactly one corpus source: a frequency file or a token file")
        if self.strategy is BreakpointStrategy.MANUAL and self.manual_split is None:
            raise ValueError("manual breakpoint strategy needs manual_split")
        if not self.delimiter:
            raise ValueError("delimiter must not be empty")
        return self

    @property
    def token_filter(self) -> TokenFilterConfig:
        return TokenFilterConfig(excluded_tags=frozenset(self.excluded_tags))

    @property
    def analyse_raw(self) -> bool:
        # no bin sizes means raw only
        return self.include_raw or not self.bin_sizes

    @property
    def wants_one_regime(self) -> bool:
        return self.regimes in (RegimeMode.ONE, RegimeMode.BOTH)

    @property
    def wants_two_regimes(self) -> bool:
        return self.regimes in (RegimeMode.TWO, RegimeMode.BOTH)


def environment_defaults() -> Dict[str, Any]:
    defaults: Dict[str, Any] = {}
    if os.getenv("ZIPFLAWS_OUTPUT_DIR"):
        defaults["output_dir"] = os.getenv("ZIPFLAWS_OUTPUT_DIR")
    if os.getenv("ZIPFLAWS_MIN_SEGMENT"):
        defaults["min_segment"] = os.getenv("ZIPFLAWS_MIN_SEGMENT")
    return defaults


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Flatten the sectioned YAML file into AnalysisConfig keys. Relative paths
    are resolved against the file's directory.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e.strerror}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from None
    if not isinstance(document, Mapping):
        raise ConfigError(f"{path}: configuration must be a mapping")
    flat: Dict[str, Any] = {}
    for key, value in document.items():
        if isinstance(value, Mapping):
            flat.update(value)
        else:
            flat[key] = value
    base = Path(path).parent
    for key in PATH_FIELDS:
        if flat.get(key) is not None and not Path(flat[key]).is_absolute():
            flat[key] = str(base / flat[key])
    return flat


def load_analysis_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> AnalysisConfig:
    values = environment_defaults()
    if path is not None:
        values.update(read_config_file(Path(path)))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    try:
        return AnalysisConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {validation_message(e)}") from None


def validation_message(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in error.errors()
    )
