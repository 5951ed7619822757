"""
Experiment configuration schema.
A single TOML file describes the fixture, the triple, the test cases, the
step-size grid, the output and the bound tolerances; unknown keys are rejected.
"""

import sys
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

ComplexLike = Union[float, Tuple[float, float]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PieceSpec(StrictModel):
    """One constant piece of a step function."""

    duration: float = Field(..., gt=0)
    value: List[ComplexLike] = Field(..., min_length=1)


class TestCaseSpec(StrictModel):
    """Matrix element <e(f), l_t(a) e(g)>; f, g default to zero, a is a label, 'unit' or a coefficient vector."""

    __test__ = False

    name: str = Field(..., min_length=1)
    f: List[PieceSpec] = Field(default_factory=list)
    g: List[PieceSpec] = Field(default_factory=list)
    t: float = Field(..., ge=0)
    a: Union[str, List[ComplexLike]]


class TripleSpec(StrictModel):
    """Exactly one of: a named preset, a triple JSON file, or inline rep + xi."""

    preset: Optional[str] = None
    file: Optional[Path] = None
    rep: Optional[Any] = None
    xi: Optional[Any] = None

    @model_validator(mode="after")
    def check_one_source(self) -> "TripleSpec":
        inline = self.rep is not None or self.xi is not None
        if inline and (self.rep is None or self.xi is None):
            raise ValueError("Inline triples need both rep and xi")
        sources = sum([self.preset is not None, self.file is not None, inline])
        if sources != 1:
            raise ValueError("Give exactly one of preset, file, or rep + xi")
        return self

    def describe(self) -> str:
        if self.preset is not None:
            return self.preset
        if self.file is not None:
            return str(self.file)
        return "inline"


class GridSpec(StrictModel):
    """h_j = base * 2^{-j}, base defaulting to 1/lambda."""

    j_min: int = Field(default=3, ge=0)
    j_max: int = Field(default=10, ge=0)
    base: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_range(self) -> "GridSpec":
        if self.j_max < self.j_min:
            raise ValueError("j_max must be >= j_min")
        return self


class OutputSpec(StrictModel):
    path: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"


class WalkSpec(StrictModel):
    """kappa_n table for the `walk` command."""

    h: float = Field(..., gt=0)
    n: int = Field(..., ge=0)
    every: int = Field(default=1, ge=1, description="Print every m-th step")


class BoundsSpec(StrictModel):
    """Expected block-error slopes for `beta-bounds`."""

    e3_slope: float = 1.5
    e4_slope: float = 1.0
    slope_tol: float = Field(default=0.2, gt=0)
    min_r_squared: float = Field(default=0.99, ge=0, le=1)


class ExperimentConfig(StrictModel):
    """Top-level experiment file."""

    name: str = Field(..., min_length=1)
    fixture: str = Field(..., description="Fixture path or builtin 'group:<G>' / 'function:<G>'")
    triple: TripleSpec
    testcases: List[TestCaseSpec] = Field(default_factory=list)
    observables: List[Union[str, List[ComplexLike]]] = Field(
        default_factory=list, description="Observables for semigroup/walk tables (default: basis)"
    )
    grid: GridSpec = Field(default_factory=GridSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    walk: Optional[WalkSpec] = None
    bounds: BoundsSpec = Field(default_factory=BoundsSpec)
    seed: Optional[int] = None
    dense_cap: Optional[int] = Field(default=None, ge=1)
    jobs: int = Field(default=1, ge=1)
    samples: Optional[int] = Field(default=None, ge=0)

    @field_validator("fixture")
    @classmethod
    def check_fixture(cls, v: str, info: ValidationInfo) -> str:
        """Builtin references pass; paths must exist (relative to the config file)."""
        kind, _, group = v.partition(":")
        if kind in {"group", "function"} and group:
            return v
        return str(_existing_path(Path(v), info))

    @field_validator("triple")
    @classmethod
    def check_triple_file(cls, v: TripleSpec, info: ValidationInfo) -> TripleSpec:
        if v.file is not None:
            v.file = _existing_path(v.file, info)
        return v

    @field_validator("testcases")
    @classmethod
    def check_unique_names(cls, v: List[TestCaseSpec]) -> List[TestCaseSpec]:
        names = [case.name for case in v]
        if len(set(names)) != len(names):
            raise ValueError("Test case names must be unique")
        return v


def _existing_path(path: Path, info: ValidationInfo) -> Path:
    base_dir = (info.context or {}).get("base_dir")
    candidates = [path]
    if base_dir is not None and not path.is_absolute():
        candidates.append(Path(base_dir) / path)
    for candidate in candidates:
        if candidate.exists():
            return candidate
    raise ValueError(f"Referenced file does not exist: {path}")


class ConfigError(Exception):
    """Raised when an experiment file cannot be read or does not match the schema."""
    pass


def load_experiment(path: Path) -> ExperimentConfig:
    """
    Parse and validate an experiment TOML file.

    Raises:
        ConfigError: On I/O, TOML or schema errors
    """
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"Failed to read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML in {path}: {e}") from e
    try:
        return ExperimentConfig.model_validate(data, context={"base_dir": path.parent})
    except ValueError as e:
        raise ConfigError(f"Invalid config {path}: {e}") from e
