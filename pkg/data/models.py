"""
Data models for validation reports, sweeps and fits using Pydantic.
Provides validation, serialization, and type safety.
"""

from enum import Enum
from typing import List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator


class Axiom(str, Enum):
    """Bialgebra axioms checked by validate_bialgebra."""
    ASSOCIATIVITY = "associativity"
    UNIT = "unit"
    INVOLUTION = "involution"
    COUNIT_HOMOMORPHISM = "counit_homomorphism"
    COPRODUCT_HOMOMORPHISM = "coproduct_homomorphism"
    COASSOCIATIVITY = "coassociativity"
    COUNIT_LAW = "counit_law"
    FAITHFUL_REPRESENTATION = "faithful_representation"

    def display_name(self) -> str:
        """Get human-readable axiom name."""
        return self.value.replace("_", " ").title()


class AxiomResidual(BaseModel):
    """Max absolute residual of one axiom."""

    axiom: Axiom
    residual: float = Field(..., ge=0)
    passed: bool


class ValidationReport(BaseModel):
    """Residual table of a bialgebra validation run."""

    name: str = Field(default="", description="Fixture name or path")
    dim: int = Field(..., ge=1)
    tol: float = Field(..., gt=0)
    residuals: List[AxiomResidual]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    def residual(self, axiom: Axiom) -> float:
        """Residual of a single axiom."""
        for r in self.residuals:
            if r.axiom == axiom:
                return r.residual
        raise KeyError(axiom)

    def failing(self) -> List[Axiom]:
        """Axioms whose residual exceeds the tolerance."""
        return [r.axiom for r in self.residuals if not r.passed]


class SweepRecord(BaseModel):
    """Walk-vs-oracle comparison at one step size."""

    h: float = Field(..., description="Step size; only failed entries may carry h <= 0")
    n: int = Field(..., ge=0, description="floor(t/h)")
    walk_re: Optional[float] = None
    walk_im: Optional[float] = None
    oracle_re: Optional[float] = None
    oracle_im: Optional[float] = None
    abs_error: Optional[float] = None
    wall_time_us: int = Field(default=0, ge=0)
    error: Optional[str] = Field(default=None, description="Per-entry failure, e.g. inadmissible h")

    @model_validator(mode="after")
    def check_step(self) -> "SweepRecord":
        if self.error is None and not self.h > 0:
            raise ValueError(f"Successful record needs h > 0, got {self.h}")
        return self

    @property
    def walk_value(self) -> complex:
        return complex(self.walk_re or 0.0, self.walk_im or 0.0)

    @property
    def oracle_value(self) -> complex:
        return complex(self.oracle_re or 0.0, self.oracle_im or 0.0)

    @property
    def ok(self) -> bool:
        return self.error is None


class FitResult(BaseModel):
    """Ordinary least squares fit of log(error) against log(h)."""

    slope: float
    intercept: float
    r_squared: float
    points_used: int = Field(..., ge=3)


class FitEntry(BaseModel):
    """Named fit in a report; `fit` is None when every error sat below the noise floor."""

    label: str
    fit: Optional[FitResult] = None
    exact_zero: bool = False

    @model_validator(mode="after")
    def check_exclusive(self) -> "FitEntry":
        if self.exact_zero == (self.fit is not None):
            raise ValueError("Exactly one of fit / exact_zero must be set")
        return self


class SweepReport(BaseModel):
    """Full JSON report of a convergence run."""

    fixture: str
    triple: str
    testcase: str
    seed: int
    records: List[SweepRecord] = Field(default_factory=list)
    fits: List[FitEntry] = Field(default_factory=list)

    @field_validator("records")
    @classmethod
    def validate_grid_order(cls, v: List[SweepRecord]) -> List[SweepRecord]:
        """Records come in grid order (strictly decreasing h)."""
        for prev, cur in zip(v, v[1:]):
            if not cur.h < prev.h:
                raise ValueError("Sweep records must be in strictly decreasing h order")
        return v
