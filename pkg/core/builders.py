"""
Construction of concrete bialgebras: group algebras C[G], function algebras
C(G), JSON fixtures, and the builtin fixture registry.
"""

import json
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from core.algebra import (
    BialgebraError,
    BialgebraStructureError,
    FiniteBialgebra,
    validate_bialgebra,
)
from core.groups import FiniteGroup, cyclic_group, symmetric_group_s3
from data.fixture_models import FixtureFile
from data.models import ValidationReport
from utils.logger import setup_logger

logger = setup_logger(__name__)


class FixtureError(BialgebraError):
    """Raised when a fixture cannot be read or parsed."""
    pass


class FixtureValidationError(BialgebraError):
    """Raised when a fixture parses but fails the bialgebra axioms."""

    def __init__(self, message: str, report: ValidationReport):
        super().__init__(message)
        self.report = report


def build_group_algebra(group: FiniteGroup, name: str = "") -> FiniteBialgebra:
    """
    C[G]: basis lambda_g, lambda_g lambda_h = lambda_{gh}, lambda_g^* = lambda_{g^-1},
    Delta(lambda_g) = lambda_g (x) lambda_g, eps = 1, left regular representation.
    """
    n = group.order
    mult = np.zeros((n, n, n), dtype=complex)
    star = np.zeros((n, n), dtype=complex)
    coproduct = np.zeros((n * n, n), dtype=complex)
    rep = np.zeros((n, n, n), dtype=complex)
    for g in range(n):
        star[g, group.inverse(g)] = 1.0
        coproduct[g * n + g, g] = 1.0
        for h in range(n):
            gh = group.mult(g, h)
            mult[g, h, gh] = 1.0
            rep[g, gh, h] = 1.0
    unit = np.zeros(n, dtype=complex)
    unit[group.identity] = 1.0
    return FiniteBialgebra(
        labels=tuple(f"l{label}" for label in group.labels),
        mult=mult,
        unit=unit,
        star=star,
        counit=np.ones(n, dtype=complex),
        coproduct=coproduct,
        faithful_rep=rep,
        name=name,
    )


def build_function_algebra(group: FiniteGroup, name: str = "") -> FiniteBialgebra:
    """
    C(G): basis of indicators e_g, e_g e_h = delta_{gh} e_g, e_g^* = e_g,
    Delta(e_g) = sum_{h h' = g} e_h (x) e_h', eps(e_g) = delta_{g,id}, diagonal representation.
    """
    n = group.order
    mult = np.zeros((n, n, n), dtype=complex)
    coproduct = np.zeros((n * n, n), dtype=complex)
    rep = np.zeros((n, n, n), dtype=complex)
    for g in range(n):
        mult[g, g, g] = 1.0
        rep[g, g, g] = 1.0
        for h in range(n):
            coproduct[g * n + h, group.mult(g, h)] = 1.0
    counit = np.zeros(n, dtype=complex)
    counit[group.identity] = 1.0
    return FiniteBialgebra(
        labels=tuple(f"e{label}" for label in group.labels),
        mult=mult,
        unit=np.ones(n, dtype=complex),
        star=np.eye(n, dtype=complex),
        counit=counit,
        coproduct=coproduct,
        faithful_rep=rep,
        name=name,
    )


def load_fixture(path: Path, tol: float | None = None) -> FiniteBialgebra:
    """
    Load a JSON fixture and accept it only if validate_bialgebra passes.

    Raises:
        FixtureError: If the file cannot be read or does not match the schema
        FixtureValidationError: If the bialgebra axioms fail
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        fixture = FixtureFile(**raw)
        arrays = fixture.arrays()
        algebra = FiniteBialgebra(labels=tuple(fixture.labels), name=path.stem, **arrays)
    except (OSError, json.JSONDecodeError) as e:
        raise FixtureError(f"Failed to read fixture {path}: {e}") from e
    except (ValidationError, ValueError, TypeError) as e:
        raise FixtureError(f"Malformed fixture {path}: {e}") from e
    except BialgebraStructureError as e:
        raise FixtureError(f"Inconsistent fixture {path}: {e}") from e

    report = validate_bialgebra(algebra, tol=tol, name=str(path))
    if not report.passed:
        raise FixtureValidationError(
            f"Fixture {path} fails: {', '.join(a.value for a in report.failing())}",
            report,
        )
    logger.info(f"✓ Loaded fixture {path.stem} (dim {algebra.dim})")
    return algebra


def save_fixture(algebra: FiniteBialgebra, path: Path) -> None:
    """Write a bialgebra in the fixture JSON format."""
    fixture = FixtureFile.from_arrays(
        list(algebra.labels),
        mult=algebra.mult,
        unit=algebra.unit,
        star=algebra.star,
        counit=algebra.counit,
        coproduct=algebra.coproduct,
        faithful_rep=algebra.faithful_rep,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(fixture.model_dump_json(indent=2), encoding="utf-8")


BUILTIN_GROUPS = {
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "S3": symmetric_group_s3,
}


def builtin_group(name: str) -> FiniteGroup:
    try:
        return BUILTIN_GROUPS[name]()
    except KeyError as e:
        raise FixtureError(
            f"Unknown builtin group {name!r}; choose from {sorted(BUILTIN_GROUPS)}"
        ) from e


def resolve_fixture(ref: str, base_dir: Path | None = None, tol: float | None = None) -> FiniteBialgebra:
    """
    Resolve a fixture reference: 'group:<G>', 'function:<G>' for G in
    {Z2, Z3, S3}, or a path to a JSON fixture (relative to base_dir).
    JSON fixtures are validated at `tol` (default settings.axiom_tol).
    """
    kind, _, group_name = ref.partition(":")
    if kind == "group" and group_name:
        return build_group_algebra(builtin_group(group_name), name=ref)
    if kind == "function" and group_name:
        return build_function_algebra(builtin_group(group_name), name=ref)
    path = Path(ref)
    if base_dir is not None and not path.is_absolute() and not path.exists():
        path = base_dir / path
    return load_fixture(path, tol=tol)


SHIPPED_FIXTURES = [
    "function:Z2",
    "function:Z3",
    "function:S3",
    "group:Z2",
    "group:Z3",
    "group:S3",
    "fixtures/kac_paljutkin.json",
]
