"""Pydantic models for verification reports and serialized term lists."""

from __future__ import annotations

import json
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "1"
CSV_COLUMNS = ("y1", "y2", "m", "residual")


class ResidualRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    y1: Optional[float] = None
    y2: Optional[float] = None
    m: Optional[float] = None
    residual: float
    tol: float
    kind: str
    params: dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


class IdentityReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    identity: str
    tolerance: float
    max_residual: float
    passed: bool
    n_points: int
    seed: Optional[int] = None
    grid: dict
    elapsed_s: float
    worst: Optional[ResidualRow] = None
    rows: list[ResidualRow]


class VerificationReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: str = SCHEMA_VERSION
    package_version: str
    threads: int
    passed: bool
    identities: list[IdentityReport]


class Coefficient(BaseModel):
    """Rational function of m: num(m)/den(m), coefficients ascending in m."""

    model_config = ConfigDict(extra="forbid")

    num: list[str]
    den: list[str]
    num_imag: Optional[list[str]] = None


class TermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coeff: Coefficient
    r_power: int
    xi: list[str]
    deltas: list[list[str]]
    word: list[str]


class TermList(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sphere_volume: bool = False
    terms: list[TermModel]


class B2Document(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: str = SCHEMA_VERSION
    b2: TermList
    b2_integrated: TermList


def identity_report(result) -> IdentityReport:
    rows = [ResidualRow(**r) for r in result.rows]
    worst = result.worst
    return IdentityReport(
        identity=result.identity, tolerance=result.tolerance,
        max_residual=result.max_residual, passed=result.passed, n_points=len(rows),
        seed=result.seed, grid=result.grid, elapsed_s=round(result.elapsed_s, 4),
        worst=ResidualRow(**worst) if worst else None, rows=rows,
    )


def term_list(poly) -> TermList:
    from .symbol_calculus import term_to_dict

    return TermList(sphere_volume=poly.sphere_volume,
                    terms=[TermModel(**term_to_dict(t)) for t in poly])


def poly_from_term_list(doc: TermList):
    from .symbol_calculus import SymbolPoly, term_from_dict

    return SymbolPoly.from_terms((term_from_dict(t.model_dump(exclude_none=True))
                                  for t in doc.terms), sphere_volume=doc.sphere_volume)


def json_schemas() -> str:
    return json.dumps({"VerificationReport": VerificationReport.model_json_schema(),
                       "B2Document": B2Document.model_json_schema()}, indent=2)
