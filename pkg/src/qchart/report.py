"""Residual records shared by the verification routines and the audit."""
from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["RelationCheck", "ResidualReport"]


@dataclass(frozen=True)
class RelationCheck:
    name: str
    tag: str
    domain_size: int
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<44s} [{self.tag}]  domain={self.domain_size:<5d} "
                f"residual={self.residual:.3e}  tol={self.tolerance:.1e}")


@dataclass
class ResidualReport:
    checks: list[RelationCheck] = field(default_factory=list)

    def add(self, name: str, tag: str, domain_size: int, residual: float, tolerance: float) -> RelationCheck:
        check = RelationCheck(name, tag, domain_size, float(residual), float(tolerance))
        self.checks.append(check)
        return check

    def extend(self, other: ResidualReport) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> RelationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)
