"""Run every relation check of the package and collect one report."""
from __future__ import annotations

from dataclasses import dataclass

from . import algebra, calculus, disc, integration, su2
from .params import ChartParams
from .report import ResidualReport

__all__ = ["AuditReport", "run_audit"]


@dataclass
class AuditReport:
    params: ChartParams
    sections: dict[str, ResidualReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.sections.values())

    @property
    def checks(self):
        return [c for r in self.sections.values() for c in r]

    def format(self) -> str:
        p = self.params
        lines = [
            "qchart audit",
            f"params: q={p.q!r} alpha={p.alpha!r} n_max={p.n_max} k_max={p.k_max} "
            f"l_max={p.l_max} tol={p.tol!r}",
        ]
        for name, rep in self.sections.items():
            lines.append("")
            lines.append(f"[{name}] {sum(c.passed for c in rep)}/{len(rep)} passed")
            lines.extend(c.line() for c in rep)
        failed = [c for c in self.checks if not c.passed]
        lines.append("")
        lines.append(f"overall: {'PASS' if not failed else 'FAIL'} "
                     f"({len(self.checks) - len(failed)}/{len(self.checks)} checks passed)")
        return "\n".join(lines) + "\n"


# smallest window whose interior domains are non-empty for every check
MIN_WINDOW = 6
MIN_CIRCLE = 2


def run_audit(params: ChartParams) -> AuditReport:
    """Relations of the disc and SU(2) generators, block structure, derivative
    routes, integral identities and the symbolic layer, all at ``params.tol``.

    Raises ``ValueError`` when the window is too small to leave an interior.
    """
    if min(params.n_max, params.k_max) < MIN_WINDOW or params.l_max < MIN_CIRCLE:
        raise ValueError(f"the audit needs n_max, k_max >= {MIN_WINDOW} and l_max >= {MIN_CIRCLE}")
    tol = params.tol
    sections = {
        "disc-operators": disc.verify_disc_relations(params, tol),
        "su2-operators": su2.verify_su2_relations(params, tol),
        "block-decomposition": su2.verify_blocks(params),
        "q-calculus": calculus.verify_calculus(params, tol),
        "integration": integration.verify_integration(params, tol),
        "symbolic-algebra": algebra.verify_algebra(params, tol),
    }
    return AuditReport(params, sections)
