"""Solver outcome reports."""

from __future__ import annotations

from dataclasses import dataclass, field

from .paths import PathSystem

__all__ = ["SolveReport", "LINKED", "HYPOTHESIS_VIOLATED", "STAGE_FAILED"]

LINKED = "linked"
HYPOTHESIS_VIOLATED = "hypothesis_violated"
STAGE_FAILED = "stage_failed"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a linkage solve.

    A ``linked`` report always carries a path system that passed
    ``verify_linkage`` against the input digraph.  ``hypothesis_violated``
    names the failed hypothesis; ``stage_failed`` names the pipeline stage
    and carries a witness.  The audit dict records every hypothesis that
    was measured (or explicitly skipped), so artifacts are self-describing.
    """

    outcome: str
    system: PathSystem | None = None
    audit: dict = field(default_factory=dict)
    failure: str | None = None
    stage: str | None = None
    witness: object = None

    @property
    def linked(self) -> bool:
        return self.outcome == LINKED

    @staticmethod
    def of_linkage(system: PathSystem, audit: dict) -> "SolveReport":
        return SolveReport(LINKED, system=system, audit=audit)

    @staticmethod
    def of_hypothesis(which: str, audit: dict) -> "SolveReport":
        return SolveReport(HYPOTHESIS_VIOLATED, audit=audit, failure=which)

    @staticmethod
    def of_stage(stage: str, witness, audit: dict) -> "SolveReport":
        return SolveReport(STAGE_FAILED, audit=audit, stage=stage, witness=witness)
