"""Machine-readable verdicts with residual magnitudes and tolerances."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "ConditionReport", "PASS", "FAIL", "INCONCLUSIVE"]

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Check:
    """One verdict: named condition, residual actually measured, tolerance used,
    and the formula it certifies."""

    name: str
    verdict: str
    residual: float
    tol: float
    anchor: str

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "anchor": self.anchor,
        }


@dataclass
class ConditionReport:
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(
        self,
        name: str,
        passed: bool | None,
        residual: float,
        tol: float,
        anchor: str,
    ) -> Check:
        verdict = INCONCLUSIVE if passed is None else (PASS if passed else FAIL)
        chk = Check(name, verdict, float(residual), float(tol), anchor)
        self.checks.append(chk)
        return chk

    @property
    def overall(self) -> str:
        if any(c.verdict == FAIL for c in self.checks):
            return FAIL
        if any(c.verdict == INCONCLUSIVE for c in self.checks):
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.overall == PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def has(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def to_obj(self) -> dict:
        return {
            "overall": self.overall,
            "checks": [c.to_obj() for c in self.checks],
            "meta": self.meta,
        }
