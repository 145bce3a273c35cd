from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality/equality check.

    ``lhs`` and ``rhs`` are the two sides of the relation that was tested
    (exact Fractions where the check is exact). ``witness`` holds the first
    offending input in deterministic order, or None.
    """

    name: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    relation: str = "<="
    witness: Any = None
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def vacuous(self) -> bool:
        return "vacuous" in self.flags

    def to_json(self) -> dict:
        from .serialize import jsonable

        out = {
            "name": self.name,
            "passed": self.passed,
            "relation": self.relation,
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
        }
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.flags:
            out["flags"] = list(self.flags)
        if self.details:
            out["details"] = {k: jsonable(v) for k, v in self.details.items()}
        return out

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"[{status}] {self.name}"]
        if self.lhs is not None or self.rhs is not None:
            parts.append(f"lhs={_txt(self.lhs)} {self.relation} rhs={_txt(self.rhs)}")
        if self.flags:
            parts.append("(" + ", ".join(self.flags) + ")")
        if self.witness is not None:
            from .serialize import jsonable

            parts.append(f"witness={jsonable(self.witness)}")
        return "  ".join(parts)


def _txt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)
