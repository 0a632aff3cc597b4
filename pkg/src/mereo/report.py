from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class AxiomVerdict:
    name: str
    status: str
    witness: dict[str, str] | None = None
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> dict:
        out: dict = {"axiom": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = dict(self.witness)
        if self.reason:
            out["reason"] = self.reason
        return out

    def render(self) -> str:
        line = f"{self.name:<28} {self.status}"
        if self.witness:
            line += "  witness: " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        if self.reason:
            line += f"  ({self.reason})"
        return line


@dataclass
class AxiomReport:
    """Ordered per-axiom verdicts for one subject (a model, or a relation on a model)."""

    subject: str
    verdicts: list[AxiomVerdict] = field(default_factory=list)

    def add(self, verdict: AxiomVerdict) -> None:
        self.verdicts.append(verdict)

    def __getitem__(self, name: str) -> AxiomVerdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(v.name == name for v in self.verdicts)

    def __iter__(self) -> Iterator[AxiomVerdict]:
        return iter(self.verdicts)

    def status(self, name: str) -> str:
        return self[name].status

    @property
    def ok(self) -> bool:
        """True when no verdict is a failure (skipped and n/a verdicts are ignored)."""
        return not any(v.failed for v in self.verdicts)

    def failures(self) -> list[AxiomVerdict]:
        return [v for v in self.verdicts if v.failed]

    def to_dict(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "verdicts": [v.to_dict() for v in self.verdicts]}

    def render(self) -> str:
        lines = [f"== {self.subject}"]
        lines.extend("  " + v.render() for v in self.verdicts)
        return "\n".join(lines)
