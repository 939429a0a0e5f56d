"""Uniform pass/fail result for property checks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Report:
    ok: bool
    label: str
    details: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def render(self) -> str:
        head = f"[{'ok' if self.ok else 'FAIL'}] {self.label}"
        if not self.details:
            return head
        return head + "\n" + "\n".join("  " + d for d in self.details)


def merge(label: str, reports: list[Report]) -> Report:
    bad = [r for r in reports if not r.ok]
    details = tuple(d for r in bad for d in (r.label,) + r.details)
    return Report(not bad, label, details)
