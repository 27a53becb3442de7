"""Structured pass/fail reports shared by the validators."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckItem:
    name: str
    passed: bool
    witness: dict | None = None

    def to_payload(self) -> dict:
        payload = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


@dataclass
class ValidationReport:
    items: list[CheckItem] = field(default_factory=list)

    def record(self, name: str, passed: bool, witness: dict | None = None):
        self.items.append(CheckItem(name, passed, witness))
        return passed

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.passed]

    def item(self, name: str) -> CheckItem:
        for entry in self.items:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_payload(self) -> list[dict]:
        return [item.to_payload() for item in self.items]
