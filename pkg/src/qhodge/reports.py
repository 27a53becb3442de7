"""Deterministic reports for the command layer.

The canonical serialization (sorted keys, fixed separators) excludes wall
time, so identical inputs, seed and order produce byte-identical report
files; timing goes to stderr.  Every report cites the hash of the
normalization conventions it was computed under (see docs/notation.md).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

CONVENTIONS = {
    "coordinates": "q_j = exp(z_j); d/dz_j acts on series as theta_j = q_j d/dq_j",
    "scaling": "the analytic convention is recovered by z -> z/(2*pi*i); "
               "all verified identities are homogeneous under that substitution",
    "connection": "nabla_j = theta_j + A_j(q) on the constant frame",
    "pairing": "Q(u, v) = (-1)^p B(u, v) for u of degree 2p",
    "weight_filtration": "limiting filtration is centered at weight 4",
    "tail_blocks": "C = (deg4 -> deg6) block of Gamma, D = (deg4 -> deg8) row; "
                   "C_ka = theta_k psi^a and D_a = -psi^a",
    "flat_frame": "flat sections are exp(-Gamma(q)) exp(-sum_j z_j L_j)",
}

CONVENTIONS_HASH = hashlib.sha256(
    json.dumps(CONVENTIONS, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None

    def to_payload(self) -> dict:
        payload = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


@dataclass
class Report:
    command: str
    order: int
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    error: str | None = None

    def record(self, name: str, passed: bool, witness=None) -> bool:
        self.checks.append(CheckResult(name, bool(passed), witness))
        return passed

    def extend(self, items, prefix: str = ""):
        for item in items:
            self.checks.append(CheckResult(prefix + item.name, item.passed,
                                           item.witness))

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_payload(self) -> dict:
        payload = {
            "command": self.command,
            "order": self.order,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_payload() for c in self.checks],
            "conventions": CONVENTIONS_HASH,
        }
        if self.outputs:
            payload["outputs"] = self.outputs
        if self.error is not None:
            payload["error"] = self.error
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command} (order={self.order}, seed={self.seed}, "
                 f"conventions={CONVENTIONS_HASH})"]
        for check in self.checks:
            mark = "PASS" if check.passed else "FAIL"
            line = f"  [{mark}] {check.name}"
            if check.witness is not None:
                line += f"  witness: {json.dumps(check.witness, sort_keys=True)}"
            lines.append(line)
        if self.error is not None:
            lines.append(f"  error: {self.error}")
        lines.append("verdict: " + ("pass" if self.passed else "fail"))
        return "\n".join(lines) + "\n"

    def exit_code(self) -> int:
        return 0 if self.passed else 1
