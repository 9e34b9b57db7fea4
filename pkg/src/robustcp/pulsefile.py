"""Versioned JSON pulse files."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .su2 import PULSE_AREA, PulseSequence

SCHEMA_VERSION = 1
GATES = ("NOT",)


class PulseFileError(ValueError):
    pass


@dataclass(frozen=True)
class PulseFile:
    phases: tuple[float, ...]
    metadata: dict = field(default_factory=dict)
    gate: str = "NOT"
    omega0T: float = PULSE_AREA
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        phases = tuple(float(x) for x in self.phases)
        if not phases or not all(math.isfinite(x) for x in phases):
            raise PulseFileError("phases must be a non-empty list of finite numbers")
        if self.gate not in GATES:
            raise PulseFileError(f"unsupported gate {self.gate!r}")
        if self.schema_version != SCHEMA_VERSION:
            raise PulseFileError(f"unsupported schema_version {self.schema_version!r}")
        if abs(float(self.omega0T) - PULSE_AREA) > 1e-12:
            raise PulseFileError("only omega0T = pi pulses are supported")
        object.__setattr__(self, "phases", phases)

    @property
    def sequence(self) -> PulseSequence:
        return PulseSequence(self.phases)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "gate": self.gate,
            "omega0T": float(self.omega0T),
            "phases": list(self.phases),
            "metadata": self.metadata,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "PulseFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PulseFileError(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise PulseFileError("pulse file must hold a JSON object")
        missing = {"schema_version", "gate", "omega0T", "phases"} - set(data)
        if missing:
            raise PulseFileError(f"missing fields: {', '.join(sorted(missing))}")
        if not isinstance(data["phases"], list):
            raise PulseFileError("phases must be a list")
        return cls(
            phases=tuple(data["phases"]),
            metadata=data.get("metadata", {}),
            gate=data["gate"],
            omega0T=data["omega0T"],
            schema_version=data["schema_version"],
        )

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def read(cls, path) -> "PulseFile":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise PulseFileError(f"cannot read {path}: {exc}") from exc
        return cls.loads(text)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
