# backend/algebra/services/reports.py
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Dict, List, Sequence

from .. import __version__


class ExitCode(IntEnum):
    OK = 0
    WITNESSES = 1
    INVALID_INPUT = 2
    BOUND_TOO_SMALL = 3
    UNRESOLVED = 4


@dataclass
class Report:
    """
    Rapport déterministe d'une exécution : même entrée + même configuration
    => mêmes octets, quel que soit le parallélisme.
    """

    command: str
    input_digest: str = ""
    config: Dict[str, Any] = field(default_factory=dict)
    flags: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Any] = field(default_factory=dict)
    witnesses: List[Any] = field(default_factory=list)
    unresolved: List[Any] = field(default_factory=list)
    error: Dict[str, Any] = field(default_factory=dict)
    exit_code: ExitCode = ExitCode.OK

    def settle(self) -> "Report":
        """Code de sortie à partir du contenu (erreur > non résolu > témoins)."""
        if self.error:
            code = self.error.get("code")
            self.exit_code = ExitCode.BOUND_TOO_SMALL if code == "bound_too_small" else ExitCode.INVALID_INPUT
        elif self.unresolved:
            self.exit_code = ExitCode.UNRESOLVED
        elif self.witnesses:
            self.exit_code = ExitCode.WITNESSES
        else:
            self.exit_code = ExitCode.OK
        self.flags["unresolved"] = bool(self.unresolved)
        return self

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "tool_version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "config": self.config,
            "flags": self.flags,
            "tables": self.tables,
            "witnesses": self.witnesses,
            "unresolved": self.unresolved,
            "exit_code": int(self.exit_code),
        }
        if self.error:
            out["error"] = self.error
        return out

    def render(self, fmt: str = "json") -> str:
        if fmt == "table":
            return render_table(self.to_dict())
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return str(value)


def _aligned(rows: Sequence[Dict[str, Any]]) -> List[str]:
    cols = sorted({k for r in rows for k in r})
    grid = [cols] + [[_cell(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(line[i]) for line in grid) for i in range(len(cols))]
    return ["  ".join(v.ljust(w) for v, w in zip(line, widths)).rstrip() for line in grid]


def render_table(data: Dict[str, Any]) -> str:
    """Rendu texte aligné des mêmes données que le JSON."""
    lines: List[str] = []
    for key in ("command", "tool_version", "input_digest", "exit_code"):
        lines.append(f"{key}: {data[key]}")
    for section in ("config", "flags"):
        for k, v in sorted(data[section].items()):
            lines.append(f"{section}.{k}: {_cell(v)}")
    if "error" in data:
        lines.append(f"error: {_cell(data['error'])}")
    for name, value in sorted(data["tables"].items()):
        lines.append("")
        lines.append(f"[{name}]")
        if isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
            lines.extend(_aligned(value))
        elif isinstance(value, dict):
            lines.extend(f"{k}: {_cell(v)}" for k, v in sorted(value.items()))
        else:
            lines.append(_cell(value))
    for name in ("witnesses", "unresolved"):
        if data[name]:
            lines.append("")
            lines.append(f"[{name}]")
            rows = data[name]
            if all(isinstance(r, dict) for r in rows):
                lines.extend(_aligned(rows))
            else:
                lines.extend(_cell(r) for r in rows)
    return "\n".join(lines) + "\n"
