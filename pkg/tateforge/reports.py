"""
Report assembly and writers (JSON, TSV, rich text).

Every report has the same top-level shape: config, certified_window, tables, verdicts,
provenance. Keys are sorted and tables keep their insertion order, so identical runs
produce identical bytes.
"""
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from tateforge.series import DimReport


@dataclass
class Verdict:
    name: str
    passed: bool
    certified: bool = True
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "certified": self.certified, "detail": self.detail}


@dataclass
class Report:
    config: Dict[str, Any]
    certified_window: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[Verdict] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)
    chart: List[str] = field(default_factory=list)

    def add_table(self, name: str, rows: Any):
        self.tables[name] = rows

    def add_verdict(self, name: str, passed: bool, certified: bool = True, detail: str = ""):
        self.verdicts.append(Verdict(name, passed, certified, detail))

    def add_dim_report(self, report: DimReport, name: Optional[str] = None):
        key = name or report.label
        self.tables[key] = {
            "degrees": [report.lo, report.hi],
            "machine": report.machine,
            "expected": report.expected,
        }
        detail = ""
        if report.first_mismatch is not None:
            mm = report.first_mismatch
            detail = f"degree {mm.degree}: machine {mm.machine}, expected {mm.expected}"
        self.add_verdict(key, report.equal, True, detail)
        for k, v in report.provenance.items():
            self.provenance[f"{key}:{k}"] = v

    @property
    def failed(self) -> List[Verdict]:
        return [v for v in self.verdicts if v.certified and not v.passed]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "certified_window": self.certified_window,
            "tables": self.tables,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "provenance": self.provenance,
        }


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _tsv_rows(name: str, rows: Any) -> List[Tuple[str, ...]]:
    if isinstance(rows, dict) and "machine" in rows:
        lo = rows["degrees"][0]
        return [
            (name, str(lo + i), str(m), str(e))
            for i, (m, e) in enumerate(zip(rows["machine"], rows["expected"]))
        ]
    if isinstance(rows, list):
        out = []
        for row in rows:
            if isinstance(row, dict):
                out.append((name,) + tuple(str(row[k]) for k in sorted(row)))
            else:
                out.append((name, str(row)))
        return out
    return [(name, json.dumps(rows, sort_keys=True))]


def render_tsv(report: Report) -> str:
    """Chart lines when the report carries a page, otherwise one line per table row."""
    if report.chart:
        return "\n".join(["column\tinternal_degree\tdimension\tpage"] + report.chart) + "\n"
    lines = []
    for name, rows in report.tables.items():
        lines.extend("\t".join(r) for r in _tsv_rows(name, rows))
    for v in report.verdicts:
        lines.append("\t".join(("verdict", v.name, "PASS" if v.passed else "FAIL", v.detail)))
    return "\n".join(lines) + "\n"


def render_text(report: Report) -> str:
    buffer = io.StringIO()
    console = Console(file=buffer, width=120, color_system=None, force_terminal=False)
    command = report.config.get("command", "run")
    console.print(f"tateforge {command}")
    console.print("=" * 50)
    for name, rows in report.tables.items():
        table = Table(title=name)
        tsv = _tsv_rows(name, rows)
        if isinstance(rows, dict) and "machine" in rows:
            for header in ("degree", "machine", "expected"):
                table.add_column(header, justify="right")
            for _, degree, machine, expected in tsv:
                table.add_row(degree, machine, expected)
        else:
            width = max((len(r) for r in tsv), default=1) - 1
            for c in range(width):
                table.add_column(f"c{c}")
            for r in tsv:
                table.add_row(*r[1:])
        console.print(table)
    verdicts = Table(title="Verdicts")
    verdicts.add_column("check")
    verdicts.add_column("result")
    verdicts.add_column("detail")
    for v in report.verdicts:
        mark = "✅" if v.passed else ("❌" if v.certified else "⚠️")
        verdicts.add_row(v.name, mark, v.detail)
    console.print(verdicts)
    return buffer.getvalue()


RENDERERS = {"json": render_json, "tsv": render_tsv, "text": render_text}


def write_report(report: Report, fmt: str, output: Optional[str] = None) -> str:
    text = RENDERERS[fmt](report)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text
