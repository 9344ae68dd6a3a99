"""
Check reports and their renderings.

A Report is an ordered list of CheckEntry rows. It is assembled into a pandas
DataFrame and rendered either as an aligned table for people or as line-delimited
tab-separated records for machines. Machine output never contains timestamps, so it
is byte-identical across runs.

Functions:
    render_human(report, stamp=None): Aligned table with header and verdict lines.
    render_machine(report): key, status and witness records separated by tabs.
"""

from dataclasses import dataclass, field
from datetime import datetime

import pandas as pd

from ..settings import (
    ASSUMPTIONS,
    STAMP_FORMAT,
    STATUS_ERROR,
    STATUS_FAIL,
    STATUS_INFO,
    STATUS_PASS,
)

COLUMNS = ["check", "reference", "status", "witness"]
FAILING = (STATUS_FAIL, STATUS_ERROR)


@dataclass(frozen=True)
class CheckEntry:
    name: str
    reference: str
    status: str
    witness: str = ""


@dataclass
class Report:
    """
    Attributes:
        scenario (str): Identifier of the scenario, the file stem.
        entries (list[CheckEntry]): Rows in the order the checks ran.
        assumptions (str): Standing assumptions the checks rely on.
    """

    scenario: str
    entries: list[CheckEntry] = field(default_factory=list)
    assumptions: str = ASSUMPTIONS

    def add(self, name: str, reference: str, status: str, witness: str = "") -> None:
        self.entries.append(CheckEntry(name, reference, status, witness))

    def info(self, name: str, reference: str, witness: str) -> None:
        self.add(name, reference, STATUS_INFO, witness)

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    @property
    def failed(self) -> bool:
        return any(entry.status in FAILING for entry in self.entries)

    @property
    def verdict(self) -> str:
        return STATUS_FAIL if self.failed else STATUS_PASS

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [[e.name, e.reference, e.status, e.witness] for e in self.entries],
            columns=COLUMNS,
        )


def render_machine(report: Report) -> str:
    """
    Renders report as check<TAB>status<TAB>witness lines, preceded by the scenario and
    assumption records and followed by the verdict.
    """
    rows = [
        ["scenario", STATUS_INFO, report.scenario],
        ["assumption", STATUS_INFO, report.assumptions],
    ]
    rows += report.to_frame()[["check", "status", "witness"]].values.tolist()
    rows.append(["verdict", report.verdict, f"exit {report.exit_code}"])
    frame = pd.DataFrame(rows, columns=["check", "status", "witness"])
    return frame.to_csv(sep="\t", header=False, index=False, lineterminator="\n")


def render_human(report: Report, stamp: datetime | None = None) -> str:
    lines = [f"Scenario: {report.scenario}"]
    if stamp is not None:
        lines.append(f"Generated: {stamp.strftime(STAMP_FORMAT)}")
    lines.append(f"Assumptions: {report.assumptions}")
    lines.append("")
    frame = report.to_frame()
    if frame.empty:
        lines.append("(no checks)")
    else:
        lines.append(frame.to_string(index=False, justify="left"))
    lines.append("")
    lines.append(f"Verdict: {report.verdict}")
    return "\n".join(lines) + "\n"
