"""Experiment configs and the JSON report format."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from .engine import DEFAULT_BUDGET, RunReport, RunSummary, RunTrace

REPORT_VERSION = 1


@dataclass
class ExperimentConfig:
    problem: str
    params: Dict[str, Any] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=lambda: [0])
    budget: int = DEFAULT_BUDGET
    out: Optional[str] = None

    @classmethod
    def with_seed_count(cls, problem: str, params: Mapping, count: int, base: int = 0,
                        **kw) -> "ExperimentConfig":
        return cls(problem, dict(params), list(range(base, base + count)), **kw)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: Mapping) -> "ExperimentConfig":
        seeds = data.get("seeds", [0])
        if isinstance(seeds, Mapping):
            seeds = list(range(int(seeds.get("base", 0)), int(seeds.get("base", 0)) + int(seeds["count"])))
        return cls(data["problem"], dict(data.get("params", {})), [int(s) for s in seeds],
                   int(data.get("budget", DEFAULT_BUDGET)), data.get("out"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        return cls.from_json(json.loads(Path(path).read_text()))


def build_report(config: ExperimentConfig, descriptor: Mapping, summary: RunSummary,
                 slots, validated: List[bool]) -> dict:
    runs = [{"report": r.to_json(slots), "trace": t.to_json(), "validated": ok}
            for r, t, ok in zip(summary.reports, summary.traces, validated)]
    return {"version": REPORT_VERSION, "config": config.to_json(), "instance": dict(descriptor),
            "summary": summary.aggregate(), "runs": runs}


def read_runs(report: Mapping):
    """``(RunReport, RunTrace)`` pairs from a report dict."""
    return [(RunReport.from_json(r["report"]), RunTrace.from_json(r["trace"]))
            for r in report["runs"]]


def write_json(path: Union[str, Path], data) -> None:
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
