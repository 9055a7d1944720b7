"""Verification reports and their text / structured rendering."""

from __future__ import annotations

import functools
import json
import time
from dataclasses import dataclass, field

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"

# Skip reasons
EMPTY_DOMAIN = "empty-domain"
SIZE_ASSUMPTION = "size-assumption"
NOT_APPLICABLE = "hypothesis-not-met"


@dataclass
class CheckReport:
    """Outcome of checking one axiom or statement on one plane.

    ``coverage`` is ``"exhaustive"`` or ``"sampled"`` (then ``seed`` and
    ``samples`` are set).  ``checked`` counts the configurations that
    satisfied the hypotheses and had their conclusion tested.
    """

    statement: str
    verdict: str
    coverage: str = "exhaustive"
    checked: int = 0
    seed: int | None = None
    samples: int | None = None
    witness: dict | None = None
    reason: str | None = None
    detail: str = ""
    elapsed: float = 0.0
    sub: list["CheckReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    @property
    def skipped(self) -> bool:
        return self.verdict == SKIPPED

    def as_dict(self, timing: bool = False) -> dict:
        d = {"verdict": self.verdict, "coverage": self.coverage, "checked": self.checked}
        if self.coverage == "sampled":
            d["seed"] = self.seed
            d["samples"] = self.samples
        if self.reason:
            d["reason"] = self.reason
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        if self.sub:
            d["parts"] = {r.statement: r.as_dict(timing) for r in self.sub}
        if timing:
            d["elapsed_s"] = round(self.elapsed, 4)
        return d

    def render_text(self, timing: bool = False) -> str:
        cov = self.coverage if self.coverage == "exhaustive" else f"sampled(seed={self.seed}, n={self.samples})"
        line = f"{self.statement:<8} {self.verdict:<8} {cov:<12} checked={self.checked}"
        if self.reason:
            line += f" reason={self.reason}"
        if timing:
            line += f" time={self.elapsed:.3f}s"
        out = [line]
        if self.detail:
            out.append(f"    {self.detail}")
        if self.witness is not None:
            out.append("    witness: " + json.dumps(_plain(self.witness), sort_keys=True))
        return "\n".join(out)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return obj


def timed_check(fn):
    """Decorator: stamp the wall time of a check onto the report it returns."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    return wrapper


def passed(stmt, checked, **kw) -> CheckReport:
    return CheckReport(stmt, PASS, checked=checked, **kw)


def failed(stmt, witness, checked=0, **kw) -> CheckReport:
    return CheckReport(stmt, FAIL, checked=checked, witness=witness, **kw)


def skipped(stmt, reason, **kw) -> CheckReport:
    return CheckReport(stmt, SKIPPED, reason=reason, **kw)


def render_reports(reports, fmt: str = "text", timing: bool = False, header: dict | None = None) -> str:
    if fmt == "text":
        lines = []
        if header:
            lines.append(" ".join(f"{k}={v}" for k, v in header.items()))
        lines += [r.render_text(timing) for r in reports]
        return "\n".join(lines) + "\n"
    if fmt == "structured":
        tree = {"reports": {r.statement: r.as_dict(timing) for r in reports}}
        if header:
            tree["run"] = header
        return json.dumps(tree, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def exit_code(reports) -> int:
    """0 all PASS, 1 any FAIL, 3 when only SKIPPED besides PASS."""
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        return 1
    if SKIPPED in verdicts:
        return 3
    return 0
