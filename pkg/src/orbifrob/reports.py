"""Pass/fail reports with counterexample witnesses.

Every verifier in the package returns a CheckReport: a list of named
checks, each passing or failing, failures carrying a JSON-able witness
(the offending group elements / basis indices and both side values).
"""

from __future__ import annotations

import json


class CheckEntry:
    __slots__ = ("name", "ok", "witness", "detail")

    def __init__(self, name: str, ok: bool, witness=None, detail: str = ""):
        self.name = name
        self.ok = bool(ok)
        self.witness = witness
        self.detail = detail

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    def __repr__(self):
        mark = "ok" if self.ok else "FAIL"
        return f"<{mark} {self.name}>"


class CheckReport:
    def __init__(self, title: str = ""):
        self.title = title
        self.entries: list[CheckEntry] = []

    def add(self, name: str, ok: bool, witness=None, detail: str = "") -> CheckEntry:
        entry = CheckEntry(name, ok, witness, detail)
        self.entries.append(entry)
        return entry

    def extend(self, other: "CheckReport"):
        self.entries.extend(other.entries)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.ok]

    def first_failure(self):
        for e in self.entries:
            if not e.ok:
                return e
        return None

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [e.to_dict() for e in self.entries],
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def render_text(self) -> str:
        lines = []
        if self.title:
            lines.append(self.title)
        for e in self.entries:
            mark = "PASS" if e.ok else "FAIL"
            line = f"  [{mark}] {e.name}"
            if e.detail:
                line += f" ({e.detail})"
            lines.append(line)
            if not e.ok and e.witness is not None:
                lines.append(f"         witness: {json.dumps(e.witness, sort_keys=True)}")
        lines.append(("all checks passed" if self.ok
                      else f"{len(self.failures())} check(s) FAILED"))
        return "\n".join(lines)

    def __repr__(self):
        status = "ok" if self.ok else f"{len(self.failures())} failures"
        return f"<CheckReport {self.title!r}: {len(self.entries)} checks, {status}>"
