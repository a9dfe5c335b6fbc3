"""Plain-text verification reports with a stable, diffable layout.

Reports are key/value sections under a schema-version header.  Rendering is
deterministic: floats go through one fixed format, sets are sorted, and
section order follows insertion order.
"""

from __future__ import annotations

SCHEMA_VERSION = 1


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, (frozenset, set)):
        return "{" + ", ".join(sorted(str(x) for x in v)) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    return str(v)


class Report:
    def __init__(self, command, seed=None):
        self.command = command
        self.seed = seed
        self.sections = []

    def section(self, title):
        rows = []
        self.sections.append((title, rows))
        return rows

    def add(self, rows, key, value):
        rows.append((key, format_value(value)))

    def render(self):
        lines = [f"report-schema: {SCHEMA_VERSION}", f"command: {self.command}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for title, rows in self.sections:
            lines.append("")
            lines.append(f"[{title}]")
            for key, value in rows:
                lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"

    def write(self, path=None):
        text = self.render()
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text
