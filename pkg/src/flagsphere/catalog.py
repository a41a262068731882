"""Append-only catalog of canonically-labelled triangulations, plus the
novelty-statistics CSV writer.

Catalog file: header line 'flagsphere-catalog v1', then one record per
upsert event:

    <canonical-edge-list-hex> <n_vertices> <n_edges> <gamma2> <t10_verdict> <t12_verdict> <first_seen> <hits>

Later lines for the same key supersede earlier ones, so the file doubles as
a crash-safe log; reopening folds it into an in-memory index.  Stats CSV:
header 'flagsphere-stats v1', then 'vertex_count,encounter_index,
cumulative_distinct' rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import IO, Iterator

from .errors import ParseError

CATALOG_HEADER = "flagsphere-catalog v1"
STATS_HEADER = "flagsphere-stats v1"

VERDICTS = ("certified", "none", "timeout", "skipped")


@dataclass(frozen=True)
class CatalogRecord:
    key: str  # canonical edge list, hex-packed, prefixed with vertex count
    n_vertices: int
    n_edges: int
    gamma2: int
    t10: str
    t12: str
    first_seen: int
    hits: int

    @property
    def neither(self) -> bool:
        """A gamma2 > 0 record certified against no target: a candidate new
        minimal triangulation."""
        return self.gamma2 > 0 and self.t10 != "certified" and self.t12 != "certified"

    def line(self) -> str:
        return (
            f"{self.key} {self.n_vertices} {self.n_edges} {self.gamma2} "
            f"{self.t10} {self.t12} {self.first_seen} {self.hits}"
        )

    @staticmethod
    def parse(line: str, ln: int) -> "CatalogRecord":
        parts = line.split()
        if len(parts) != 8:
            raise ParseError("catalog record needs 8 fields", ln)
        key = parts[0]
        try:
            n, e, g2, first, hits = int(parts[1]), int(parts[2]), int(parts[3]), int(parts[6]), int(parts[7])
        except ValueError:
            raise ParseError("non-integer catalog field", ln) from None
        if parts[4] not in VERDICTS or parts[5] not in VERDICTS:
            raise ParseError(f"unknown verdict in {parts[4]!r}/{parts[5]!r}", ln)
        rec = CatalogRecord(key, n, e, g2, parts[4], parts[5], first, hits)
        _check_key(rec, ln)
        return rec


def _check_key(rec: CatalogRecord, ln: int | None = None) -> None:
    """The hex key encodes the canonical adjacency; edge count and gamma2
    must match the stored fields."""
    try:
        n_str, hexpart = rec.key.split(":")
        n = int(n_str)
        acc = int(hexpart, 16) if hexpart else 0
    except ValueError:
        raise ParseError(f"malformed canonical key {rec.key!r}", ln) from None
    edges = acc.bit_count()
    if n != rec.n_vertices or edges != rec.n_edges:
        raise ParseError(f"key encodes {n} vertices / {edges} edges, record says "
                         f"{rec.n_vertices}/{rec.n_edges}", ln)
    if rec.gamma2 != 16 - 5 * n + edges:
        raise ParseError(f"gamma2 {rec.gamma2} does not match 16 - 5*{n} + {edges}", ln)


class Catalog:
    """In-memory index over an optional append-only file."""

    def __init__(self, path: str | None = None):
        self.path = path
        self.records: dict[str, CatalogRecord] = {}
        self._fh: IO[str] | None = None
        if path is not None:
            try:
                with open(path) as fh:
                    self._load(fh)
            except FileNotFoundError:
                pass
            self._fh = open(path, "a")
            if not self.records:
                self._fh.write(CATALOG_HEADER + "\n")
                self._fh.flush()

    def _load(self, fh: IO[str]) -> None:
        first = fh.readline().rstrip("\n")
        if first != CATALOG_HEADER:
            raise ParseError(f"bad catalog header {first!r}", 1)
        for ln, raw in enumerate(fh, start=2):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            rec = CatalogRecord.parse(s, ln)
            self.records[rec.key] = rec

    def upsert(self, rec: CatalogRecord) -> tuple[CatalogRecord, bool]:
        """Insert or bump an existing record's hit count; returns the stored
        record and whether it was new."""
        old = self.records.get(rec.key)
        if old is None:
            stored, new = rec, True
        else:
            stored, new = replace(old, hits=old.hits + rec.hits), False
        self.records[rec.key] = stored
        if self._fh is not None:
            self._fh.write(stored.line() + "\n")
        return stored, new

    def flush(self) -> None:
        if self._fh is not None:
            self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CatalogRecord]:
        return iter(sorted(self.records.values(), key=lambda r: (r.n_vertices, r.key)))

    def by_vertex_count(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rec in self.records.values():
            out[rec.n_vertices] = out.get(rec.n_vertices, 0) + 1
        return dict(sorted(out.items()))

    def neither_records(self) -> list[CatalogRecord]:
        return [r for r in self if r.neither]


class StatsWriter:
    """Novelty curve: one row per encounter of a simplified triangulation,
    recording the running number of distinct triangulations at that vertex
    count."""

    def __init__(self, path: str | None):
        self._fh = open(path, "w") if path else None
        if self._fh:
            self._fh.write(STATS_HEADER + "\n")
            self._fh.write("vertex_count,encounter_index,cumulative_distinct\n")
        self.encounters: dict[int, int] = {}
        self.distinct: dict[int, int] = {}

    def note(self, n_vertices: int, new: bool) -> None:
        self.encounters[n_vertices] = self.encounters.get(n_vertices, 0) + 1
        if new:
            self.distinct[n_vertices] = self.distinct.get(n_vertices, 0) + 1
        if self._fh:
            self._fh.write(
                f"{n_vertices},{self.encounters[n_vertices]},{self.distinct.get(n_vertices, 0)}\n"
            )

    def close(self) -> None:
        if self._fh:
            self._fh.close()
            self._fh = None
