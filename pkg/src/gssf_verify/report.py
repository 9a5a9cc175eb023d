"""Residual bookkeeping shared by the verification operations.

Every verification routine in this package reduces to a collection of
named sup-norm residuals measured against one tolerance.  DefectReport
is the common carrier for those collections; the CLI layer turns them
into check records later.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFoundError


@dataclass(frozen=True)
class DefectEntry:
    """A single named residual: the sup over its evaluation samples."""

    label: str
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "residual", float(self.residual))


@dataclass(frozen=True)
class DefectReport:
    """Named residual functionals measured against one tolerance."""

    name: str
    entries: tuple
    tolerance: float

    def __post_init__(self):
        fixed = tuple(
            e if isinstance(e, DefectEntry) else DefectEntry(*e)
            for e in self.entries
        )
        object.__setattr__(self, "entries", fixed)
        object.__setattr__(self, "tolerance", float(self.tolerance))

    def residual(self, label: str) -> float:
        """Residual of one entry, looked up by label."""
        for entry in self.entries:
            if entry.label == label:
                return entry.residual
        raise NotFoundError(label, [e.label for e in self.entries])

    @property
    def labels(self):
        return tuple(e.label for e in self.entries)

    @property
    def sup_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return self.sup_residual < self.tolerance

    def merged(self, other: "DefectReport") -> "DefectReport":
        """Entry-wise max of two reports with identical labels.

        Used to aggregate per-point reports into a per-target sup.
        """
        if other.labels != self.labels:
            raise ValueError("cannot merge reports with different entries")
        entries = tuple(
            DefectEntry(a.label, max(a.residual, b.residual))
            for a, b in zip(self.entries, other.entries)
        )
        return DefectReport(self.name, entries, self.tolerance)
