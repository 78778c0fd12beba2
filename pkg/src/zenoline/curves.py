"""Sampled-curve container shared by all tracers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["PhaseCurve"]


@dataclass
class PhaseCurve:
    """An ordered list of sampled points with metadata.

    Parameters
    ----------
    columns : tuple of str
        Names of the per-point values, first entry is the independent
        variable.
    rows : list of tuple
        One tuple per sample, same length as ``columns``.
    meta : dict
        Free-form provenance (grids, per-point failures, settings).
    """

    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DomainError(
                    f"row of width {len(row)} does not match columns {self.columns}"
                )

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        """Return one named column as a float array."""
        try:
            j = self.columns.index(name)
        except ValueError:
            raise DomainError(f"no column {name!r} in {self.columns}") from None
        return np.array([row[j] for row in self.rows], dtype=float)

    def as_array(self):
        return np.array(self.rows, dtype=float)
