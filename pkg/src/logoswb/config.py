"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-9
    idem: float = 1e-9
    orth: float = 1e-9
    trace: float = 1e-9
    eig: float = 1e-8
    norm: float = 1e-12
    comm: float = 1e-9
    born: float = 1e-9
    recon: float = 1e-9
    overlap: float = 1e-9

    def with_overrides(self, **kwargs: float) -> "Tolerances":
        return replace(self, **kwargs)

    @classmethod
    def uniform(cls, value: float) -> "Tolerances":
        """Every tolerance set to ``value`` (what the CLI ``--tol`` flag does)."""
        return cls(**{f.name: float(value) for f in fields(cls)})


DEFAULT_TOL = Tolerances()
