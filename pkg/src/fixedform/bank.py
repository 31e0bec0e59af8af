"""Synthetic item-bank generation and CSV persistence.

Generation is reproducible by construction: parameters are drawn from
numpy's PCG64 seeded with ``BankGenSpec.seed``, discriminations first (one
block of m uniforms), then difficulties (a second block). The same seed therefore
always yields the same bank, byte for byte after save.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import BankFormatError, ParameterError
from .irt import ItemBank, ItemParams

__all__ = ["BankGenSpec", "generate_bank", "save_bank", "load_bank"]

_HEADER = ["id", "a", "b", "c"]


@dataclass(frozen=True)
class BankGenSpec:
    """Recipe for a synthetic bank: uniform a and b, fixed c."""

    m: int = 300
    a_range: tuple[float, float] = (1.0, 3.0)
    b_range: tuple[float, float] = (-3.0, 3.0)
    c_fixed: float = 0.2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ParameterError(f"bank size must be >= 1, got {self.m}")
        a_lo, a_hi = self.a_range
        b_lo, b_hi = self.b_range
        if not (math.isfinite(a_lo) and math.isfinite(a_hi) and 0.0 < a_lo <= a_hi):
            raise ParameterError(f"discrimination range must satisfy 0 < lo <= hi, got {self.a_range}")
        if not (math.isfinite(b_lo) and math.isfinite(b_hi) and b_lo <= b_hi):
            raise ParameterError(f"difficulty range must satisfy lo <= hi, got {self.b_range}")
        if not (math.isfinite(self.c_fixed) and 0.0 <= self.c_fixed < 1.0):
            raise ParameterError(f"guessing probability must lie in [0, 1), got {self.c_fixed}")
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")


def generate_bank(spec: BankGenSpec) -> ItemBank:
    """Draw a bank with the requested shape; deterministic for a fixed seed."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    a = rng.uniform(spec.a_range[0], spec.a_range[1], spec.m)
    b = rng.uniform(spec.b_range[0], spec.b_range[1], spec.m)
    return ItemBank(tuple(ItemParams(float(a[i]), float(b[i]), spec.c_fixed) for i in range(spec.m)))


def save_bank(bank: ItemBank, path) -> None:
    """Write a bank as CSV (header ``id,a,b,c``), 17 significant digits.

    17 digits round-trip any double exactly, so load(save(bank)) == bank.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_HEADER)
        for i, item in enumerate(bank.items):
            writer.writerow([i, repr(item.a), repr(item.b), repr(item.c)])


def load_bank(path) -> ItemBank:
    """Read a bank CSV, validating ids and parameter invariants.

    Errors name the 1-based line number of the first offending row.
    """
    items: list[ItemParams] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _HEADER:
            raise BankFormatError(f"line 1: expected header {','.join(_HEADER)!r}, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise BankFormatError(f"line {line_no}: expected 4 fields, got {len(row)}")
            try:
                item_id = int(row[0])
                a, b, c = (float(x) for x in row[1:])
            except ValueError as exc:
                raise BankFormatError(f"line {line_no}: {exc}") from None
            if item_id != len(items):
                raise BankFormatError(
                    f"line {line_no}: expected id {len(items)} (ids must be contiguous from 0), got {item_id}"
                )
            try:
                items.append(ItemParams(a, b, c))
            except ParameterError as exc:
                raise BankFormatError(f"line {line_no}: {exc}") from None
    if not items:
        raise BankFormatError("bank file contains no items")
    return ItemBank(tuple(items))
