"""Dataset ingestion and the embedded failure-time sample.

The embedded dataset is the classic 50-observation failure-time series
(in weeks) from Murthy, Xie & Jiang (2004, p. 180).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

EMBEDDED_TAG = "embedded:failure-times"

FAILURE_TIMES = (
    0.013, 0.065, 0.111, 0.111, 0.163, 0.309, 0.426, 0.535, 0.684, 0.747,
    0.997, 1.284, 1.304, 1.647, 1.829, 2.336, 2.838, 3.269, 3.977, 3.981,
    4.520, 4.789, 4.849, 5.202, 5.291, 5.349, 5.911, 6.018, 6.427, 6.456,
    6.572, 7.023, 7.087, 7.291, 7.787, 8.596, 9.388, 10.261, 10.713, 11.658,
    13.006, 13.388, 13.842, 17.152, 17.283, 19.418, 23.471, 24.777, 32.795,
    48.105,
)


class ParseError(ValueError):
    def __init__(self, line_no: int, text: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: cannot parse {text!r} as a number")


class NonPositiveValue(ValueError):
    def __init__(self, line_no: int, value: float):
        self.line_no = line_no
        super().__init__(f"line {line_no}: value {value} is not positive")


@dataclass
class Dataset:
    values: np.ndarray
    source: str

    @property
    def n(self) -> int:
        return len(self.values)


def load_dataset(path_or_tag: str) -> Dataset:
    """Load positive reals from a text file (newline/comma/whitespace
    separated) or return the embedded failure-time data for the tags
    "embedded" / "embedded:failure-times"."""
    if path_or_tag in ("embedded", EMBEDDED_TAG):
        return Dataset(values=np.array(FAILURE_TIMES), source=EMBEDDED_TAG)
    values: list[float] = []
    with open(path_or_tag, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            for token in re.split(r"[,\s]+", line.strip()):
                if not token:
                    continue
                try:
                    v = float(token)
                except ValueError:
                    raise ParseError(line_no, token) from None
                if not v > 0.0:
                    raise NonPositiveValue(line_no, v)
                values.append(v)
    if not values:
        raise ParseError(0, "<empty file>")
    return Dataset(values=np.array(values), source=path_or_tag)


def flag_outliers_iqr(values, k: float = 1.5) -> np.ndarray:
    """Indices flagged by the boxplot rule: outside [H1 - k*IQR, H3 + k*IQR].

    H1 and H3 are the Tukey hinges (medians of the lower and upper halves,
    the quartile convention used by standard boxplots), so the flags match
    what a boxplot would draw as points beyond the whiskers.
    """
    x = np.asarray(values, dtype=float)
    s = np.sort(x)
    n = len(s)
    half = (n + 1) // 2
    h1 = float(np.median(s[:half]))
    h3 = float(np.median(s[n - half:]))
    iqr = h3 - h1
    return np.flatnonzero((x < h1 - k * iqr) | (x > h3 + k * iqr))
