"""Confusion counts, classification accuracy and threshold calibration."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .errors import EmptyInputError
from .inspection import Verdict


@dataclass(frozen=True)
class LabeledVerdict:
    image_id: str
    truth: Verdict
    predicted: Verdict
    distance: float

    def __post_init__(self):
        if not self.distance >= 0:
            raise ValueError(f"distance must be >= 0, got {self.distance}")

    @property
    def correct(self) -> bool:
        return self.truth == self.predicted


@dataclass(frozen=True)
class AccuracyReport:
    total: int
    correct: int
    true_ok: int
    true_defective: int
    false_ok: int
    false_defective: int
    ca_percent: float

    def as_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        """Plain-text confusion table; rows are ground truth, columns predictions."""
        w = max(len(str(self.total)), 9)
        corner = "truth \\ predicted"
        lines = [
            f"{corner:<18}{'OK':>{w}}{'DEFECTIVE':>{w + 1}}",
            f"{'OK':<18}{self.true_ok:>{w}}{self.false_defective:>{w + 1}}",
            f"{'DEFECTIVE':<18}{self.false_ok:>{w}}{self.true_defective:>{w + 1}}",
            f"correct={self.correct} total={self.total}",
            f"CA={self.ca_percent:.1f}%",
        ]
        return "\n".join(lines)


def confusion(verdicts: Iterable[LabeledVerdict]) -> AccuracyReport:
    """Tally verdicts against ground truth.

    ``false_ok`` counts defective tiles that were passed, ``false_defective``
    clean tiles that were rejected.
    """
    tp_ok = tp_def = f_ok = f_def = 0
    for v in verdicts:
        if v.truth is Verdict.OK:
            if v.predicted is Verdict.OK:
                tp_ok += 1
            else:
                f_def += 1
        elif v.predicted is Verdict.DEFECTIVE:
            tp_def += 1
        else:
            f_ok += 1
    total = tp_ok + tp_def + f_ok + f_def
    if total == 0:
        raise EmptyInputError("EmptyInput: no verdicts to score")
    correct = tp_ok + tp_def
    return AccuracyReport(
        total=total,
        correct=correct,
        true_ok=tp_ok,
        true_defective=tp_def,
        false_ok=f_ok,
        false_defective=f_def,
        ca_percent=100.0 * correct / total,
    )


def calibrate_threshold(clean_distances: Sequence[float], margin: float = 0.05) -> float:
    """Largest distance seen on known-clean images, widened by ``margin``."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if len(clean_distances) == 0:
        raise EmptyInputError("EmptyInput: no clean distances to calibrate from")
    return max(clean_distances) * (1.0 + margin)
