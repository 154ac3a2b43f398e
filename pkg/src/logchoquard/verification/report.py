"""Verification records and reports."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import NamedTuple

from beartype import beartype

from ..errors import InvalidParameterError
from .anchors import ANCHORS

logger = logging.getLogger(__name__)


@beartype
class CheckRecord(NamedTuple):
    """Outcome of one numerical check.

    Parameters
    ----------
    check_id : str
        Identifier of the check, unique within a report.
    anchor : str
        Key of `ANCHORS` naming the statement that is checked.
    measured : float or None
        Measured value.
    bound : float or None
        Bound the measured value is compared with.
    margin : float or None
        Signed margin, nonnegative when the check passes.
    passed : bool
        Outcome.
    witness : float, str or None
        Location of the worst case (grid point, radius, ...).
    note : str
        Free text (reconstructions, skipped checks).
    """

    check_id: str
    anchor: str
    measured: float | None
    bound: float | None
    margin: float | None
    passed: bool
    witness: float | str | None = None
    note: str = ""


def make_record(
    check_id: str,
    anchor: str,
    *,
    measured: float | None,
    bound: float | None,
    upper: bool = True,
    witness: float | str | None = None,
    note: str = "",
    slack: float = 0.0,
) -> CheckRecord:
    """Build a record comparing ``measured`` with ``bound``.

    With ``upper=True`` the check is ``measured <= bound + slack`` and the
    margin is ``bound - measured``; otherwise the check is
    ``measured >= bound - slack`` and the margin is ``measured - bound``.
    A record with a missing value is a failure.
    """
    if anchor not in ANCHORS:
        msg = f"Unknown anchor {anchor!r}"
        raise InvalidParameterError(msg)
    if measured is None or bound is None:
        return CheckRecord(
            check_id, anchor, measured, bound, None, False, witness, note
        )
    measured = float(measured)
    bound = float(bound)
    margin = bound - measured if upper else measured - bound
    passed = bool(margin >= -slack)
    return CheckRecord(
        check_id, anchor, measured, bound, margin, passed, witness, note
    )


def skip_record(check_id: str, anchor: str, reason: str) -> CheckRecord:
    """Record of a check that was skipped on degenerate input."""
    if anchor not in ANCHORS:
        msg = f"Unknown anchor {anchor!r}"
        raise InvalidParameterError(msg)
    return CheckRecord(
        check_id, anchor, None, None, None, True, None, "skipped: " + reason
    )


class VerificationReport:
    """Ordered collection of `CheckRecord`.

    Examples
    --------
    >>> report = lcq.VerificationReport()
    >>> report.add(lcq.make_record("c2", "riesz-constant", measured=0.1,
    ...                            bound=0.2))
    >>> report.passed
    True
    """

    def __init__(self, records: list[CheckRecord] | None = None) -> None:
        self.records: list[CheckRecord] = []
        for record in records or []:
            self.add(record)

    def add(self, record: CheckRecord) -> None:
        """Append a record; its anchor must belong to `ANCHORS`."""
        if record.anchor not in ANCHORS:
            msg = f"Unknown anchor {record.anchor!r}"
            raise InvalidParameterError(msg)
        if not record.passed:
            logger.info(
                "Check %s failed: measured %s, bound %s, witness %s",
                record.check_id,
                record.measured,
                record.bound,
                record.witness,
            )
        self.records.append(record)

    def extend(self, other: VerificationReport | list[CheckRecord]) -> None:
        """Append every record of another report."""
        if isinstance(other, VerificationReport):
            other = other.records
        records = other
        for record in records:
            self.add(record)

    @property
    def passed(self) -> bool:
        """True if every record passed."""
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [record for record in self.records if not record.passed]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, check_id: str) -> CheckRecord:
        for record in self.records:
            if record.check_id == check_id:
                return record
        raise KeyError(check_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VerificationReport):
            return NotImplemented
        return self.to_json() == other.to_json()

    def to_json(self) -> str:
        """Serialize the report; floats are written in shortest repr form."""
        payload = {
            "passed": self.passed,
            "records": [record._asdict() for record in self.records],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        payload = json.loads(text)
        return cls([CheckRecord(**record) for record in payload["records"]])

    def write(self, path: str | Path) -> None:
        """Write the report as JSON."""
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def read(cls, path: str | Path) -> VerificationReport:
        return cls.from_json(Path(path).read_text())
