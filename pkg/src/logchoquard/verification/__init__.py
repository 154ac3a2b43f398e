"""Verification records, reports and their closed vocabulary of anchors."""

from .anchors import ANCHORS
from .report import CheckRecord, VerificationReport, make_record, skip_record
