"""Exception types raised across the toolkit.

All data-level failures derive from MtkitError so callers (and the CLI)
can distinguish bad input data from genuine I/O or programming errors.
"""


class MtkitError(Exception):
    """Base class for all toolkit data errors."""


# --- manifest / corpus ---

class MalformedRecord(MtkitError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InconsistentSpeakerAttributes(MtkitError):
    def __init__(self, speaker_id, message=""):
        super().__init__(f"speaker {speaker_id!r}: inconsistent attributes. {message}".strip())
        self.speaker_id = speaker_id


class SampleRateMismatch(MtkitError):
    pass


class EmptyManifest(MtkitError):
    pass


# --- audio ---

class UnsupportedFormat(MtkitError):
    pass


class StartBeyondEnd(MtkitError):
    pass


class EmptyComponentList(MtkitError):
    pass


# --- mixer ---

class InsufficientSpeakers(MtkitError):
    pass


class LanguageUnavailable(MtkitError):
    pass


class InfeasiblePlan(MtkitError):
    pass


# --- sot ---

class EmptySegmentList(MtkitError):
    pass


class SegmentContainsDelimiter(MtkitError):
    pass


# --- tasks ---

class NoEnrollmentAvailable(MtkitError):
    pass


class NoValidKeyword(MtkitError):
    pass


class MonolingualRecord(MtkitError):
    pass


class EmptyTarget(MtkitError):
    pass


# --- metrics ---

class MultiSegmentTarget(MtkitError):
    pass


class DuplicateId(MtkitError):
    pass


class UnknownHypothesisId(MtkitError):
    pass
