"""Typed exceptions for the whole package.

Every class carries a stable ``code`` string so callers (and the CLI exit
code mapping) can dispatch on the failure kind without parsing messages.
"""


class ScmLabError(Exception):
    """Base class for all package errors."""

    code = "ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class InvalidScmError(ScmLabError):
    """An SCM failed validation; ``issues`` holds the violation list."""

    code = "INVALID_SCM"

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


class CycleError(ScmLabError):
    code = "CYCLE"


class ArityMismatchError(ScmLabError):
    code = "ARITY_MISMATCH"


class SupportTooLargeError(ScmLabError):
    code = "SUPPORT_TOO_LARGE"


class NTooLargeError(ScmLabError):
    code = "N_TOO_LARGE"


class MTooLargeError(ScmLabError):
    code = "M_TOO_LARGE"


class LengthMismatchError(ScmLabError):
    code = "LENGTH_MISMATCH"


class KindMismatchError(ScmLabError):
    code = "KIND_MISMATCH"


class BadPositionError(ScmLabError):
    code = "BAD_POSITION"


class OracleFormatError(ScmLabError):
    """Serialized oracle bytes violate the canonical grammar."""

    code = "BAD_ORACLE"


class OracleDecodeError(ScmLabError):
    """Base for decoder failures on oracles outside a family's image."""

    code = "DECODE"


class NotTreeLikeError(OracleDecodeError):
    code = "NOT_TREE_LIKE"


class AmbiguousParentError(OracleDecodeError):
    code = "AMBIGUOUS_PARENT"


class NotBipartiteLikeError(OracleDecodeError):
    code = "NOT_BIPARTITE_LIKE"


class NotXorLikeError(OracleDecodeError):
    code = "NOT_XOR_LIKE"


class InvalidTreeError(ScmLabError):
    code = "INVALID_TREE"


class InvalidSequenceError(ScmLabError):
    code = "INVALID_SEQUENCE"


class NotMemberError(ScmLabError):
    code = "NOT_MEMBER"


class BadRangeError(ScmLabError):
    code = "BAD_RANGE"
