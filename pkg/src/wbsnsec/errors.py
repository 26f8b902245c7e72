"""Exception types shared across the package.

Everything user-facing derives from WbsnError so callers (and the CLI)
can distinguish data/protocol failures from genuine bugs.
"""


class WbsnError(Exception):
    """Base class for all structured errors raised by this package."""


# --- codec ---------------------------------------------------------------

class NotInvertibleError(WbsnError):
    """Requested a modular inverse that does not exist."""


class InvalidModuliError(WbsnError):
    """Modulus set is empty, too small, or not pairwise coprime."""


class LengthMismatchError(WbsnError):
    """Block length does not match the key's block length."""


class ValueOutOfRangeError(WbsnError):
    """Value falls outside the range the operation is defined on."""


class EmptyImageError(WbsnError):
    """Image has no pixels."""


class CorruptPayloadError(WbsnError):
    """Payload is internally inconsistent or undecodable under the key."""


class KeyMismatchError(WbsnError):
    """Payload was produced with a key of a different block length."""


# --- quasigroup cipher ---------------------------------------------------

class UnsupportedOrderError(WbsnError):
    """Requested quasigroup order is not supported."""


class LatinSquareError(WbsnError):
    """Operation table is not a Latin square."""


class SymbolOutOfRangeError(WbsnError):
    """Message symbol is outside the cipher alphabet."""


class InvalidBlockLengthError(WbsnError):
    """Block length for block-mode encryption must be >= 1."""


# --- ECG / authentication ------------------------------------------------

class InvalidParametersError(WbsnError):
    """Generator or comparison parameters are out of their valid range."""


class TooShortError(WbsnError):
    """Trace is too short to process."""


class NoPeaksError(WbsnError):
    """No peaks found (flat or sub-threshold signal)."""


class InsufficientPeaksError(WbsnError):
    """Fewer than two peaks; no intervals to derive."""


class EmptySignatureError(WbsnError):
    """Signature carries no interval values."""


# --- containers and files ------------------------------------------------

class BadMagicError(WbsnError):
    """Magic bytes do not match; wrong key, format, or corruption."""


class BadVersionError(WbsnError):
    """Unsupported format version."""


class TruncatedError(WbsnError):
    """Byte sequence ends before the declared content."""


class InconsistentCountsError(WbsnError):
    """Declared counts, widths, or padding disagree with the content."""


class UnknownKeyIdError(WbsnError):
    """Message references a key id the receiver does not hold."""


class FileFormatError(WbsnError):
    """Text or image file does not follow the expected format."""


# --- metrics and synthesis -----------------------------------------------

class EmptyInputError(WbsnError):
    """Metric is undefined on empty input."""


class InvalidDimensionsError(WbsnError):
    """Image dimensions must be positive."""
