"""Exception hierarchy shared across the package."""


class GallaiRamseyError(Exception):
    """Base class for all package errors."""


class MissingEdge(GallaiRamseyError):
    """An unordered vertex pair was never assigned a color."""


class DuplicateEdge(GallaiRamseyError):
    """An unordered vertex pair was assigned a color more than once."""


class ColorOutOfRange(GallaiRamseyError):
    """A color index lies outside 1..k."""


class NotABijection(GallaiRamseyError):
    """A supplied vertex or color permutation is not a bijection."""


class UnsupportedPattern(GallaiRamseyError):
    """A pattern kind the detector does not handle."""


class SpecArityMismatch(GallaiRamseyError):
    """A target spec does not have one entry per color."""


class RainbowTrianglePresent(GallaiRamseyError):
    """Partition requested for a coloring that is not rainbow-triangle-free."""


class NotAPartition(GallaiRamseyError):
    """Part list does not partition the vertex set."""


class InvalidPartition(GallaiRamseyError):
    """A partition fails the Gallai partition invariants for the coloring."""


class ColorCollision(GallaiRamseyError):
    """Substitution color offsets map filling colors outside the result palette."""


class TooLarge(GallaiRamseyError):
    """Search requested beyond the supported vertex count."""


class OutOfRange(GallaiRamseyError):
    """A bracketing query has no answer in the supported range."""


class CounterexampleFound(GallaiRamseyError):
    """A search expected to be exhaustive produced a witness coloring.

    Carries the certificate so callers can inspect or print the witness.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CorruptCheckpoint(GallaiRamseyError):
    """A checkpoint file is unreadable or belongs to a different engine version."""
