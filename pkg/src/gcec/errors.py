"""Exception types shared across the library."""


class GcecError(Exception):
    """Base class for every error raised by this package."""


class UnknownGroup(GcecError):
    """Requested group name (or kind) is not in the catalog."""


class DimensionZero(GcecError):
    """A Hilbert-space or irrep dimension below 1 was requested."""


class ParityError(GcecError):
    """so(3) only has odd-dimensional unitary irreps."""


class UnknownIrrepIndex(GcecError):
    """A representation label refers to an irrep index outside the catalog."""


class DimMismatch(GcecError):
    """Operands have incompatible matrix dimensions."""


class LengthMismatch(GcecError):
    """A vector does not have the expected length."""


class NotUnitary(GcecError):
    """A matrix expected to be unitary is not, within tolerance."""


class NotTracePreserving(GcecError):
    """A Kraus set expected to be trace preserving is not, within tolerance."""


class TooManyKraus(GcecError):
    """More Kraus operators than the Hilbert-space dimension admits for an
    extreme channel; such sets are reported as non-extreme rather than
    analyzed further."""


class EmptyManifold(GcecError):
    """A sweep was requested over a family with no trace-preserving points."""


class SchemaError(GcecError):
    """A JSON payload does not match the expected schema."""
