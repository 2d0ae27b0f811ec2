"""Exception types shared across the package.

Everything derives from GridError so callers can catch the whole family
at once.  The split into "validation" errors (bad user input) and
"contract" errors (a broken internal invariant, i.e. a bug) is what the
command line layer uses to pick its exit code.
"""


class GridError(ValueError):
    """Base class for all errors raised by this package."""


class GridSyntaxError(GridError):
    """Malformed grid description text."""


class NotAPermutation(GridError):
    """The X (or O) column list is not a permutation of 1..N."""


class BadIndex(GridError):
    """A marking column lies outside 1..N."""


class IndexOutOfRange(GridError):
    """A row or column index outside 1..N."""


class SizeLimit(GridError):
    """Requested enumeration exceeds the configured size cap."""


class StructureViolation(GridError):
    """Rectangle-pair bookkeeping broke its counting contract (a bug)."""


class ParityViolation(GridError):
    """Requested annulus sign profile fails the parity condition."""


class Infeasible(GridError):
    """Sign constraints inconsistent for a parity-legal target (a bug)."""


class ProductNotOne(GridError):
    """Component sign vector whose product is not +1."""


class ProjectionViolation(GridError):
    """Annulus sign products disagree between generators (corrupt data)."""


class GridMismatch(GridError):
    """Operands belong to different grid diagrams."""


class DSquaredNonzero(GridError):
    """The signed boundary map does not square to zero (a bug)."""
