"""Exception types raised by the public operations.

Every error that is part of an operation's contract is a subclass of
:class:`CurvelabError`, so callers can catch the package's failures with a
single except clause while still distinguishing the individual conditions.
"""


class CurvelabError(Exception):
    """Base class for all contract errors raised by this package."""


class UnsupportedSurface(CurvelabError):
    """The requested signature has no reference triangulation shipped."""


class InvalidDescriptor(CurvelabError):
    """A subsurface descriptor is malformed or inconsistent."""


class NotProper(CurvelabError):
    """A descriptor names the whole surface instead of a proper subsurface."""


class NotAdmissible(CurvelabError):
    """Edge weights violate a corner condition (negative or odd corner count)."""


class EmptyAfterReduction(CurvelabError):
    """Reduction removed every component; no essential multicurve remains."""


class MixedTriangulations(CurvelabError):
    """Two multicurves living on different triangulations were combined."""


class AlreadyDisjoint(CurvelabError):
    """A surgery step was requested for a pair with intersection number zero."""


class NoAdmissibleBigon(CurvelabError):
    """No surgery bigon through the puncture exists; representation is broken."""


class SurfaceMismatch(CurvelabError):
    """A mapping-class word was applied to a curve on the wrong surface."""


class NotSimpleLoop(CurvelabError):
    """A point-push loop reference does not name an embedded based loop."""


class NotSeparating(CurvelabError):
    """The operation needs a separating multicurve but got something else."""


class DisconnectedSubsurface(CurvelabError):
    """Subsurface projection was asked for a disconnected target."""


class NoIntersection(CurvelabError):
    """Nothing to project: the multicurve misses the subsurface entirely."""


class NotOverlapping(CurvelabError):
    """The pair of subsurfaces does not overlap, so the gap is undefined."""


class BudgetExceeded(CurvelabError):
    """An enumeration sweep exceeded its configured budget."""


class UnknownVertex(CurvelabError):
    """A queried vertex is not part of the snapshot."""


class UniverseTooSmall(CurvelabError):
    """No admissible subsurface terms exist for a distance estimate."""


class SampleExhausted(CurvelabError):
    """A sampling driver ran out of candidates before hitting its quota."""


class RadiusExceedsSnapshot(CurvelabError):
    """A probe asked for a radius beyond what the snapshot supports."""


class WrongIntersection(CurvelabError):
    """A witness configuration does not meet its required intersection number."""


class FormatError(CurvelabError):
    """A data file has the wrong format version or is malformed."""
