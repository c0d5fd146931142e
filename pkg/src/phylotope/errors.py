"""Exception types shared across the package."""


class PhylotopeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PhylotopeError):
    """Malformed textual input (newick string, group spec, vertex file).

    Carries the byte offset of the first offending character when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownVertexError(PhylotopeError):
    pass


class NotALeafError(PhylotopeError):
    pass


class NotTransitiveError(PhylotopeError):
    """The permutation group H does not act transitively on the states."""


class NotFreeError(PhylotopeError):
    """Some nonidentity element of H fixes a state."""


class NotNormalError(PhylotopeError):
    """H is not normal in the full symmetry group G."""


class CapExceededError(PhylotopeError):
    """An enumeration would produce more objects than the configured cap."""


class ScaleExceededError(PhylotopeError):
    """Exact computation aborted because intermediate integers could not be
    guaranteed to stay within the fast machine-word path, or the instance is
    larger than the implemented algorithms support."""


class ShapeMismatchError(PhylotopeError):
    pass


class NotInvariantError(PhylotopeError):
    """A tensor expected to lie in the space of phylogenetic invariants
    (socket-supported, symmetry-fixed) fails the check."""


class BijectionFailureError(PhylotopeError):
    """Internal consistency check failed: the constructed network/socket
    correspondence is not a bijection."""


class ProjectionNotInSimplexError(PhylotopeError):
    """Fiber product rejected: the shared blocks of the two polytopes do not
    project to a common point set."""


class BlockWidthMismatchError(PhylotopeError):
    pass
