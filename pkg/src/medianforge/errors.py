"""Exception hierarchy shared by all medianforge modules."""


class MedianForgeError(Exception):
    """Base class for every error raised by this package."""


class InputError(MedianForgeError):
    """Invalid input: unknown vertex, malformed JSON, broken invariant."""


class NoMedianError(MedianForgeError):
    """A vertex triple has no common interval point."""

    def __init__(self, triple):
        self.triple = tuple(triple)
        super().__init__(f"triple {self.triple} has no median")


class NotUniqueError(MedianForgeError):
    """A vertex triple has more than one candidate median."""

    def __init__(self, triple, candidates):
        self.triple = tuple(triple)
        self.candidates = frozenset(candidates)
        super().__init__(
            f"triple {self.triple} has {len(self.candidates)} candidate medians: "
            f"{sorted(self.candidates)}"
        )


class HalfspaceError(MedianForgeError):
    """An edge class does not split the graph into two halfspaces.

    Raised when hyperplane structure is requested for a graph that is not
    median (removing an edge class must leave exactly two components).
    """


class NotBijectiveError(InputError):
    """A vertex map is not a bijection of the vertex set."""


class NotAdjacencyPreservingError(InputError):
    """A vertex bijection maps some edge to a non-edge."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        u, v = self.witness
        super().__init__(f"edge ({u}, {v}) is mapped to a non-edge")


class ResourceLimitError(MedianForgeError):
    """A configured resource ceiling (cell count, orientation count,
    breakpoint count, rational bit size) was exceeded."""


class InternalError(MedianForgeError):
    """A postcondition that should hold by theorem failed; indicates a bug
    or an input outside the documented domain."""
