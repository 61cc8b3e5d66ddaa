"""Exception types shared across the package."""


class NeuroforageError(Exception):
    """Base class for all package-specific errors."""


class ConfigInvalid(NeuroforageError):
    """World or run configuration violates an invariant or cannot be realized."""


class UnknownRobot(NeuroforageError):
    """A robot id does not exist in the world."""


class UnknownBehavior(NeuroforageError):
    """A behavior id does not name a defined behavior."""


class ZeroResources(NeuroforageError):
    """Fitness is undefined for a world with zero resource units."""


class MalformedGenome(NeuroforageError):
    """A genome violates structural invariants (positions, bounds, tags)."""


class ModeMismatch(NeuroforageError):
    """Two genomes with different behavior modes cannot be recombined."""


class MalformedTrace(NeuroforageError):
    """A replay trace record does not match the expected schema."""


class InvariantViolation(NeuroforageError):
    """An internal consistency check failed; indicates a bug, not bad input."""
