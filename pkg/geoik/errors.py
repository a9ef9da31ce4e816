"""Exception hierarchy for geoik."""


class GeoIKError(ValueError):
    """Base class for all geoik errors."""


class DegenerateInput(GeoIKError):
    """A geometric construction received zero-length or non-finite input."""


class DegenerateHandPlane(DegenerateInput):
    """Shoulder, elbow and circle center are collinear (straight or folded arm)."""


class InternalInconsistency(GeoIKError):
    """Intermediate results contradict each other beyond floating-point tolerance."""


class PolicyViolation(GeoIKError):
    """The elbow policy asked for a point outside the feasible arc."""


class ConfigError(GeoIKError):
    """The geometry document is missing keys or holds invalid values."""

    def __init__(self, message: str, key_path: str = "") -> None:
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}" if key_path else message)


class Unreachable(GeoIKError):
    """The wrist point cannot be reached by the two arm segments."""

    def __init__(self, reachability: str) -> None:
        self.reachability = reachability
        super().__init__(f"wrist point is not reachable ({reachability})")
