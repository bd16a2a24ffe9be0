"""
Error Hierarchy

Every failure raised by the library derives from HorocurvError so the CLI can
map it to an exit code and a partial report.
"""


class HorocurvError(Exception):
    """Base class for all horocurv failures"""


class ConfigError(HorocurvError, ValueError):
    """Invalid configuration file, flag or numeric parameter"""


class ModelRegistrationError(HorocurvError):
    """A metric model failed its registration checks (e.g. a non-negative sectional curvature)"""


class ChartDomainError(HorocurvError, ValueError):
    """A point lies outside (or within the margin of) the model's chart domain"""


class FrameError(HorocurvError):
    """A frame is not orthonormal, not orthogonal to the velocity, or has degenerated"""


class NonConvergenceError(HorocurvError):
    """The Riccati horizon limit did not settle within tolerance"""


class RiccatiBlowUpError(HorocurvError):
    """A Riccati entry exceeded the blow-up threshold"""


class CapabilityError(HorocurvError):
    """The requested check is not meaningful on this model"""


class WindowError(HorocurvError, ValueError):
    """A requested time window is not covered by the stored trajectory"""
