"""Exception types shared across the package."""


class MotionInsightError(Exception):
    """Base class for all errors raised by this package."""


# -- ingest ----------------------------------------------------------------

class SchemaError(MotionInsightError):
    """Input file violates the expected schema (missing field, wrong arity)."""


class UnitError(MotionInsightError):
    """Capture declares unsupported units or up axis."""


class JointError(MotionInsightError):
    """Capture is missing one of the canonical joints."""


class RangeError(MotionInsightError):
    """Label frame interval is empty, inverted, or out of bounds."""


class VocabularyError(MotionInsightError):
    """Label uses an action name outside the known vocabulary."""


class OverlapError(MotionInsightError):
    """Segment wall-clock ranges overlap or are out of order."""


# -- kinematics ------------------------------------------------------------

class DegenerateFrame(MotionInsightError):
    """Pelvis and left hip coincide horizontally; no local frame exists."""


class DegenerateTrunk(MotionInsightError):
    """Neck coincides with pelvis; trunk angle is undefined."""


class FeetCoincident(MotionInsightError):
    """Both feet sit on the pelvis coronal axis; weight ratio is undefined."""


# -- events / aggregation --------------------------------------------------

class UnknownFilter(MotionInsightError):
    """Filter spec names an unknown kind or carries a malformed parameter."""


class EmptySlice(MotionInsightError):
    """Simplification requested over a zero-length slice."""


class EmptyScope(MotionInsightError):
    """Distribution requested over a scope with no valid frames."""


class NoValidFrames(MotionInsightError):
    """Event statistics requested for an event with no valid frames."""


# -- synthesis / service ---------------------------------------------------

class SpecError(MotionInsightError):
    """Scenario spec is malformed or out of documented ranges."""


class BindError(MotionInsightError):
    """Service could not bind its port."""
