"""Exception types shared across the package."""


class QvmError(Exception):
    """Base class for every package-specific error."""


class InvalidHandle(QvmError):
    """A qubit handle belongs to another process or is no longer usable."""


class ProcessTerminated(InvalidHandle):
    """The process already executed; its program and handles are frozen."""


class ScopeViolation(QvmError):
    """Operation not permitted inside the currently open scopes."""


class ScopeUnderflow(QvmError):
    """A scope end was requested with no matching open scope."""


class DuplicateControl(QvmError):
    """A control qubit was listed twice or is already an active control."""


class ControlTargetOverlap(QvmError):
    """A gate targets a qubit that is currently an active control."""


class UnknownFuture(QvmError):
    """A condition references a future this process never produced."""


class MalformedCode(QvmError):
    """A program failed structural validation or could not be parsed."""


class EngineFailure(QvmError):
    """The execution engine could not complete the program."""


class DegenerateState(EngineFailure):
    """Measurement hit a branch with vanishing probability mass."""


class EntangledSelection(EngineFailure):
    """The selected qubits carry no standalone pure state."""


class IndexOutOfRange(EngineFailure):
    """A qubit index does not exist in the state vector."""


class IndexOverlap(EngineFailure):
    """Target and control indices collide."""


class BadFormat(QvmError):
    """A state-display format string could not be parsed or applied."""


class WrongArity(QvmError):
    """The snapshot does not cover exactly one qubit."""
