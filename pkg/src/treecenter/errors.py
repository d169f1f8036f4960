"""Exception hierarchy shared by the library, the CLI, and the HTTP service."""


class TreeToolkitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TreeToolkitError):
    """A value or argument violates a precondition (bad vertex id, bad range)."""


class DocumentError(InputError):
    """A serialized document is malformed or fails structural validation."""


class AgreementError(TreeToolkitError):
    """Label domains do not line up the way the operation requires."""


class ConfigurationError(TreeToolkitError):
    """A required optional piece of state (embedding, correspondence) is missing."""


class PivotError(TreeToolkitError):
    """The pivot tree is too small to absorb the member being relabeled."""
