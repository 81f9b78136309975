"""Exception hierarchy shared by every module."""


class BoolnetError(Exception):
    """Base class for all user-facing errors."""


class NetworkError(BoolnetError):
    """A network is structurally unusable (raised, not reported)."""


class CyclicNetwork(NetworkError):
    pass


class BindingError(BoolnetError):
    pass


class MissingBinding(BindingError):
    pass


class TypeMismatch(BoolnetError):
    pass


class ArityMismatch(BoolnetError):
    pass


class SignatureMismatch(BoolnetError):
    pass


class NotBoolean(BoolnetError):
    pass


class UnsupportedLeaf(BoolnetError):
    pass


class MissingFormat(BoolnetError):
    pass


class InvalidPattern(BoolnetError):
    pass


class WidthMismatch(BoolnetError):
    pass


class IndexOutOfRange(BoolnetError):
    pass


class GuardError(BoolnetError):
    """An exhaustive computation was refused because it is too big."""


class TooWide(GuardError):
    pass


class TooLarge(GuardError):
    pass
