class EkrError(ValueError):
    """Base class of all errors raised by the library."""


class InfeasibleError(EkrError):
    """A computation exceeds the configured enumeration caps."""


class CompositeCharacteristic(EkrError):
    pass


class FieldTooLarge(InfeasibleError):
    pass


class ThetaUndefined(EkrError):
    pass


class GroupTooLarge(InfeasibleError):
    pass


class InvalidGenerator(EkrError):
    pass


class NotASubgroup(EkrError):
    pass


class NoSuchSubgroup(EkrError):
    pass


class IdentityMissing(EkrError):
    pass


class NotSemiregular(EkrError):
    pass


class InconsistentCertificate(EkrError):
    pass


class TimeLimitExceeded(EkrError):
    pass


class IncompatibleWeighting(EkrError):
    pass


class NonRealSpectrum(EkrError):
    pass


class DegenerateSpectrum(EkrError):
    pass


class Unbounded(EkrError):
    pass


class NoConvergence(EkrError):
    pass


class NotADivisor(EkrError):
    pass


class InadmissibleParameters(EkrError):
    pass


class EvenQ(InadmissibleParameters):
    pass


class InadmissibleQ(InadmissibleParameters):
    pass


class GroupFileError(EkrError):
    pass
