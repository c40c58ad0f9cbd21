"""Exception hierarchy shared by every module."""


class PnaiveError(Exception):
    """Base class for all library errors."""


class DomainError(PnaiveError, ValueError):
    """An argument violates an operation's precondition."""


class ModelMismatch(DomainError):
    """Two objects belong to different action models."""


class UnsupportedModel(PnaiveError):
    """The operation is not available for this kind of model."""


class CapabilityError(UnsupportedModel):
    """A certificate-producing path was requested on an approximate model."""


class SubgroupTooLarge(DomainError):
    """Subgroup closure exceeded the enumeration cap (not finite / not elliptic)."""


class SearchFailure(PnaiveError):
    """A bounded search exhausted its budget without a verified answer."""


class Refusal(PnaiveError):
    """An exhaustive check would exceed its enumeration cap.

    ``estimate`` carries the number of cases that would have been enumerated.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NeedsEllipticization(PnaiveError):
    """A loxodromic input would need a coned-off space to become elliptic."""


class FiniteNormalSubgroupError(DomainError):
    """A nontrivial finite subgroup quasi-fixes the entire sampled ball."""


class OracleDisagreement(PnaiveError):
    """The normal-form and matrix oracles disagree on a word (encoding bug)."""


class CertificateFailure(PnaiveError):
    """A freeness certificate failed inside the partner pipeline."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
