"""Exception hierarchy. Every error carries a stable short code used by the CLI."""


class FacredError(Exception):
    code = "error"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class InvalidParameters(FacredError):
    code = "invalid-parameters"


class InvalidBias(FacredError):
    code = "invalid-bias"


class CrtModuliNotCoprime(FacredError):
    code = "crt-moduli-not-coprime"


class SamplerTimeout(FacredError):
    code = "sampler-timeout"


class ArityMismatch(FacredError):
    code = "arity-mismatch"


class WidthMismatch(FacredError):
    code = "width-mismatch"


class SliceBudgetExceeded(FacredError):
    code = "slice-budget-exceeded"


class DecodeFailure(FacredError):
    code = "decode-failure"


class AmplifyExhausted(FacredError):
    code = "amplify-exhausted"


class ExpansionCapExceeded(FacredError):
    code = "expansion-cap-exceeded"


class MonomialCapExceeded(FacredError):
    code = "monomial-cap-exceeded"


class EdgesclusionInconsistency(FacredError):
    code = "edgesclusion-inconsistency"


class UnsupportedRegexType(FacredError):
    code = "unsupported-regex-type"


class NfaNotAcyclic(FacredError):
    code = "nfa-not-acyclic"
