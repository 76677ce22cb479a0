"""Exception hierarchy.

Every error carries a stable ``code`` string so the command line front end
can map failures onto exit statuses without string matching.
"""


class HetDiagError(Exception):
    code = "E_HETDIAG"


class DataError(HetDiagError):
    """Problems with the input table itself (exit status 3 on the CLI)."""


class AssumptionError(HetDiagError):
    """The data are well formed but a modelling assumption fails (exit 4)."""


class SchemaError(DataError):
    code = "E_SCHEMA"


class TreatmentNotBinaryError(DataError):
    code = "E_TREATMENT_NOT_BINARY"


class DegenerateGroupError(DataError):
    code = "E_DEGENERATE_GROUP"


class RankDeficientError(AssumptionError):
    code = "E_RANK_DEFICIENT"

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(int(c) for c in columns)


class Assumption2Error(AssumptionError):
    code = "E_ASSUMPTION2"


class IdentityBrokenError(HetDiagError):
    code = "E_IDENTITY_BROKEN"


class NonpositiveWeightError(HetDiagError, ValueError):
    code = "E_NONPOSITIVE_WEIGHT"


class TooManyFailuresError(HetDiagError):
    code = "E_TOO_MANY_FAILURES"


class BadConfigError(HetDiagError, ValueError):
    code = "E_BAD_CONFIG"


class NoVariationError(HetDiagError):
    code = "E_NO_VARIATION"
