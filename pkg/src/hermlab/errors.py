"""Exception hierarchy shared by every module."""


class HermlabError(Exception):
    """Base class."""


class InputError(HermlabError):
    """Malformed or inconsistent input (CLI exit code 1)."""


class RamifiedTwo(InputError):
    pass


class RamifiedUnsupported(InputError):
    pass


class ContextMismatch(InputError):
    pass


class NotIntegral(InputError):
    pass


class ComputationLimit(HermlabError):
    """A resource or convergence limit was hit (CLI exit code 2)."""


class BudgetExceeded(ComputationLimit):
    pass


class NotStabilized(ComputationLimit):
    def __init__(self, msg, values=None):
        super().__init__(msg)
        self.values = values or []


class DegreeCapExceeded(ComputationLimit):
    pass


class DenominatorVanishes(HermlabError):
    pass


class PoleAtOne(HermlabError):
    pass


class PoleEncountered(HermlabError):
    def __init__(self, factor):
        super().__init__(f"pole in factor {factor}")
        self.factor = factor


class Uncovered(HermlabError):
    """Weil index requested for a block outside the covered cases."""


WeilIndexUncovered = Uncovered
