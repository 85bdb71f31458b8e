from typing import Any


class IdLatticeError(ValueError):
    """ Base class of all errors raised by idlattice """


class NegativeWeight(IdLatticeError):
    pass


class MassExceedsOne(IdLatticeError):
    pass


class DomainError(IdLatticeError):
    pass


class NotNormalized(IdLatticeError):
    pass


class ZeroAtOrigin(IdLatticeError):
    """ The pmf has no atom at 0, so its generating function has no logarithm as a power series """


class AllMassInTail(IdLatticeError):
    pass


class NotFactorizable(IdLatticeError):
    """ The law has no compound Poisson form with integer jumps. The verdict explaining why is kept in `verdict` """
    def __init__(self, message: str, verdict: Any = None) -> None:
        super().__init__(message)
        self.verdict = verdict


class VerdictMismatch(IdLatticeError):
    pass


class PmfFileError(IdLatticeError):
    pass


class FamilySpecError(IdLatticeError):
    pass
