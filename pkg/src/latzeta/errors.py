"""Exception hierarchy. CLI exit codes key off these classes."""


class LatticeError(Exception):
    exit_code = 1


class CatalogError(LatticeError, KeyError):
    exit_code = 2

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class DomainError(LatticeError, ValueError):
    exit_code = 2


class UnsupportedDimensionError(DomainError):
    pass


class PoleError(DomainError):
    pass


class ConsistencyError(LatticeError, ValueError):
    exit_code = 4


class PreconditionError(LatticeError):
    exit_code = 4


class ResourceError(LatticeError):
    exit_code = 3


class RangeError(LatticeError, ArithmeticError):
    exit_code = 3
