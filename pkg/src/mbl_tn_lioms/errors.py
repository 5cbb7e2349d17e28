"""Categorized errors raised by the library and mapped to CLI exit codes."""


class LiomError(Exception):
    """Base class for all errors raised by mbl_tn_lioms."""

    category = "internal"
    exit_code = 1


class ArgumentError(LiomError, ValueError):
    """An argument is out of range or inconsistent with another argument."""

    category = "argument"
    exit_code = 2


class CapacityError(LiomError, MemoryError):
    """A dense computation would exceed the configured size limit."""

    category = "capacity"
    exit_code = 3


class ContractError(LiomError, ArithmeticError):
    """An input violates a numerical contract (Hermiticity, unit trace, ...)."""

    category = "contract"
    exit_code = 4
