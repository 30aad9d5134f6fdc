"""Engine error and exception types."""

from __future__ import annotations

from .terms import Atom, MdpError, Struct


class TransformError(MdpError):
    """Consult-time translation of an mdp clause failed."""


class ConsultError(MdpError):
    """A file could not be consulted (parse error, bad directive, ...)."""


class BudgetExceeded(MdpError):
    """The inference budget for a solve run was exhausted."""


class Halt(Exception):
    """Raised by halt/0 and halt/1."""

    def __init__(self, code=0):
        self.code = code
        super().__init__(code)


class PrologThrow(Exception):
    """A ball thrown by throw/1; catch/3 may intercept it."""

    def __init__(self, ball):
        self.ball = ball
        super().__init__(ball)

    def __str__(self):
        from .render import render
        return render(self.ball, quoted=True)


def error_term(kind, *args):
    formal = Struct(kind, args) if args else Atom(kind)
    return Struct("error", (formal, Atom("mdprolog")))


def instantiation_error():
    return PrologThrow(error_term("instantiation_error"))


def type_error(expected, culprit):
    return PrologThrow(error_term("type_error", Atom(expected), culprit))


def existence_error(kind, culprit):
    return PrologThrow(error_term("existence_error", Atom(kind), culprit))


def evaluation_error(what):
    return PrologThrow(error_term("evaluation_error", Atom(what)))
