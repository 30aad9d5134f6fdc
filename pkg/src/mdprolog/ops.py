"""Operator table for reading and writing terms.

An operator name has at most one prefix entry and one infix/postfix entry,
with priorities in 1..1200.  ``op/3`` directives replace entries in place.
"""

from __future__ import annotations

from .terms import MdpError

PREFIX_FIXITIES = {"fy", "fx"}
INFIX_FIXITIES = {"xfx", "xfy", "yfx"}
POSTFIX_FIXITIES = {"xf", "yf"}


class OperatorError(MdpError):
    pass


class OperatorTable:
    def __init__(self):
        self.prefix = {}   # name -> (priority, fixity)
        self.infix = {}    # name -> (priority, fixity); includes postfix

    def add(self, priority, fixity, name):
        if not isinstance(priority, int) or not 1 <= priority <= 1200:
            raise OperatorError("operator priority out of range: %r" % (priority,))
        if fixity in PREFIX_FIXITIES:
            self.prefix[name] = (priority, fixity)
        elif fixity in INFIX_FIXITIES or fixity in POSTFIX_FIXITIES:
            self.infix[name] = (priority, fixity)
        else:
            raise OperatorError("unknown operator fixity: %r" % (fixity,))

    def prefix_op(self, name):
        return self.prefix.get(name)

    def infix_op(self, name):
        entry = self.infix.get(name)
        if entry and entry[1] in INFIX_FIXITIES:
            return entry
        return None

    def postfix_op(self, name):
        entry = self.infix.get(name)
        if entry and entry[1] in POSTFIX_FIXITIES:
            return entry
        return None

    def is_operator(self, name):
        return name in self.prefix or name in self.infix

    def max_priority(self, name):
        best = 0
        for table in (self.prefix, self.infix):
            entry = table.get(name)
            if entry:
                best = max(best, entry[0])
        return best

    def copy(self):
        other = OperatorTable()
        other.prefix = dict(self.prefix)
        other.infix = dict(self.infix)
        return other


_DEFAULT_OPS = [
    (1200, "xfx", ":-"),
    (1200, "fy", ":-"),
    (1150, "xfx", "#"),
    (1150, "fx", "dynamic"),
    (1100, "xfy", ";"),
    (1050, "xfy", "->"),
    (990, "xfx", "?"),
    (990, "fy", "?"),
    (900, "fy", "\\+"),
    (700, "xfx", "="),
    (700, "xfx", "\\="),
    (700, "xfx", "=="),
    (700, "xfx", "\\=="),
    (700, "xfx", "is"),
    (700, "xfx", "<"),
    (700, "xfx", ">"),
    (700, "xfx", "=<"),
    (700, "xfx", ">="),
    (700, "xfx", "=:="),
    (700, "xfx", "=\\="),
    (700, "xfx", "=.."),
    (500, "yfx", "+"),
    (500, "yfx", "-"),
    (400, "yfx", "*"),
    (400, "yfx", "/"),
    (400, "yfx", "mod"),
    (200, "fy", "-"),
    (200, "xfy", ":"),
    (200, "xfx", "@"),
]


def default_table():
    table = OperatorTable()
    for priority, fixity, name in _DEFAULT_OPS:
        table.add(priority, fixity, name)
    return table
