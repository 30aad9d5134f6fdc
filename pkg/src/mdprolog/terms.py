"""Term representation, binding store, unification and standard order.

Terms are immutable values:

* atoms        -- ``Atom`` (interned by name)
* integers     -- Python ``int`` (engine enforces a 64-bit range in arithmetic)
* floats       -- Python ``float``
* variables    -- ``Var`` (identity-based, carries a print name)
* compounds    -- ``Struct`` (functor + non-empty arg tuple)

Lists are compounds of ``'.'/2`` terminated by the atom ``[]``.
"""

from __future__ import annotations

import itertools


class MdpError(Exception):
    """Base class for engine errors that are not Prolog exceptions."""


class Var:
    """A logic variable. Identity is what matters; the name is for printing."""

    __slots__ = ("name", "serial")
    _counter = itertools.count(1)

    def __init__(self, name=None):
        self.serial = next(Var._counter)
        self.name = name if name is not None else "_G%d" % self.serial

    def __repr__(self):
        return "Var(%s)" % self.name


class Atom:
    """An interned constant. ``Atom('foo') is Atom('foo')``."""

    __slots__ = ("name",)
    _interned: dict = {}

    def __new__(cls, name):
        cached = cls._interned.get(name)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        object.__setattr__(self, "name", name)
        cls._interned[name] = self
        return self

    def __setattr__(self, key, value):
        raise AttributeError("atoms are immutable")

    def __repr__(self):
        return "Atom(%s)" % self.name


class Struct:
    """A compound term: functor text plus at least one argument."""

    __slots__ = ("functor", "args")

    def __init__(self, functor, args):
        args = tuple(args)
        if not functor:
            raise MdpError("compound functor must be non-empty")
        if not args:
            raise MdpError("compound arity must be >= 1")
        object.__setattr__(self, "functor", functor)
        object.__setattr__(self, "args", args)

    def __setattr__(self, key, value):
        raise AttributeError("compound terms are immutable")

    @property
    def arity(self):
        return len(self.args)

    def __eq__(self, other):
        return (
            isinstance(other, Struct)
            and self.functor == other.functor
            and self.args == other.args
        )

    def __hash__(self):
        return hash((self.functor, self.args))

    def __repr__(self):
        return "Struct(%s/%d)" % (self.functor, len(self.args))


NIL = Atom("[]")
TRUE = Atom("true")

Term = object  # informal alias used in signatures


def is_number(t):
    return isinstance(t, (int, float)) and not isinstance(t, bool)


def is_callable_term(t):
    return isinstance(t, (Atom, Struct))


def functor_of(t):
    """(name, args) of a callable term."""
    if isinstance(t, Atom):
        return t.name, ()
    if isinstance(t, Struct):
        return t.functor, t.args
    raise MdpError("not a callable term: %r" % (t,))


def indicator(t):
    name, args = functor_of(t)
    return name, len(args)


class BindingStore:
    """Variable bindings plus a trail for backtracking.

    A store is confined to one solve run.  ``mark``/``undo_to`` give exact
    restoration of the pre-mark binding state.
    """

    __slots__ = ("map", "trail")

    def __init__(self):
        self.map = {}
        self.trail = []

    def deref(self, t):
        m = self.map
        while isinstance(t, Var):
            nxt = m.get(t)
            if nxt is None:
                return t
            t = nxt
        return t

    def bind(self, var, term):
        self.map[var] = term
        self.trail.append(var)

    def mark(self):
        return len(self.trail)

    def undo_to(self, mark):
        trail = self.trail
        m = self.map
        while len(trail) > mark:
            del m[trail.pop()]


_EMPTY_STORE = BindingStore()


def occurs_in(var, term, store):
    stack = [term]
    while stack:
        t = store.deref(stack.pop())
        if t is var:
            return True
        if isinstance(t, Struct):
            stack.extend(t.args)
    return False


def unify(t1, t2, store, occurs_check=False):
    """Extend ``store`` so both terms dereference equal; rewind on failure."""
    mark = store.mark()
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a = store.deref(a)
        b = store.deref(b)
        if a is b:
            continue
        if isinstance(a, Var):
            if isinstance(b, Var):
                # bind the younger variable to the older one
                if a.serial < b.serial:
                    store.bind(b, a)
                else:
                    store.bind(a, b)
                continue
            if occurs_check and occurs_in(a, b, store):
                store.undo_to(mark)
                return False
            store.bind(a, b)
            continue
        if isinstance(b, Var):
            if occurs_check and occurs_in(b, a, store):
                store.undo_to(mark)
                return False
            store.bind(b, a)
            continue
        if isinstance(a, Atom) or isinstance(b, Atom):
            if a is b:
                continue
            store.undo_to(mark)
            return False
        if is_number(a) or is_number(b):
            if type(a) is type(b) and a == b:
                continue
            store.undo_to(mark)
            return False
        if isinstance(a, Struct) and isinstance(b, Struct):
            if a.functor != b.functor or len(a.args) != len(b.args):
                store.undo_to(mark)
                return False
            stack.extend(zip(a.args, b.args))
            continue
        store.undo_to(mark)
        return False
    return True


def _order_class(t):
    if isinstance(t, Var):
        return 0
    if is_number(t):
        return 1
    if isinstance(t, Atom):
        return 2
    return 3


def compare_terms(t1, t2, store=_EMPTY_STORE):
    """Standard order: Var < Number < Atom < Compound. Returns -1/0/1."""
    a = store.deref(t1)
    b = store.deref(t2)
    ca, cb = _order_class(a), _order_class(b)
    if ca != cb:
        return -1 if ca < cb else 1
    if ca == 0:
        return -1 if a.serial < b.serial else (0 if a is b else 1)
    if ca == 1:
        if a < b:
            return -1
        if a > b:
            return 1
        # equal value, float orders before int
        ra = 0 if isinstance(a, float) else 1
        rb = 0 if isinstance(b, float) else 1
        return -1 if ra < rb else (0 if ra == rb else 1)
    if ca == 2:
        return -1 if a.name < b.name else (0 if a is b else 1)
    if len(a.args) != len(b.args):
        return -1 if len(a.args) < len(b.args) else 1
    if a.functor != b.functor:
        return -1 if a.functor < b.functor else 1
    for x, y in zip(a.args, b.args):
        c = compare_terms(x, y, store)
        if c:
            return c
    return 0


RESOLVE_DEPTH_LIMIT = 100_000


def resolve(term, store, depth=0):
    """Deep-substitute bindings; unbound variables stay as-is."""
    if depth > RESOLVE_DEPTH_LIMIT:
        raise MdpError("term too deep while resolving (cyclic binding?)")
    t = store.deref(term)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(resolve(a, store, depth + 1) for a in t.args))
    return t


def rename_term(term, store, mapping=None):
    """Copy with fresh variables (after resolving current bindings)."""
    if mapping is None:
        mapping = {}

    def walk(t, depth):
        if depth > RESOLVE_DEPTH_LIMIT:
            raise MdpError("term too deep while copying")
        t = store.deref(t)
        if isinstance(t, Var):
            fresh = mapping.get(t)
            if fresh is None:
                fresh = Var(t.name)
                mapping[t] = fresh
            return fresh
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(walk(a, depth + 1) for a in t.args))
        return t

    return walk(term, 0)


def variant_of(t1, t2, store=_EMPTY_STORE):
    """True when the terms are equal up to a variable bijection."""
    fwd, bwd = {}, {}

    def walk(a, b):
        a = store.deref(a)
        b = store.deref(b)
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.get(a, b) is not b or bwd.get(b, a) is not a:
                return False
            fwd[a] = b
            bwd[b] = a
            return True
        if isinstance(a, Var) or isinstance(b, Var):
            return False
        if isinstance(a, Struct) and isinstance(b, Struct):
            return (
                a.functor == b.functor
                and len(a.args) == len(b.args)
                and all(walk(x, y) for x, y in zip(a.args, b.args))
            )
        if is_number(a) and is_number(b):
            return type(a) is type(b) and a == b
        return a is b

    return walk(t1, t2)


def make_list(items, tail=NIL):
    result = tail
    for item in reversed(list(items)):
        result = Struct(".", (item, result))
    return result


def list_parts(term, store=_EMPTY_STORE):
    """Split a list term into (elements, tail). Proper lists have tail []."""
    items = []
    t = store.deref(term)
    while isinstance(t, Struct) and t.functor == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = store.deref(t.args[1])
    return items, t


def proper_list(term, store=_EMPTY_STORE):
    """Elements of a proper list, or None."""
    items, tail = list_parts(term, store)
    return items if tail is NIL else None
