"""Context-directed dispatch over multidimensional predicates.

A dispatch call receives the implicit context of the calling rule, the
given context written at the call site, and the goal.  It builds the
updated context, scores every candidate signature of the goal's
predicate, and runs the implementation clauses of all maximally specific
candidates in definition order.
"""

from __future__ import annotations

from .errors import existence_error, instantiation_error, type_error
from .terms import (
    Atom,
    Struct,
    Var,
    functor_of,
    is_callable_term,
    make_list,
    proper_list,
    rename_term,
    resolve,
    unify,
)

PREDICATE_DIM = "predicate"


def _context_entries(ctx, store):
    """(name, coord) pairs of an engine-built context list."""
    items = proper_list(ctx, store)
    if items is None:
        raise type_error("list", resolve(ctx, store))
    entries = []
    for item in items:
        e = store.deref(item)
        if (isinstance(e, Struct) and e.functor == ":" and len(e.args) == 2):
            name = store.deref(e.args[0])
            if isinstance(name, Atom):
                entries.append((name.name, e.args[1]))
    return entries


def updated_context(store, implicit, given, goal):
    """Merge the call-site context into the implicit one.

    Removals (-name) are applied first, then each name: coord entry
    upserts in order, and finally the goal itself is recorded under the
    predicate dimension.
    """
    base = _context_entries(implicit, store)
    given_items = proper_list(given, store)
    if given_items is None:
        g = store.deref(given)
        if isinstance(g, Var):
            raise instantiation_error()
        raise type_error("list", resolve(given, store))

    removals = set()
    upserts = []
    for item in given_items:
        e = store.deref(item)
        if isinstance(e, Var):
            raise instantiation_error()
        if isinstance(e, Struct) and e.functor == "-" and len(e.args) == 1:
            name = store.deref(e.args[0])
            if isinstance(name, Var):
                raise instantiation_error()
            if not isinstance(name, Atom):
                raise type_error("atom", resolve(name, store))
            removals.add(name.name)
            continue
        if isinstance(e, Struct) and e.functor == ":" and len(e.args) == 2:
            name = store.deref(e.args[0])
            if isinstance(name, Var):
                raise instantiation_error()
            if not isinstance(name, Atom):
                raise type_error("atom", resolve(name, store))
            upserts.append((name.name, e.args[1]))
            continue
        raise type_error("context_entry", resolve(item, store))

    entries = [(n, c) for (n, c) in base if n not in removals]

    def upsert(name, coord):
        for i, (n, _) in enumerate(entries):
            if n == name:
                entries[i] = (name, coord)
                return
        entries.append((name, coord))

    for name, coord in upserts:
        upsert(name, coord)
    upsert(PREDICATE_DIM, store.deref(goal))

    return make_list([Struct(":", (Atom(n), c)) for n, c in entries])


def score_signature(solver, store, sig, ctx, ctx_keys):
    """Score one candidate against a context.

    Returns (score, None) when eligible, else (None, reason).  All
    bindings made while checking are undone before returning.
    """
    missing = [d for d in sig.required_dims if d not in ctx_keys]
    if missing:
        return None, "missing dimension %s" % ", ".join(missing)

    mapping = {}
    ctx_var = rename_term(sig.ctx_var, store, mapping)
    rules = [rename_term(r, store, mapping) for r in sig.rules]
    score_vars = [rename_term(v, store, mapping) for v in sig.score_vars]

    mark = store.mark()
    if not unify(ctx_var, ctx, store, solver.occurs_check):
        store.undo_to(mark)
        return None, "context did not unify"

    from .solver import Frame, conj

    goal = conj(rules)
    it = solver.solve(goal, store, Frame())
    satisfied = False
    score = None
    for _ in it:
        satisfied = True
        score = len([d for d in sig.required_dims if d != PREDICATE_DIM])
        for v in score_vars:
            value = store.deref(v)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                store.undo_to(mark)
                raise type_error("number", resolve(v, store))
            score += value
        it.close()
        break
    store.undo_to(mark)
    if not satisfied:
        return None, "context rules failed"
    return score, None


def candidates_for(kb, name, arity):
    return list(kb.signatures_for(name, arity)) + list(kb.anonymous_signatures)


def explain(solver, store, implicit, given, goal):
    """Scoring report: (context, [(signature, score_or_None, reason)])."""
    goal_d = store.deref(goal)
    if isinstance(goal_d, Var):
        raise instantiation_error()
    if not is_callable_term(goal_d):
        raise type_error("callable", resolve(goal_d, store))
    name, args = functor_of(goal_d)
    ctx = updated_context(store, implicit, given, goal_d)
    ctx_keys = {n for n, _ in _context_entries(ctx, store)}
    sigs = candidates_for(solver.kb, name, len(args))
    report = []
    for sig in sigs:
        score, reason = score_signature(solver, store, sig, ctx, ctx_keys)
        report.append((sig, score, reason))
    return ctx, report


def dispatch(solver, store, implicit, given, goal):
    goal_d = store.deref(goal)
    if isinstance(goal_d, Var):
        raise instantiation_error()
    if not is_callable_term(goal_d):
        raise type_error("callable", resolve(goal_d, store))
    name, args = functor_of(goal_d)
    arity = len(args)

    sigs = candidates_for(solver.kb, name, arity)
    if not sigs:
        raise existence_error(
            "mdp_predicate", Struct("/", (Atom(name), arity)))

    ctx = updated_context(store, implicit, given, goal_d)
    ctx_keys = {n for n, _ in _context_entries(ctx, store)}

    scored = []
    for sig in sigs:
        score, reason = score_signature(solver, store, sig, ctx, ctx_keys)
        if solver.trace_dispatch:
            label = "%s -> %s" % (
                sig.label(),
                ("score %s" % score) if score is not None else reason)
            solver.err.write("dispatch %s/%d: %s\n" % (name, arity, label))
        if score is not None:
            scored.append((sig, score))

    if not scored:
        return

    best = max(s for _, s in scored)
    winners = [sig for sig, s in scored if s == best]
    if solver.trace_dispatch:
        solver.err.write(
            "dispatch %s/%d: running %s\n"
            % (name, arity, ", ".join(sig.label() for sig in winners)))

    for sig in winners:
        if sig.anonymous:
            call = Struct(sig.impl_name, (ctx,))
        else:
            call = Struct(sig.impl_name, (ctx,) + tuple(args))
        key = (sig.impl_name, len(call.args))
        yield from solver.call_predicate(call, key, store)
