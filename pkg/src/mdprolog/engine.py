"""Public entry point: consult programs, run queries, inspect dispatch."""

from __future__ import annotations

import sys
from importlib import resources

from .dispatcher import explain as dispatch_explain
from .errors import ConsultError, Halt, PrologThrow, TransformError
from .kb import KnowledgeBase
from .reader import ReaderError, parse_program, parse_term
from .render import render
from .solver import BOOTSTRAP, Frame, Solver
from .terms import (
    Atom,
    BindingStore,
    NIL,
    Struct,
    Var,
    rename_term,
    resolve,
    unify,
)
from .transformer import expand_source_item, phase1_rewrite

_MIN_RECURSION_LIMIT = 100_000


def _prelude_path():
    return resources.files("mdprolog").joinpath("prelude.mdp")


class Solution:
    """One query answer: resolved bindings for the named query variables."""

    def __init__(self, bindings, optable):
        self.bindings = bindings  # name -> term, in first-occurrence order
        self._optable = optable

    def __getitem__(self, name):
        return self.bindings[name]

    def __contains__(self, name):
        return name in self.bindings

    def render(self, name):
        return render(self.bindings[name], None, self._optable, quoted=False)

    def text(self):
        visible = [(n, t) for n, t in self.bindings.items()
                   if not n.startswith("_")]
        if not visible:
            return "true"
        return ",\n".join(
            "%s = %s" % (n, render(t, None, self._optable, quoted=False))
            for n, t in visible)

    def __repr__(self):
        return "<Solution %s>" % self.text().replace("\n", " ")


class Engine:
    def __init__(self, prelude=True, occurs_check=False, budget=None,
                 trace_dispatch=False, out=None, err=None):
        if sys.getrecursionlimit() < _MIN_RECURSION_LIMIT:
            sys.setrecursionlimit(_MIN_RECURSION_LIMIT)
        self.kb = KnowledgeBase()
        self.solver = Solver(self.kb, out=out, err=err,
                             occurs_check=occurs_check, budget=budget,
                             trace_dispatch=trace_dispatch)
        self.consult_text(BOOTSTRAP, filename="<bootstrap>")
        if prelude:
            self.consult_text(_prelude_path().read_text(), filename="<prelude>")

    # -- configuration -------------------------------------------------------

    @property
    def budget(self):
        return self.solver.budget

    @budget.setter
    def budget(self, value):
        self.solver.budget = value

    @property
    def trace_dispatch(self):
        return self.solver.trace_dispatch

    @trace_dispatch.setter
    def trace_dispatch(self, value):
        self.solver.trace_dispatch = value

    @property
    def out(self):
        return self.solver.out

    @out.setter
    def out(self, sink):
        self.solver.out = sink

    @property
    def err(self):
        return self.solver.err

    @err.setter
    def err(self, sink):
        self.solver.err = sink

    # -- consulting ------------------------------------------------------

    def consult_file(self, path):
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        self.consult_text(text, filename=str(path))

    def consult_text(self, text, filename="<text>"):
        self.kb.forget_file(filename)
        try:
            for item in parse_program(text, self.kb.optable, filename):
                self._consult_item(item)
        except (ReaderError, ConsultError, TransformError):
            raise
        except PrologThrow as exc:
            raise ConsultError(
                "%s: uncaught exception: %s"
                % (filename, self._render(exc.ball))) from exc

    def _consult_item(self, item):
        where = "%s:%s" % (item.filename, item.line)
        if item.is_directive:
            goal = item.term.args[0]
            name = getattr(goal, "functor", getattr(goal, "name", None))
            if name == "op":
                return  # applied by the reader while parsing
            store = BindingStore()
            ctx_var = Var("_DirectiveCtx")
            rewritten = phase1_rewrite(self, goal, ctx_var, 0, where)
            store.bind(ctx_var, NIL)
            try:
                if not self.solver.solve_once(rewritten, store):
                    raise ConsultError("directive failed at %s" % where)
            except PrologThrow as exc:
                raise ConsultError(
                    "directive raised %s at %s"
                    % (self._render(exc.ball), where)) from exc
            return
        clauses, sig = expand_source_item(self, item.term, item.filename,
                                          item.line)
        for head, body in clauses:
            self.kb.add_clause(head, body, item.filename, item.line)
        if sig is not None:
            sig.filename = item.filename
            sig.line = item.line
            self.kb.add_signature(sig)

    # -- transformer hooks -------------------------------------------------

    def _run_hook(self, hook_name, ctx_var, term):
        key = (hook_name, 3)
        if not self.kb.clauses.get(key):
            return None
        store = BindingStore()
        out_var = Var("_HookOut")
        goal = Struct(hook_name, (ctx_var, term, out_var))
        it = self.solver.call_predicate(goal, key, store)
        for _ in it:
            result = resolve(out_var, store)
            it.close()
            return result
        return None

    def apply_term_hook(self, ctx_var, term):
        return self._run_hook("hook_mdp_term", ctx_var, term)

    def apply_spec_hook(self, ctx_var, entry):
        return self._run_hook("hook_context_rule_mdp_term", ctx_var, entry)

    # -- queries -------------------------------------------------------------

    def _prepare(self, text):
        term, varmap = parse_term(text, self.kb.optable)
        store = BindingStore()
        ctx_var = Var("_QueryCtx")
        goal = phase1_rewrite(self, term, ctx_var, 0, "<query>")
        store.bind(ctx_var, NIL)
        return goal, store, varmap

    def solutions(self, text):
        """Lazily enumerate solutions of a query given as text."""
        goal, store, varmap = self._prepare(text)
        self.solver.reset_run()
        for _ in self.solver.solve(goal, store, Frame()):
            bindings = {name: resolve(var, store)
                        for name, var in varmap.items()}
            yield Solution(bindings, self.kb.optable)

    def query(self, text, max_solutions=None):
        """All (or the first max_solutions) solutions, as a list."""
        out = []
        for sol in self.solutions(text):
            out.append(sol)
            if max_solutions is not None and len(out) >= max_solutions:
                break
        return out

    def run(self, text):
        """True when the query has at least one solution."""
        goal, store, _ = self._prepare(text)
        self.solver.reset_run()
        return self.solver.solve_once(goal, store)

    def explain(self, text):
        """Dispatch scoring report for a single ``Given ? Goal`` query."""
        goal, store, _ = self._prepare(text)
        if not (isinstance(goal, Struct) and goal.functor == "$dispatch"):
            raise ValueError("explain() needs a dispatch query (Given ? Goal)")
        self.solver.reset_run()
        implicit, given, inner = goal.args
        return dispatch_explain(self.solver, store, implicit, given, inner)

    # -- introspection ---------------------------------------------------------

    def dump_expansion(self):
        """Readable listing of every signature and its implementation clauses."""
        lines = []
        for sig in self.kb.all_signatures():
            dims = make_list_text(sig.required_dims)
            lines.append("%% %s  (required dimensions: %s)"
                         % (sig.label(), dims))
            sig_term = Struct("mdp_signature", (
                Atom(sig.name), sig.arity, Atom(sig.impl_name), sig.ctx_var,
                Struct("context_rules", sig.rules) if sig.rules else Atom("true"),
            ))
            lines.append(self._render(sig_term, quoted=True) + ".")
            key = (sig.impl_name, (1 if sig.anonymous else sig.arity + 1))
            for clause in self.kb.clauses_for(key):
                term = clause.head if clause.body is Atom("true") else \
                    Struct(":-", (clause.head, clause.body))
                lines.append(self._render(term, quoted=True) + ".")
            lines.append("")
        return "\n".join(lines)

    def _render(self, term, quoted=False):
        return render(term, None, self.kb.optable, quoted=quoted)


def make_list_text(names):
    return "[%s]" % ", ".join(names) if names else "[]"
