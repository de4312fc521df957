"""Parser for multiagent PDDL in the ``:agent`` notation (and plain classical PDDL).

Action atoms are told apart from predicate atoms purely by the declared
names: an atom whose head is an action schema is a concurrency constraint.
"""

from __future__ import annotations

from .ast import And, AtomF, DomainAst, Eq, Forall, Imply, Not, Param, ProblemAst, SchemaAction, When
from .sexpr import (
    ArityError,
    NameClashError,
    PddlSyntaxError,
    SList,
    Span,
    Sym,
    UndeclaredNameError,
    UnsupportedError,
    read_one,
)

AGENT_TYPE = "agent"


def _expect_list(x, what: str, source: str) -> SList:
    if not isinstance(x, SList):
        raise PddlSyntaxError(f"expected {what}", x.span, source)
    return x


def _sym(x, what: str, source: str) -> str:
    if not isinstance(x, Sym):
        raise PddlSyntaxError(f"expected {what}", x.span, source)
    return x.text


def parse_typed_list(items, source: str = "", allow_vars: bool = True) -> list[tuple[str, str, Span]]:
    """``a b - t c`` -> [(a, t), (b, t), (c, object)]."""
    out: list[tuple[str, str, Span]] = []
    pending: list[Sym] = []
    i = 0
    items = list(items)
    while i < len(items):
        it = items[i]
        if isinstance(it, SList):
            raise PddlSyntaxError("unexpected list in typed list", it.span, source)
        if it.text == "-":
            if i + 1 >= len(items):
                raise PddlSyntaxError("missing type after '-'", it.span, source)
            t = items[i + 1]
            if isinstance(t, SList):
                if t.head() == "either":
                    raise UnsupportedError("'either' types are not supported", t.span, source)
                raise PddlSyntaxError("expected type name", t.span, source)
            if not pending:
                raise PddlSyntaxError("type without names", it.span, source)
            out.extend((p.text, t.text, p.span) for p in pending)
            pending = []
            i += 2
            continue
        if not allow_vars and it.text.startswith("?"):
            raise PddlSyntaxError("unexpected variable", it.span, source)
        pending.append(it)
        i += 1
    out.extend((p.text, "object", p.span) for p in pending)
    return out


class _DomainParser:
    def __init__(self, source: str):
        self.source = source
        self.dom: DomainAst | None = None

    def err(self, cls, msg, span):
        return cls(msg, span, self.source)

    def parse(self, text: str) -> DomainAst:
        root = read_one(text, self.source)
        if root.head() != "define" or len(root) < 2:
            raise self.err(PddlSyntaxError, "expected (define (domain ...) ...)", root.span)
        header = _expect_list(root[1], "(domain name)", self.source)
        if header.head() != "domain" or len(header) != 2:
            raise self.err(PddlSyntaxError, "expected (domain name)", header.span)
        dom = DomainAst(name=_sym(header[1], "domain name", self.source), span=root.span)
        self.dom = dom
        action_sections: list[SList] = []
        for sec in root.items[2:]:
            sec = _expect_list(sec, "domain section", self.source)
            key = sec.head()
            if key == ":requirements":
                dom.requirements = tuple(_sym(x, "requirement", self.source) for x in sec.items[1:])
            elif key == ":types":
                for name, parent, span in parse_typed_list(sec.items[1:], self.source, allow_vars=False):
                    if name == "object":
                        continue
                    dom.types[name] = parent
            elif key == ":constants":
                for name, t, span in parse_typed_list(sec.items[1:], self.source, allow_vars=False):
                    dom.constants[name] = t
            elif key == ":predicates":
                for p in sec.items[1:]:
                    p = _expect_list(p, "predicate declaration", self.source)
                    name = _sym(p[0], "predicate name", self.source) if len(p) else None
                    if name is None:
                        raise self.err(PddlSyntaxError, "empty predicate declaration", p.span)
                    if name in dom.predicates:
                        raise self.err(NameClashError, f"predicate {name} declared twice", p.span)
                    params = tuple((v, t) for v, t, _ in parse_typed_list(p.items[1:], self.source))
                    dom.predicates[name] = params
            elif key == ":action":
                action_sections.append(sec)
            elif key in (":functions", ":constraints", ":derived", ":durative-action"):
                raise self.err(UnsupportedError, f"{key} is not supported", sec.span)
            else:
                raise self.err(PddlSyntaxError, f"unknown domain section {key}", sec.span)
        self._check_types()
        # Headers first so that action atoms may refer to actions declared later.
        headers = [self._action_header(sec) for sec in action_sections]
        for name, agent, params, sec in headers:
            if name in dom.actions:
                raise self.err(NameClashError, f"action {name} declared twice", sec.span)
            if name in dom.predicates:
                raise self.err(NameClashError, f"{name} is declared both as predicate and action", sec.span)
            dom.actions[name] = SchemaAction(name, agent, params, None, None, sec.span)
        for name, agent, params, sec in headers:
            pre, eff = self._action_body(sec, agent, params)
            dom.actions[name] = SchemaAction(name, agent, params, pre, eff, sec.span)
        return dom

    def _check_types(self):
        dom = self.dom
        known = set(dom.types) | {"object"}
        for t, parent in dom.types.items():
            if parent not in known:
                raise self.err(UndeclaredNameError, f"undeclared parent type {parent} of {t}", dom.span)
        for c, t in dom.constants.items():
            if t not in known:
                raise self.err(UndeclaredNameError, f"undeclared type {t} of constant {c}", dom.span)
        for p, params in dom.predicates.items():
            for v, t in params:
                if t not in known:
                    raise self.err(UndeclaredNameError, f"undeclared type {t} in predicate {p}", dom.span)

    def _check_param_types(self, params, span):
        known = set(self.dom.types) | {"object"}
        for v, t in params:
            if t not in known:
                raise self.err(UndeclaredNameError, f"undeclared type {t}", span)
            if not v.startswith("?"):
                raise self.err(PddlSyntaxError, f"parameter {v} must be a variable", span)

    def _action_header(self, sec: SList):
        if len(sec) < 2:
            raise self.err(PddlSyntaxError, "action without name", sec.span)
        name = _sym(sec[1], "action name", self.source)
        agent: Param | None = None
        params: tuple[Param, ...] = ()
        items = sec.items[2:]
        i = 0
        while i < len(items):
            key = _sym(items[i], "action keyword", self.source)
            if key == ":agent":
                # ":agent ?a - agent" spans several symbols up to the next keyword
                j = i + 1
                raw = []
                while j < len(items) and not (isinstance(items[j], Sym) and items[j].text.startswith(":")):
                    raw.append(items[j])
                    j += 1
                typed = parse_typed_list(raw, self.source)
                if len(typed) != 1:
                    raise self.err(PddlSyntaxError, ":agent takes exactly one typed variable", items[i].span)
                agent = (typed[0][0], typed[0][1])
                self._check_param_types([agent], items[i].span)
                i = j
                continue
            if i + 1 >= len(items):
                raise self.err(PddlSyntaxError, f"missing value for {key}", items[i].span)
            if key == ":parameters":
                lst = _expect_list(items[i + 1], "parameter list", self.source)
                params = tuple((v, t) for v, t, _ in parse_typed_list(lst.items, self.source))
                self._check_param_types(params, lst.span)
            elif key not in (":precondition", ":effect"):
                raise self.err(PddlSyntaxError, f"unknown action keyword {key}", items[i].span)
            i += 2
        names = [v for v, _ in ((agent,) if agent else ()) + params]
        if len(set(names)) != len(names):
            raise self.err(NameClashError, f"duplicate parameter in action {name}", sec.span)
        return name, agent, params, sec

    def _action_body(self, sec: SList, agent, params):
        pre = eff = None
        items = sec.items[2:]
        scope = {v: t for v, t in ((agent,) if agent else ()) + params}
        for i, it in enumerate(items):
            if isinstance(it, Sym) and it.text == ":precondition":
                pre = self.formula(items[i + 1], scope, mode="pre")
            elif isinstance(it, Sym) and it.text == ":effect":
                eff = self.formula(items[i + 1], scope, mode="eff")
        return pre, eff

    # mode: "pre" (conditions, action atoms allowed), "eff" (effects), "cond" (when-condition)
    def formula(self, x, scope: dict[str, str], mode: str):
        if isinstance(x, Sym):
            raise self.err(PddlSyntaxError, f"unexpected symbol {x.text}", x.span)
        head = x.head()
        if head is None:
            if len(x) == 0:
                return And((), x.span)
            raise self.err(PddlSyntaxError, "expected formula", x.span)
        if head == "and":
            return And(tuple(self.formula(p, scope, mode) for p in x.items[1:]), x.span)
        if head == "not":
            if len(x) != 2:
                raise self.err(PddlSyntaxError, "not takes one argument", x.span)
            inner = self.formula(x[1], scope, mode)
            if not isinstance(inner, (AtomF, Eq)):
                raise self.err(UnsupportedError, "negation is only supported on atoms", x.span)
            return Not(inner, x.span)
        if head == "forall":
            if len(x) != 3:
                raise self.err(PddlSyntaxError, "forall takes a variable list and a body", x.span)
            lst = _expect_list(x[1], "variable list", self.source)
            vs = tuple((v, t) for v, t, _ in parse_typed_list(lst.items, self.source))
            self._check_param_types(vs, lst.span)
            inner = dict(scope)
            inner.update(vs)
            return Forall(vs, self.formula(x[2], inner, mode), x.span)
        if head == "when":
            if mode != "eff":
                raise self.err(UnsupportedError, "when is only allowed in effects (no nesting)", x.span)
            if len(x) != 3:
                raise self.err(PddlSyntaxError, "when takes a condition and an effect", x.span)
            cond = self.formula(x[1], scope, "cond")
            effect = self.formula(x[2], scope, "when-eff")
            return When(cond, effect, x.span)
        if head in ("imply", "implies"):
            if mode not in ("pre", "cond"):
                raise self.err(UnsupportedError, "imply is only allowed in conditions", x.span)
            if len(x) != 3:
                raise self.err(PddlSyntaxError, "imply takes two arguments", x.span)
            return Imply(self.formula(x[1], scope, mode), self.formula(x[2], scope, mode), x.span)
        if head in ("or", "exists"):
            raise self.err(UnsupportedError, f"{head} is not supported", x.span)
        if head == "=":
            if len(x) != 3:
                raise self.err(ArityError, "= takes two arguments", x.span)
            l, r = (self.term(t, scope) for t in x.items[1:])
            return Eq(l, r, x.span)
        return self.atom(x, scope, mode)

    def term(self, t, scope) -> str:
        name = _sym(t, "term", self.source)
        if name.startswith("?"):
            if name not in scope:
                raise self.err(UndeclaredNameError, f"unbound variable {name}", t.span)
        elif name not in self.dom.constants:
            raise self.err(UndeclaredNameError, f"undeclared constant {name}", t.span)
        return name

    def atom(self, x: SList, scope, mode) -> AtomF:
        name = x.head()
        dom = self.dom
        terms = tuple(self.term(t, scope) for t in x.items[1:])
        if name in dom.predicates:
            arity = len(dom.predicates[name])
            if len(terms) != arity:
                raise self.err(ArityError, f"{name} expects {arity} arguments, got {len(terms)}", x.span)
            return AtomF(name, terms, False, x.span)
        if name in dom.actions:
            if mode in ("eff", "when-eff"):
                raise self.err(UnsupportedError, f"action atom ({name} ...) in an effect", x.span)
            arity = len(dom.actions[name].all_params)
            if len(terms) != arity:
                raise self.err(ArityError, f"action {name} expects {arity} arguments, got {len(terms)}", x.span)
            return AtomF(name, terms, True, x.span)
        raise self.err(UndeclaredNameError, f"undeclared predicate or action {name}", x.span)


def parse_domain(text: str, source: str = "") -> DomainAst:
    return _DomainParser(source).parse(text)


def parse_problem(text: str, domain: DomainAst, source: str = "") -> ProblemAst:
    root = read_one(text, source)
    if root.head() != "define" or len(root) < 2:
        raise PddlSyntaxError("expected (define (problem ...) ...)", root.span, source)
    header = _expect_list(root[1], "(problem name)", source)
    if header.head() != "problem" or len(header) != 2:
        raise PddlSyntaxError("expected (problem name)", header.span, source)
    prob = ProblemAst(name=_sym(header[1], "problem name", source), domain_name="", span=root.span)
    known_types = set(domain.types) | {"object"}
    goal_expr = None
    init_exprs = []
    for sec in root.items[2:]:
        sec = _expect_list(sec, "problem section", source)
        key = sec.head()
        if key == ":domain":
            prob.domain_name = _sym(sec[1], "domain name", source)
            if prob.domain_name != domain.name:
                raise UndeclaredNameError(
                    f"problem refers to domain {prob.domain_name}, got {domain.name}", sec.span, source
                )
        elif key == ":requirements":
            pass
        elif key == ":objects":
            for name, t, span in parse_typed_list(sec.items[1:], source, allow_vars=False):
                if t not in known_types:
                    raise UndeclaredNameError(f"unknown type {t} of object {name}", span, source)
                if name in domain.constants and domain.constants[name] != t:
                    raise NameClashError(f"object {name} redeclares a constant", span, source)
                prob.objects[name] = t
        elif key == ":init":
            init_exprs = list(sec.items[1:])
        elif key == ":goal":
            if len(sec) != 2:
                raise PddlSyntaxError("goal takes one formula", sec.span, source)
            goal_expr = sec[1]
        elif key in (":metric", ":constraints"):
            raise UnsupportedError(f"{key} is not supported", sec.span, source)
        else:
            raise PddlSyntaxError(f"unknown problem section {key}", sec.span, source)
    objects = dict(domain.constants)
    objects.update(prob.objects)

    def ground_atom(x) -> AtomF:
        x = _expect_list(x, "atom", source)
        name = x.head()
        if name is None:
            raise PddlSyntaxError("expected atom", x.span, source)
        if name not in domain.predicates:
            if name in domain.actions:
                raise UnsupportedError(f"action atom ({name} ...) outside an action", x.span, source)
            raise UndeclaredNameError(f"undeclared predicate {name}", x.span, source)
        args = []
        for t in x.items[1:]:
            a = _sym(t, "object", source)
            if a not in objects:
                raise UndeclaredNameError(f"unknown object {a}", t.span, source)
            args.append(a)
        arity = len(domain.predicates[name])
        if len(args) != arity:
            raise ArityError(f"{name} expects {arity} arguments, got {len(args)}", x.span, source)
        return AtomF(name, tuple(args), False, x.span)

    for x in init_exprs:
        x = _expect_list(x, "init atom", source)
        if x.head() == "not":
            continue  # closed world: negative init literals are redundant
        if x.head() == "=":
            raise UnsupportedError("numeric/equality init facts are not supported", x.span, source)
        prob.init.append(ground_atom(x))

    def goal_literals(x):
        x = _expect_list(x, "goal formula", source)
        h = x.head()
        if h == "and" or (h is None and len(x) == 0):
            for p in x.items[1:]:
                yield from goal_literals(p)
        elif h == "not":
            if len(x) != 2:
                raise PddlSyntaxError("not takes one argument", x.span, source)
            yield ground_atom(x[1]), False
        elif h in ("or", "exists", "forall", "imply", "when"):
            raise UnsupportedError(f"goal must be a conjunction of literals, found {h}", x.span, source)
        else:
            yield ground_atom(x), True

    if goal_expr is not None:
        prob.goal = list(goal_literals(goal_expr))
    prob.agents = sorted(o for o, t in objects.items() if domain.is_subtype(t, AGENT_TYPE))
    if domain.multiagent and not prob.agents:
        raise UndeclaredNameError("multiagent domain but no objects of type agent", prob.span, source)
    return prob
