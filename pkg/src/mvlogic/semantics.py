"""Finite multialgebras, PNmatrices, valuation search and consequence."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ArityError, SignatureMismatch, UnknownConnective, ValueAbsent
from .formula import canon_key, subformulas

SET_SET = "set-set"
SET_FMLA = "set-fmla"


class MultiAlgebra:
    """Finite carrier plus one table per connective mapping value tuples to
    sets of values.  Empty output sets encode partiality; non-singletons
    encode non-determinism."""

    def __init__(self, name, carrier, interp):
        self.name = name
        self.carrier = tuple(carrier)
        self.interp = {
            conn: {k: frozenset(v) for k, v in table.items()}
            for conn, table in interp.items()
        }
        self._index = {v: i for i, v in enumerate(self.carrier)}
        for conn, table in self.interp.items():
            for key, out in table.items():
                if not out <= set(self.carrier):
                    raise ValueAbsent(
                        "table for %r outputs values outside the carrier" % conn
                    )

    def arity(self, conn):
        table = self.interp[conn]
        if not table:
            return 0
        return len(next(iter(table)))

    @property
    def connectives(self):
        return {conn: self.arity(conn) for conn in self.interp}

    def is_deterministic(self):
        return all(
            len(out) == 1 for table in self.interp.values() for out in table.values()
        )

    def is_total(self):
        return all(
            len(out) >= 1 for table in self.interp.values() for out in table.values()
        )

    def sort_values(self, values):
        return sorted(values, key=self._index.__getitem__)

    def __repr__(self):
        return "MultiAlgebra(%r)" % (self.name,)


class PNMatrix:
    def __init__(self, name, algebra, designated):
        self.name = name
        self.algebra = algebra
        self.designated = frozenset(designated)
        if not self.designated <= set(algebra.carrier):
            raise ValueAbsent("designated values outside the carrier")
        self._components = None

    @property
    def carrier(self):
        return self.algebra.carrier

    def __repr__(self):
        return "PNMatrix(%r)" % (self.name,)


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Fails:
    matrix_index: int
    witness: dict


@dataclass(frozen=True)
class Sound:
    pass


@dataclass(frozen=True)
class Unsound:
    matrix_index: int
    witness: dict


@dataclass
class ConsequenceProblem:
    models: list
    premises: frozenset
    conclusions: frozenset
    mode: str = SET_SET


def eval_multiop(alg, conn, args):
    if conn not in alg.interp:
        raise UnknownConnective("no interpretation for %r" % conn)
    table = alg.interp[conn]
    key = tuple(args)
    if key not in table:
        raise ArityError("no entry for %r%r" % (conn, key))
    return table[key]


def solve_valuations(m, domain, constraints, limit=None):
    """Legal valuations on a subformula-closed domain, restricted by the
    constraint sets; deterministic order from the carrier order and the
    canonical formula order."""
    alg = m.algebra
    order = sorted(domain, key=canon_key)
    results = []
    assign = {}

    def allowed(f):
        if f.is_var:
            opts = alg.carrier
        else:
            try:
                opts = eval_multiop(alg, f.head, tuple(assign[a] for a in f.args))
            except KeyError:
                raise SignatureMismatch(
                    "formula %r not over the matrix signature" % f
                )
            opts = alg.sort_values(opts)
        cons = constraints.get(f)
        if cons is None:
            return list(opts)
        return [v for v in opts if v in cons]

    def rec(i):
        if limit is not None and len(results) >= limit:
            return
        if i == len(order):
            results.append(dict(assign))
            return
        f = order[i]
        for v in allowed(f):
            assign[f] = v
            rec(i + 1)
            if limit is not None and len(results) >= limit:
                return
        assign.pop(f, None)

    rec(0)
    return results


def total_components(m):
    """Maximal carrier subsets on which every restricted entry is non-empty."""
    if m._components is not None:
        return m._components
    alg = m.algebra
    carrier = alg.carrier
    n = len(carrier)

    def is_total(subset):
        sset = frozenset(subset)
        for conn, table in alg.interp.items():
            k = alg.arity(conn)
            for key in product(subset, repeat=k):
                if not (table[key] & sset):
                    return False
        return True

    totals = []
    # check subsets by decreasing size, keeping only maximal ones
    for size in range(n, 0, -1):
        from itertools import combinations

        for subset in combinations(carrier, size):
            sset = frozenset(subset)
            if any(sset <= t for t in totals):
                continue
            if is_total(subset):
                totals.append(sset)
    out = sorted(
        (tuple(alg.sort_values(t)) for t in totals),
        key=lambda t: tuple(alg._index[v] for v in t),
    )
    m._components = out
    return out


def _restrict_constraints(m, domain, base_constraints, component):
    comp = frozenset(component)
    cons = {}
    for f in domain:
        c = base_constraints.get(f)
        cons[f] = comp if c is None else (comp & c)
    return cons


def check_consequence(problem):
    premises = frozenset(problem.premises)
    conclusions = frozenset(problem.conclusions)
    if problem.mode == SET_FMLA and len(conclusions) != 1:
        raise ValueError("Set-Fmla problems need exactly one conclusion")
    domain = subformulas(premises | conclusions)
    for idx, m in enumerate(problem.models):
        base = {}
        for f in premises:
            base[f] = m.designated
        undes = frozenset(m.carrier) - m.designated
        for f in conclusions:
            base[f] = base.get(f, frozenset(m.carrier)) & undes
        if any(not c for c in base.values()):
            continue
        for comp in total_components(m):
            cons = _restrict_constraints(m, domain, base, comp)
            found = solve_valuations(m, domain, cons, limit=1)
            if found:
                return Fails(idx, found[0])
    return Holds()


def check_rule_soundness(rule, models):
    res = check_consequence(
        ConsequenceProblem(models, rule.antecedent, rule.succedent, SET_SET)
    )
    if isinstance(res, Holds):
        return Sound()
    return Unsound(res.matrix_index, res.witness)


def refine_matrix(m, deletions, name=None):
    interp = {
        conn: {k: set(v) for k, v in table.items()}
        for conn, table in m.algebra.interp.items()
    }
    for conn, key, value in deletions:
        key = tuple(key)
        if conn not in interp or key not in interp[conn]:
            raise ValueAbsent("no entry %r%r" % (conn, key))
        if value not in interp[conn][key]:
            raise ValueAbsent("value %r not present in entry %r%r" % (value, conn, key))
        interp[conn][key].discard(value)
    alg = MultiAlgebra(name or (m.algebra.name + "'"), m.algebra.carrier, interp)
    return PNMatrix(name or (m.name + "'"), alg, m.designated)
