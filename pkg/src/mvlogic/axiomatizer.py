"""Monadicity checking (separator search over the unary clone) and
automatic generation of analytic Set-Set rules for matrix refinements."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .calculus import Rule
from .errors import NotARefinement
from .formula import app, canon_key, render_formula, substitute, subformulas, var


@dataclass
class Discriminator:
    """Per carrier value: formulas in one variable p whose value sets land
    inside the designated set (pos) or its complement (neg)."""

    pos: dict
    neg: dict

    def formulas(self, value):
        return self.pos.get(value, frozenset()) | self.neg.get(value, frozenset())


@dataclass
class NotMonadic:
    witness: tuple
    saturated: bool
    explored: int


_P = var("p")


def unary_profile(m, formula):
    """For each carrier value a, the set of values the formula can take,
    evaluating connectives as set-valued multioperations."""
    alg = m.algebra

    def ev(f, a):
        if f.is_var:
            return frozenset({a})
        arg_sets = [ev(g, a) for g in f.args]
        out = set()
        table = alg.interp[f.head]
        for combo in product(*arg_sets):
            out |= table[combo]
        return frozenset(out)

    return tuple(ev(formula, a) for a in m.carrier)


def _combine(alg, conn, arg_profiles):
    table = alg.interp[conn]
    out = []
    for i in range(len(alg.carrier)):
        vals = set()
        for combo in product(*(p[i] for p in arg_profiles)):
            vals |= table[combo]
        out.append(frozenset(vals))
    return tuple(out)


def _enumerate_unary(m, max_depth):
    """Unary formulas by increasing connective depth, de-duplicated by their
    induced profile on the matrix.  Yields (depth, formula, profile)."""
    alg = m.algebra
    conns = sorted(alg.interp, key=lambda c: (alg.arity(c), c))
    seen = set()
    levels = {0: []}
    prof = tuple(frozenset({a}) for a in m.carrier)
    seen.add(prof)
    levels[0].append((_P, prof))
    yield 0, _P, prof
    for conn in conns:
        if alg.arity(conn) == 0:
            f = app(conn)
            p = tuple(alg.interp[conn][()] for _ in m.carrier)
            if p not in seen:
                seen.add(p)
                levels[0].append((f, p))
                yield 0, f, p
    depth = 0
    while depth < max_depth:
        depth += 1
        fresh = []
        pool = [fp for d in range(depth) for fp in levels.get(d, [])]
        frontier = set(f for f, _ in levels.get(depth - 1, []))
        for conn in conns:
            k = alg.arity(conn)
            if k == 0:
                continue
            for args in product(pool, repeat=k):
                if not any(f in frontier for f, _ in args):
                    continue
                f = app(conn, *(g for g, _ in args))
                p = _combine(alg, conn, [pr for _, pr in args])
                if p in seen:
                    continue
                seen.add(p)
                fresh.append((f, p))
                yield depth, f, p
        levels[depth] = fresh
        if not fresh:
            return


def _separates(profile, i, j, designated, carrier):
    des = designated
    undes = frozenset(carrier) - des
    a, b = profile[i], profile[j]
    if a <= des and b <= undes:
        return 1
    if a <= undes and b <= des:
        return -1
    return 0


def find_discriminator(m, max_depth):
    """Search for a discriminator; each returned formula is a smallest-depth
    separator for some value pair.  When every pair is separated the matrix
    is monadic; otherwise the first unseparated pair is the witness,
    definitive when the unary clone saturated below max_depth."""
    carrier = m.carrier
    n = len(carrier)
    found = []
    pending = {(i, j) for i in range(n) for j in range(i + 1, n)}
    explored = 0
    saturated = True
    gen = _enumerate_unary(m, max_depth)
    last_depth = -1
    for depth, f, profile in gen:
        explored += 1
        last_depth = depth
        hits = []
        for (i, j) in sorted(pending):
            s = _separates(profile, i, j, m.designated, carrier)
            if s:
                hits.append((i, j, s))
        if hits:
            found.append((f, profile, hits))
            pending -= {(i, j) for i, j, _ in hits}
        if not pending:
            break
    else:
        saturated = last_depth < max_depth
    if pending:
        i, j = sorted(pending)[0]
        return NotMonadic((carrier[i], carrier[j]), saturated, explored)
    pos = {a: set() for a in carrier}
    neg = {a: set() for a in carrier}
    for f, profile, hits in found:
        for i, j, s in hits:
            if s == 1:
                pos[carrier[i]].add(f)
                neg[carrier[j]].add(f)
            else:
                neg[carrier[i]].add(f)
                pos[carrier[j]].add(f)
    return Discriminator(
        {a: frozenset(v) for a, v in pos.items()},
        {a: frozenset(v) for a, v in neg.items()},
    )


_ARG_VARS = [var(n) for n in ("p", "q", "r", "p1", "p2", "p3")]


def generate_refinement_rules(base, refined, d):
    """One rule per (connective entry, deleted value): the antecedent gathers
    the pos formulas of the argument values and of the deleted output value
    applied to the compound; the succedent gathers the neg formulas."""
    if tuple(base.carrier) != tuple(refined.carrier):
        raise NotARefinement("carriers differ")
    if base.designated != refined.designated:
        raise NotARefinement("designated sets differ")
    rules = []
    for conn in base.algebra.interp:
        if conn not in refined.algebra.interp:
            raise NotARefinement("connective %r missing from refinement" % conn)
        k = base.algebra.arity(conn)
        for key in sorted(base.algebra.interp[conn]):
            old = base.algebra.interp[conn][key]
            new = refined.algebra.interp[conn].get(key)
            if new is None or not new <= old:
                raise NotARefinement(
                    "entry %r%r is not a refinement" % (conn, key)
                )
            compound = app(conn, *_ARG_VARS[:k])
            for c in base.algebra.sort_values(old - new):
                ant = set()
                succ = set()
                for i, a in enumerate(key):
                    for f in d.pos.get(a, ()):
                        ant.add(substitute(f, {"p": _ARG_VARS[i]}))
                    for f in d.neg.get(a, ()):
                        succ.add(substitute(f, {"p": _ARG_VARS[i]}))
                for f in d.pos.get(c, ()):
                    ant.add(substitute(f, {"p": compound}))
                for f in d.neg.get(c, ()):
                    succ.add(substitute(f, {"p": compound}))
                name = "del_%s_%s_%s" % (conn, "_".join(key), c)
                rules.append(Rule(name, frozenset(ant), frozenset(succ)))
    return rules


def _rule_subsumes(small, big):
    """True when a variable renaming embeds small's antecedent and succedent
    into big's (big is then a dilution of small)."""
    small_vars = sorted(
        {v.head for f in small.antecedent | small.succedent for v in subformulas(f) if v.is_var}
    )
    big_vars = sorted(
        {v.head for f in big.antecedent | big.succedent for v in subformulas(f) if v.is_var}
    )
    if not small_vars:
        return (
            small.antecedent <= big.antecedent
            and small.succedent <= big.succedent
        )
    for target in product(big_vars or ["p"], repeat=len(small_vars)):
        rho = {sv: var(tv) for sv, tv in zip(small_vars, target)}
        ant = {substitute(f, rho) for f in small.antecedent}
        succ = {substitute(f, rho) for f in small.succedent}
        if ant <= big.antecedent and succ <= big.succedent:
            return True
    return False


def subsume_simplify(rules):
    """Drop dilutions: any rule another kept rule embeds into under a
    variable renaming.  Output order follows the input."""
    rules = list(rules)
    keep = []
    for i, r in enumerate(rules):
        dropped = False
        for j, other in enumerate(rules):
            if i == j:
                continue
            if _rule_subsumes(other, r):
                # mutual subsumption (renamed duplicates): keep the first
                if _rule_subsumes(r, other) and i < j:
                    continue
                dropped = True
                break
        if not dropped:
            keep.append(r)
    return keep


def describe_discriminator(d, carrier):
    lines = []
    for a in carrier:
        pos = ", ".join(
            render_formula(f) for f in sorted(d.pos.get(a, ()), key=canon_key)
        )
        neg = ", ".join(
            render_formula(f) for f in sorted(d.neg.get(a, ()), key=canon_key)
        )
        lines.append("%s: pos {%s} neg {%s}" % (a, pos, neg))
    return "\n".join(lines)
