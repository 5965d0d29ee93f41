"""Set-Set Hilbert calculi, analytic proof search, countermodel extraction
from saturated partitions, and the Set-Fmla disjunction transform."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product

from .errors import ClassificationError, MissingDisjunction
from .formula import (
    app,
    big_or,
    canon_key,
    generalized_subformulas,
    subformulas,
    substitute,
    up_,
    down_,
    var,
    variables,
)
from .semantics import SET_FMLA, SET_SET


@dataclass(frozen=True)
class Rule:
    name: str
    antecedent: frozenset
    succedent: frozenset

    @property
    def variables(self):
        return sorted(variables(self.antecedent | self.succedent))


@dataclass
class Calculus:
    name: str
    rules: list
    xi: tuple = None
    framework: str = SET_SET
    source: "Calculus" = None
    models: list = None


@dataclass
class TreeNode:
    label: frozenset
    rule: str = None
    subst: dict = None
    children: list = field(default_factory=list)
    star: bool = False
    closed: bool = False


@dataclass
class Proved:
    tree: TreeNode


@dataclass
class SaturatedPartition:
    omega: frozenset
    omega_bar: frozenset
    base: frozenset
    universe: frozenset


@dataclass
class Refuted:
    partition: SaturatedPartition


@dataclass
class OutOfBudget:
    pass


class _Budget(Exception):
    pass


class _RefutedSignal(Exception):
    def __init__(self, label):
        self.label = label


def _build_instances(calc, targets, universe):
    """Ground every rule by mapping its variables into `targets`; keep an
    instance only if all of its formulas stay inside `universe` (when given).
    Per-formula projection tables keep this linear in the useful work."""
    instances = []
    seen = set()
    for rule in calc.rules:
        vs = rule.variables
        fmlas = sorted(rule.antecedent, key=canon_key) + sorted(
            rule.succedent, key=canon_key
        )
        n_ant = len(rule.antecedent)
        if not vs:
            ant = frozenset(fmlas[:n_ant])
            succ = frozenset(fmlas[n_ant:])
            if universe is not None and not (ant | succ) <= universe:
                continue
            key = (ant, succ)
            if ant & succ or key in seen:
                continue
            seen.add(key)
            instances.append((rule.name, {}, ant, succ))
            continue
        # projection table per rule formula, over that formula's own variables
        proj = []
        for f in fmlas:
            fv = sorted(variables(f))
            table = {}
            for combo in product(targets, repeat=len(fv)):
                inst = substitute(f, dict(zip(fv, combo)))
                if universe is not None and inst not in universe:
                    inst = None
                table[combo] = inst
            proj.append((tuple(vs.index(v) for v in fv), table))
        for combo in product(targets, repeat=len(vs)):
            parts = []
            ok = True
            for positions, table in proj:
                inst = table[tuple(combo[i] for i in positions)]
                if inst is None:
                    ok = False
                    break
                parts.append(inst)
            if not ok:
                continue
            ant = frozenset(parts[:n_ant])
            succ = frozenset(parts[n_ant:])
            if ant & succ:
                continue
            key = (ant, succ)
            if key in seen:
                continue
            seen.add(key)
            instances.append((rule.name, dict(zip(vs, combo)), ant, succ))
    return instances


def _model_truths(calc, base, universe):
    """One frozenset of designated universe formulas per (deterministic
    model, variable assignment) pair; used to steer branch selection."""
    models = getattr(calc, "models", None)
    if not models or universe is None:
        return None
    vs = sorted(variables(base))
    if len(vs) > 4:
        return None
    if sum(len(m.carrier) ** len(vs) for m in models) > 20000:
        return None
    truths = []
    for m in models:
        interp = m.algebra.interp
        if any(
            len(out) != 1 for table in interp.values() for out in table.values()
        ):
            return None
        for combo in product(m.carrier, repeat=len(vs)):
            cache = dict(zip((var(v) for v in vs), combo))

            def ev(f):
                got = cache.get(f)
                if got is None:
                    (got,) = interp[f.head][tuple(ev(a) for a in f.args)]
                    cache[f] = got
                return got

            try:
                truths.append(
                    frozenset(f for f in universe if ev(f) in m.designated)
                )
            except KeyError:
                # universe formula outside the model's signature
                return None
    return truths


class _Searcher:
    def __init__(self, instances, goal, budget, truths=None, complete=True):
        self.goal = goal
        self.budget = budget
        self.truths = truths
        self.complete = complete
        self.steps = 0
        self.names = [i[0] for i in instances]
        self.substs = [i[1] for i in instances]
        self.ants = [i[2] for i in instances]
        self.succs = [i[3] for i in instances]
        self.by_ant = defaultdict(list)
        self.by_succ = defaultdict(list)
        for idx, (_, _, ant, succ) in enumerate(instances):
            for f in ant:
                self.by_ant[f].append(idx)
            for f in succ:
                self.by_succ[f].append(idx)
        self.succ_sorted = [sorted(s, key=canon_key) for s in self.succs]

    def run(self, premises):
        label = set(premises)
        missing = [len(a) for a in self.ants]
        satisfied = bytearray(len(self.ants))
        queue = []
        for f in label:
            for i in self.by_succ.get(f, ()):
                satisfied[i] = 1
        for i, ant in enumerate(self.ants):
            missing[i] = sum(1 for f in ant if f not in label)
            if missing[i] == 0 and not satisfied[i]:
                queue.append(i)
        if label & self.goal:
            return TreeNode(frozenset(label), closed=True)
        try:
            return self._search(label, missing, satisfied, queue, [])
        except _RefutedSignal as sig:
            return frozenset(sig.label)
        except _Budget:
            return None

    def _add(self, phi, label, missing, satisfied, queue):
        label.add(phi)
        for i in self.by_ant.get(phi, ()):
            missing[i] -= 1
            if missing[i] == 0 and not satisfied[i]:
                queue.append(i)
        for i in self.by_succ.get(phi, ()):
            satisfied[i] = 1

    def _search(self, label, missing, satisfied, queue, pending):
        self.steps += 1
        if self.steps > self.budget:
            raise _Budget()
        steps_taken = []
        # phase 1: close under non-branching applicable instances
        while queue:
            i = queue.pop()
            if satisfied[i] or missing[i] > 0:
                continue
            succ = self.succ_sorted[i]
            if not succ:
                node = TreeNode(
                    frozenset(label),
                    self.names[i],
                    self.substs[i],
                    [TreeNode(frozenset(label), star=True)],
                )
                return self._wrap(steps_taken, label, node)
            if len(succ) == 1:
                phi = succ[0]
                self._add(phi, label, missing, satisfied, queue)
                steps_taken.append((i, phi))
                self.steps += 1
                if self.steps > self.budget:
                    raise _Budget()
                if phi in self.goal:
                    node = TreeNode(frozenset(label), closed=True)
                    return self._wrap(steps_taken, label, node)
            else:
                pending.append(i)
        # phase 2: pick a branching instance adding the fewest formulas,
        # preferring one whose other branches close by unit propagation
        candidates = [
            i for i in pending if missing[i] == 0 and not satisfied[i]
        ]
        if not candidates:
            raise _RefutedSignal(set(label))
        candidates.sort(key=lambda i: (len(self.succs[i]), i))
        S = [t for t in self.truths if t >= label] if self.truths else []
        if S:
            weight = {}

            def w(phi):
                got = weight.get(phi)
                if got is None:
                    got = sum(1 for t in S if phi in t)
                    weight[phi] = got
                return got

            def score(i):
                alive = [
                    w(phi)
                    for phi in self.succ_sorted[i]
                    if phi not in self.goal and w(phi)
                ]
                return (len(alive), sum(alive), len(self.succs[i]), i)

            order = sorted(candidates, key=score)
        else:
            order = candidates
            best = candidates[0]
            best_open = len(self.succs[best])
            for i in candidates[:64]:
                open_children = sum(
                    1
                    for phi in self.succ_sorted[i]
                    if phi not in self.goal
                    and not self._unit_closes(label, missing, satisfied, phi)
                )
                if open_children < best_open:
                    best, best_open = i, open_children
                    if best_open <= 1:
                        break
            if best != candidates[0]:
                order = [best] + [i for i in candidates if i != best]
        for best in order:
            try:
                children = []
                for phi in self.succ_sorted[best]:
                    c_label = set(label)
                    c_missing = list(missing)
                    c_satisfied = bytearray(satisfied)
                    c_queue = []
                    self._add(phi, c_label, c_missing, c_satisfied, c_queue)
                    if phi in self.goal:
                        children.append(TreeNode(frozenset(c_label), closed=True))
                        continue
                    c_pending = [
                        i
                        for i in pending
                        if c_missing[i] == 0 and not c_satisfied[i]
                    ]
                    children.append(
                        self._search(
                            c_label, c_missing, c_satisfied, c_queue, c_pending
                        )
                    )
            except _RefutedSignal:
                # with an analyticity set a saturated branch refutes the
                # whole statement; without one it just fails this choice
                if self.complete:
                    raise
                continue
            node = TreeNode(
                frozenset(label), self.names[best], self.substs[best], children
            )
            return self._wrap(steps_taken, label, node)
        raise _RefutedSignal(set(label))

    def _unit_closes(self, label, missing, satisfied, phi0):
        """Without copying the search state, test whether adding phi0 lets
        unit propagation reach the goal or fire an empty-succedent rule."""
        dec = {}
        sat = set()
        added = set()
        stack = [phi0]
        while stack:
            phi = stack.pop()
            if phi in label or phi in added:
                continue
            added.add(phi)
            if phi in self.goal:
                return True
            for i in self.by_succ.get(phi, ()):
                sat.add(i)
            for i in self.by_ant.get(phi, ()):
                m = dec.get(i)
                if m is None:
                    m = missing[i]
                m -= 1
                dec[i] = m
                if m == 0 and not satisfied[i] and i not in sat:
                    succ = self.succ_sorted[i]
                    if any(f in label or f in added for f in succ):
                        sat.add(i)
                        continue
                    if not succ:
                        return True
                    if len(succ) == 1:
                        stack.append(succ[0])
        return False

    def _wrap(self, steps_taken, label, node):
        """Re-chain the unit steps of phase 1 into unary tree nodes."""
        for i, phi in reversed(steps_taken):
            pre = set(node.label)
            pre.discard(phi)
            node = TreeNode(
                frozenset(pre) - {phi},
                self.names[i],
                self.substs[i],
                [node],
            )
        return node


def prove(calc, premises, goal, budget_nodes=1_000_000):
    premises = frozenset(premises)
    goal = frozenset(goal)
    if calc.framework == SET_FMLA and len(goal) != 1:
        raise ValueError("Set-Fmla proving needs exactly one goal formula")
    base = premises | goal
    targets = sorted(subformulas(base), key=canon_key)
    if calc.xi is not None:
        universe = frozenset(generalized_subformulas(base, calc.xi))
    else:
        universe = None
    instances = _build_instances(calc, targets, universe)
    truths = _model_truths(calc, base, universe)
    searcher = _Searcher(
        instances, goal, budget_nodes, truths, complete=universe is not None
    )
    outcome = searcher.run(premises)
    if isinstance(outcome, TreeNode):
        return Proved(outcome)
    if isinstance(outcome, frozenset) and universe is not None:
        return Refuted(
            SaturatedPartition(
                omega=frozenset(outcome),
                omega_bar=universe - outcome,
                base=base,
                universe=universe,
            )
        )
    # direct search exhausted; a transformed calculus can fall back on
    # its originating Set-Set calculus and replay that proof with the
    # disjunction rules
    if calc.framework == SET_FMLA and calc.source is not None:
        result = _prove_by_simulation(calc, premises, goal, budget_nodes)
        if result is not None:
            return result
    return OutOfBudget()


def _or_spine(f):
    parts = []
    while not f.is_var and f.head == "or":
        parts.append(f.args[0])
        f = f.args[1]
    parts.append(f)
    return parts


def _prove_by_simulation(calc, premises, goal, budget_nodes):
    (g,) = goal
    splits = []
    parts = _or_spine(g)
    if len(parts) > 1:
        psis = frozenset(parts)
        if big_or(sorted(psis, key=canon_key)) is g:
            splits.append(psis)
    splits.append(frozenset({g}))
    for psis in splits:
        res = prove(calc.source, premises, psis, budget_nodes)
        if not isinstance(res, Proved):
            continue
        spec, _ = _condense(calc.source, res.tree, psis)
        sim = _Simulation(calc, calc.source, psis)
        steps = sim.run(spec, premises)
        return Proved(_chain_tree(premises, steps))
    return None


def _condense(calc, tree, goal):
    """Prune a derivation tree to the steps it actually uses: drop
    expansions whose succedent formula is never consumed and replace a
    branch by any child that ignores its branch formula.  Returns a
    (spec, needed) pair; specs are nested tuples."""
    rules = {r.name: r for r in calc.rules}
    results = {}
    stack = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            if not node.children:
                pick = min(node.label & goal, key=canon_key)
                results[id(node)] = (("closed", pick), frozenset({pick}))
                continue
            if len(node.children) == 1 and node.children[0].star:
                rule = rules[node.rule]
                ant = frozenset(
                    substitute(f, node.subst) for f in rule.antecedent
                )
                results[id(node)] = (("star", node.rule, node.subst, ant), ant)
                continue
            stack.append((node, True))
            for child in node.children:
                stack.append((child, False))
            continue
        rule = rules[node.rule]
        ant = frozenset(substitute(f, node.subst) for f in rule.antecedent)
        kids = []
        shortcut = None
        for child in node.children:
            spec, needed = results.pop(id(child))
            (phi,) = child.label - node.label
            if phi not in needed and shortcut is None:
                # the branch formula went unused: splice the child in
                shortcut = (spec, needed)
            kids.append((phi, spec, needed))
        if shortcut is not None:
            results[id(node)] = shortcut
            continue
        needed = ant.union(*(n - {phi} for phi, _, n in kids))
        results[id(node)] = (("rule", node.rule, node.subst, ant, kids), needed)
    return results[id(tree)]


class _Simulation:
    """Replays a condensed Set-Set derivation of Phi |> Psi as a Set-Fmla
    derivation of the disjunction of Psi, tracking each open branch as a
    context disjunct and rearranging with the four base rules."""

    def __init__(self, rv, source, psis):
        self.rules = {r.name: r for r in rv.rules}
        self.src_rules = {r.name: r for r in source.rules}
        self.s_name = _fresh_variable(source)
        self.big_goal = big_or(sorted(psis, key=canon_key))
        self.goal_parts = sorted(psis, key=canon_key)
        self.steps = []
        self.derived = set()

    # -- primitive steps ---------------------------------------------------
    def _emit(self, phi, rule, subst):
        if phi not in self.derived:
            self.derived.add(phi)
            self.steps.append((phi, rule, subst))
        return phi

    def _intro(self, x, e):
        return self._emit(app("or", x, e), "or_intro", {"p": x, "q": e})

    def _comm(self, f):
        x, y = f.args
        return self._emit(app("or", y, x), "or_comm", {"p": x, "q": y})

    def _assoc(self, f):
        x, rest = f.args
        y, z = rest.args
        return self._emit(
            app("or", app("or", x, y), z),
            "or_assoc",
            {"p": x, "q": y, "r": z},
        )

    def _contract(self, f):
        x = f.args[0]
        return self._emit(x, "or_contr", {"p": x})

    def _unassoc(self, f):
        # (x | y) | z  yields  x | (y | z) by cycling at the root
        f = self._comm(f)
        f = self._assoc(f)
        f = self._comm(f)
        f = self._assoc(f)
        return self._comm(f)

    # -- derived rearrangements --------------------------------------------
    def _ctx_append(self, f, e):
        # chi | X  yields  chi | (X | e)
        return self._unassoc(self._intro(f, e))

    def _ctx_prepend(self, f, e):
        # chi | X  yields  chi | (e | X)
        f = self._comm(f)
        f = self._unassoc(self._intro(f, e))
        f = self._comm(f)
        return self._unassoc(f)

    def _head_append(self, f, e):
        # X | C  yields  (X | e) | C
        f = self._comm(f)
        f = self._unassoc(self._intro(f, e))
        return self._comm(f)

    def _head_prepend(self, f, e):
        # X | C  yields  (e | X) | C
        f = self._comm(self._intro(f, e))
        return self._assoc(f)

    def _collapse(self, f):
        # G | (X | G)  yields  G | X
        a = self._assoc(f)
        f = self._intro(a, a.args[0].args[1])
        f = self._unassoc(f)
        return self._contract(f)

    # -- the replay ----------------------------------------------------------
    def run(self, spec, premises):
        self.derived = set(premises)
        goal = self.big_goal
        amap = {}
        for chi in sorted(_spec_needed(spec), key=canon_key):
            amap[chi] = self._intro(chi, goal)
        stack = [self._walk(spec, goal, amap)]
        while stack:
            try:
                stack.append(self._walk(*stack[-1].send(None)))
            except StopIteration:
                stack.pop()
        self._contract(app("or", goal, goal))
        steps = self.steps
        for i, (phi, _, _) in enumerate(steps):
            if phi is goal:
                return steps[: i + 1]
        return steps

    def _lift(self, f, appended, prefix):
        for _ in range(appended):
            f = self._ctx_append(f, self.big_goal)
        if prefix is not None:
            f = self._ctx_prepend(f, prefix)
        return f

    def _walk(self, spec, ctx, amap):
        """Ensure goal | ctx is derived, assuming amap maps every needed
        formula chi to an already-derived chi | ctx.  A generator: yields
        (spec, ctx, amap) triples for the driver loop in run to recurse on,
        keeping the Python stack flat."""
        goal = self.big_goal
        kind = spec[0]
        if kind == "closed":
            g = spec[1]
            f = amap[g]
            if g is goal:
                return
            gs = self.goal_parts
            j = gs.index(g)
            if j + 1 < len(gs):
                f = self._head_append(f, big_or(gs[j + 1 :]))
            for i in range(j - 1, -1, -1):
                f = self._head_prepend(f, gs[i])
            return
        if kind == "star":
            _, name, subst, ant = spec
            full = dict(subst)
            full[self.s_name] = ctx
            self._emit(ctx, name + "_v", full)
            f = self._intro(ctx, goal)
            self._comm(f)
            return
        _, name, subst, ant, kids = spec
        if name + "_v" not in self.rules:
            # axiom kept verbatim by the transform
            (rule_succ,) = self.rules[name].succedent
            psi = self._emit(substitute(rule_succ, subst), name, subst)
            (kid_phi, kid_spec, _) = kids[0]
            amap2 = dict(amap)
            amap2[psi] = self._intro(psi, ctx)
            yield kid_spec, ctx, amap2
            return
        rule = self.rules[name + "_v"]
        full = dict(subst)
        full[self.s_name] = ctx
        (rule_succ,) = rule.succedent
        f = self._emit(substitute(rule_succ, full), name + "_v", full)
        ws = [
            substitute(s, subst)
            for s in sorted(self.src_rules[name].succedent, key=canon_key)
        ]
        by_phi = {phi: (s, n) for phi, s, n in kids}
        if len(ws) == 1:
            amap2 = dict(amap)
            amap2[ws[0]] = f
            kid_spec, _ = by_phi[ws[0]]
            yield kid_spec, ctx, amap2
            return
        acc_appends = 0
        for i, w in enumerate(ws):
            if i == 0:
                f = self._unassoc(f)
            else:
                f = self._assoc(f)
                f = self._comm(f)
                f = self._assoc(f)
                f = self._comm(f)
                if i + 1 < len(ws):
                    f = self._unassoc(f)
                acc_appends += 1
            child_ctx = f.args[1]
            prefix = child_ctx.args[0] if i + 1 < len(ws) else None
            kid_spec, kid_needed = by_phi[w]
            amap2 = {}
            for chi in sorted(kid_needed - {w}, key=canon_key):
                amap2[chi] = self._lift(amap[chi], acc_appends, prefix)
            amap2[w] = f
            yield kid_spec, child_ctx, amap2
            f = app("or", self.big_goal, child_ctx)
        for _ in range(len(ws) - 1):
            f = self._collapse(f)


def _spec_needed(spec):
    if spec[0] == "closed":
        return frozenset({spec[1]})
    if spec[0] == "star":
        return spec[3]
    _, _, _, ant, kids = spec
    return ant.union(*(n - {phi} for phi, _, n in kids))


class _ChainLabel:
    """Label of a node on a linear derivation chain: a prefix of a shared
    formula sequence.  Behaves like a set for the validator without storing
    one frozenset per node."""

    __slots__ = ("store", "index", "k")

    def __init__(self, store, index, k):
        self.store = store
        self.index = index
        self.k = k

    def __contains__(self, f):
        i = self.index.get(f)
        return i is not None and i < self.k

    def __iter__(self):
        return iter(self.store[: self.k])

    def __len__(self):
        return self.k

    def __hash__(self):
        return hash((id(self.store), self.k))

    def __eq__(self, other):
        if isinstance(other, _ChainLabel):
            return other.store is self.store and other.k == self.k
        if isinstance(other, (set, frozenset)):
            return len(other) == self.k and all(f in self for f in other)
        return NotImplemented

    def __le__(self, other):
        return all(f in other for f in self)

    def __ge__(self, other):
        return all(f in self for f in other)

    def __and__(self, other):
        return frozenset(f for f in other if f in self)

    def __or__(self, other):
        extra = [f for f in other if f not in self]
        if len(extra) == 1 and self.index.get(extra[0]) == self.k:
            return _ChainLabel(self.store, self.index, self.k + 1)
        if not extra:
            return self
        return frozenset(self.store[: self.k]) | frozenset(extra)


def _chain_tree(premises, steps):
    store = sorted(premises, key=canon_key)
    store.extend(phi for phi, _, _ in steps)
    index = {f: i for i, f in enumerate(store)}
    k = len(premises)
    root = TreeNode(_ChainLabel(store, index, k))
    node = root
    for phi, rule, subst in steps:
        k += 1
        child = TreeNode(_ChainLabel(store, index, k))
        node.rule = rule
        node.subst = subst
        node.children = [child]
        node = child
    node.closed = True
    return root


def validate_tree(calc, tree, premises, goal):
    premises = frozenset(premises)
    goal = frozenset(goal)
    rules = {r.name: r for r in calc.rules}
    if not tree.label <= premises:
        return tree
    stack = [tree]
    while stack:
        node = stack.pop()
        if not node.children:
            if node.star:
                continue
            if node.closed and node.label & goal:
                continue
            return node
        rule = rules.get(node.rule)
        if rule is None:
            return node
        ant = frozenset(substitute(f, node.subst) for f in rule.antecedent)
        succ = frozenset(substitute(f, node.subst) for f in rule.succedent)
        if not ant <= node.label:
            return node
        if not succ:
            if len(node.children) != 1 or not node.children[0].star:
                return node
            continue
        expected = {node.label | {phi} for phi in succ if phi not in node.label}
        got = {c.label for c in node.children}
        if expected != got:
            return node
        stack.extend(node.children)
    return None


# --- countermodel extraction ---------------------------------------------

VARIANT_UP = "up"
VARIANT_LEQ = "leq"


def classify_partition(part):
    """Assign each formula of Λ = sub(base) its six-valued class from the
    saturated partition, using the ∘/↑/↓/∘(·⇒·) membership tests."""
    omega = part.omega
    lam = sorted(subformulas(part.base), key=canon_key)
    classes = {}
    mid = []
    for phi in lam:
        circ = app("circ", phi)
        if circ in omega:
            classes[phi] = "ht" if phi in omega else "hf"
            continue
        u = up_(phi)
        d = down_(phi)
        in_u = u in omega
        in_d = d in omega
        if not in_u and not in_d:
            raise ClassificationError(
                "neither up nor down of %r is designated" % phi
            )
        if not in_u:
            classes[phi] = "f"
        elif not in_d:
            classes[phi] = "t"
        else:
            mid.append(phi)
    # split the middle formulas into at most two equivalence classes
    groups = []
    for phi in mid:
        placed = False
        for g in groups:
            rep = g[0]
            if (
                app("circ", app("imp", phi, rep)) in omega
                and app("circ", app("imp", rep, phi)) in omega
            ):
                g.append(phi)
                placed = True
                break
        if placed:
            continue
        groups.append([phi])
    if len(groups) > 2:
        raise ClassificationError("more than two incomparable middle classes")
    return classes, groups


def countermodel_from_partition(part, variant):
    """Extract a PP6⇒H valuation on Λ and a principal filter separating the
    saturated partition; for the `leq` variant the filter never sits at t."""
    from .registry import ALG_PP6H, V6, leq6
    from .semantics import PNMatrix, solve_valuations

    classes, groups = classify_partition(part)
    lam = set(classes) | {phi for g in groups for phi in g}
    omega_lam = part.omega & lam
    filter_values = ["f", "n", "b", "t", "ht"]
    if variant == VARIANT_LEQ:
        filter_values.remove("t")
    labelings = []
    if len(groups) == 0:
        labelings.append({})
    elif len(groups) == 1:
        labelings.append({0: "b"})
        labelings.append({0: "n"})
    else:
        labelings.append({0: "b", 1: "n"})
        labelings.append({0: "n", 1: "b"})
    for labeling in labelings:
        assign = dict(classes)
        for gi, value in labeling.items():
            for phi in groups[gi]:
                assign[phi] = value
        for a in filter_values:
            upset = frozenset(v for v in V6 if leq6(a, v))
            ok = all(
                (assign[phi] in upset) == (phi in omega_lam) for phi in lam
            )
            if not ok:
                continue
            matrix = PNMatrix("pp6h-u%s" % a, ALG_PP6H, upset)
            cons = {phi: frozenset({assign[phi]}) for phi in lam}
            found = solve_valuations(matrix, lam, cons, limit=1)
            if not found:
                raise ClassificationError(
                    "classification is not a legal valuation"
                )
            return found[0], a
    raise ClassificationError("no separating principal filter exists")


# --- Set-Fmla transform --------------------------------------------------

def _fresh_variable(calc):
    used = set()
    for r in calc.rules:
        used |= variables(r.antecedent | r.succedent)
    # shortest first, then lexicographic
    import itertools
    import string

    for length in itertools.count(1):
        for letters in product(string.ascii_lowercase, repeat=length):
            name = "".join(letters)
            if name not in used:
                return name


def to_set_fmla_calculus(calc, sig=None):
    from .formula import SIG_PP_IMP

    sig = sig or SIG_PP_IMP
    if "or" not in sig:
        raise MissingDisjunction("signature has no disjunction connective")
    p, q, r = var("p"), var("q"), var("r")
    base = [
        Rule("or_intro", frozenset({p}), frozenset({app("or", p, q)})),
        Rule(
            "or_comm",
            frozenset({app("or", p, q)}),
            frozenset({app("or", q, p)}),
        ),
        Rule(
            "or_assoc",
            frozenset({app("or", p, app("or", q, r))}),
            frozenset({app("or", app("or", p, q), r)}),
        ),
        Rule("or_contr", frozenset({app("or", p, p)}), frozenset({p})),
    ]
    s = var(_fresh_variable(calc))
    out = list(base)
    for rule in calc.rules:
        ant = sorted(rule.antecedent, key=canon_key)
        succ = sorted(rule.succedent, key=canon_key)
        if not ant and len(succ) == 1:
            out.append(Rule(rule.name, rule.antecedent, rule.succedent))
        elif not succ:
            out.append(
                Rule(
                    rule.name + "_v",
                    frozenset(app("or", f, s) for f in ant),
                    frozenset({s}),
                )
            )
        else:
            out.append(
                Rule(
                    rule.name + "_v",
                    frozenset(app("or", f, s) for f in ant),
                    frozenset({app("or", big_or(succ), s)}),
                )
            )
    return Calculus(calc.name + "-v", out, None, SET_FMLA, source=calc)


# --- proof-tree export ---------------------------------------------------

def _label_text(label):
    from .formula import render_formula

    return ", ".join(render_formula(f) for f in sorted(label, key=canon_key))


def _subst_text(subst):
    from .formula import render_formula

    if not subst:
        return ""
    return "; ".join(
        "%s:=%s" % (k, render_formula(v)) for k, v in sorted(subst.items())
    )


def tree_to_dot(tree):
    lines = ["digraph proof {", '  node [shape=box, fontname="monospace"];']
    counter = [0]

    def visit(node):
        my = counter[0]
        counter[0] += 1
        text = "*" if node.star else _label_text(node.label)
        if node.closed:
            text += "  [closed]"
        lines.append('  n%d [label="%s"];' % (my, text.replace('"', "'")))
        for child in node.children:
            cid = visit(child)
            edge = node.rule or ""
            st = _subst_text(node.subst)
            if st:
                edge += " @ " + st
            lines.append(
                '  n%d -> n%d [label="%s"];' % (my, cid, edge.replace('"', "'"))
            )
        return my

    visit(tree)
    lines.append("}")
    return "\n".join(lines)


def tree_to_json(tree):
    from .formula import render_formula

    def visit(node):
        out = {"label": sorted(render_formula(f) for f in node.label)}
        if node.star:
            out["star"] = True
        if node.closed:
            out["closed"] = True
        if node.rule:
            out["rule"] = node.rule
            out["substitution"] = {
                k: render_formula(v) for k, v in sorted((node.subst or {}).items())
            }
        if node.children:
            out["children"] = [visit(c) for c in node.children]
        return out

    return visit(tree)
