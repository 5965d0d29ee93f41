"""Shared helpers: seeded random formula and sequent generators."""

import random

from mvlogic.formula import app, var


def random_formula(rng, conns, names, depth):
    """A random formula over the given connective/arity map, with the
    given variable names and a connective-depth bound."""
    if depth == 0 or rng.random() < 0.3:
        return var(rng.choice(names))
    conn = rng.choice(sorted(conns))
    k = conns[conn]
    if k == 0:
        return app(conn)
    return app(
        conn, *(random_formula(rng, conns, names, depth - 1) for _ in range(k))
    )


def random_sequent(rng, conns, names, depth=2, max_side=2):
    n_prem = rng.randint(0, max_side)
    n_conc = rng.randint(1, max_side)
    premises = frozenset(
        random_formula(rng, conns, names, depth) for _ in range(n_prem)
    )
    conclusions = frozenset(
        random_formula(rng, conns, names, depth) for _ in range(n_conc)
    )
    return premises, conclusions


def make_rng(seed):
    return random.Random(seed)
