"""Command-line front-end.

Exit codes: 0 positive answer (Proved/Holds/Sound/Valid), 1 negative with a
certificate printed, 2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import MvlError
from .formula import parse_formula, parse_formula_set, render_formula

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _get_matrix(name):
    from . import registry

    if name.startswith("@"):
        return registry.matrix_from_json(_load_json(name[1:]))
    return registry.lookup(registry.KIND_MATRIX, name).payload


def _get_matrix_class(name):
    from . import registry

    return registry.lookup(registry.KIND_MATRIX_CLASS, name).payload


def _get_calculus(name):
    from . import registry

    if name.startswith("@"):
        return registry.calculus_from_json(_load_json(name[1:])), None
    entry = registry.lookup(registry.KIND_CALCULUS, name)
    return entry.payload, entry.models


def _get_algebra(name):
    from . import registry
    from .algebra import FiniteAlgebra

    if name.startswith("@"):
        return FiniteAlgebra(registry.matrix_from_json(_load_json(name[1:])).algebra)
    return FiniteAlgebra(registry.lookup(registry.KIND_ALGEBRA, name).payload)


def _models_from_args(args):
    if getattr(args, "matrix", None):
        return [_get_matrix(args.matrix)]
    if getattr(args, "cls", None):
        return list(_get_matrix_class(args.cls))
    raise UsageError("need --matrix or --class")


def _witness_json(witness):
    return {render_formula(f): v for f, v in sorted(witness.items())}


def _print(args, data, text):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_prove(args):
    from .calculus import Proved, Refuted, prove, tree_to_dot, tree_to_json

    calc, _ = _get_calculus(args.calculus)
    premises = parse_formula_set(args.premises)
    goal = parse_formula_set(args.goal)
    res = prove(calc, premises, goal, budget_nodes=args.budget_nodes)
    if isinstance(res, Proved):
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(tree_to_dot(res.tree))
        _print(
            args,
            {"result": "proved", "tree": tree_to_json(res.tree)},
            "Proved.",
        )
        return EXIT_POSITIVE
    if isinstance(res, Refuted):
        omega = sorted(render_formula(f) for f in res.partition.omega)
        _print(
            args,
            {"result": "refuted", "omega": omega},
            "Refuted. Saturated set:\n  " + "\n  ".join(omega),
        )
        return EXIT_NEGATIVE
    _print(args, {"result": "out-of-budget"}, "Out of budget.")
    return EXIT_BUDGET


def cmd_check(args):
    from .semantics import ConsequenceProblem, Holds, check_consequence

    models = _models_from_args(args)
    premises = parse_formula_set(args.premises)
    conclusions = parse_formula_set(args.conclusions)
    res = check_consequence(ConsequenceProblem(models, premises, conclusions))
    if isinstance(res, Holds):
        _print(args, {"result": "holds"}, "Holds.")
        return EXIT_POSITIVE
    witness = _witness_json(res.witness)
    text = "Fails on %s:\n" % models[res.matrix_index].name + "\n".join(
        "  %s = %s" % kv for kv in witness.items()
    )
    _print(
        args,
        {
            "result": "fails",
            "matrix": models[res.matrix_index].name,
            "witness": witness,
        },
        text,
    )
    return EXIT_NEGATIVE


def cmd_soundness(args):
    from .semantics import Sound, check_rule_soundness

    calc, declared = _get_calculus(args.calculus)
    if getattr(args, "matrix", None) or getattr(args, "cls", None):
        models = _models_from_args(args)
    elif declared:
        models = [_get_matrix(n) for n in declared]
    else:
        raise UsageError("calculus has no declared models; pass --matrix/--class")
    bad = []
    for rule in calc.rules:
        res = check_rule_soundness(rule, models)
        if not isinstance(res, Sound):
            bad.append(
                {
                    "rule": rule.name,
                    "matrix": models[res.matrix_index].name,
                    "witness": _witness_json(res.witness),
                }
            )
    if not bad:
        _print(args, {"result": "sound", "rules": len(calc.rules)},
               "Sound (%d rules)." % len(calc.rules))
        return EXIT_POSITIVE
    text = "Unsound rules:\n" + "\n".join(
        "  %s on %s" % (b["rule"], b["matrix"]) for b in bad
    )
    _print(args, {"result": "unsound", "unsound": bad}, text)
    return EXIT_NEGATIVE


def cmd_components(args):
    from .semantics import total_components

    m = _get_matrix(args.matrix)
    comps = [list(c) for c in total_components(m)]
    _print(
        args,
        {"matrix": m.name, "components": comps},
        "\n".join("{%s}" % ", ".join(c) for c in comps),
    )
    return EXIT_POSITIVE


def cmd_axiomatize(args):
    from . import registry
    from .axiomatizer import (
        NotMonadic,
        find_discriminator,
        generate_refinement_rules,
        subsume_simplify,
    )
    from .calculus import Calculus, SET_SET

    base = _get_matrix(args.base)
    refined = _get_matrix(args.refined)
    d = find_discriminator(base, args.max_depth)
    if isinstance(d, NotMonadic):
        _print(
            args,
            {"result": "not-monadic", "witness": list(d.witness)},
            "Not monadic; unseparated pair: %s, %s" % d.witness,
        )
        return EXIT_NEGATIVE
    rules = generate_refinement_rules(base, refined, d)
    if args.simplify:
        rules = subsume_simplify(rules)
    calc = Calculus("%s-to-%s" % (base.name, refined.name), rules, None, SET_SET)
    print(registry.calculus_to_json(calc))
    return EXIT_POSITIVE


def cmd_algebra(args):
    from .algebra import (
        FILTER_LATTICE,
        FILTER_PRIME,
        FILTER_PRINCIPAL,
        FILTER_REGULAR,
        check_identity,
        congruences,
        filters,
        subalgebras,
        variety_profile,
    )

    alg = _get_algebra(args.algebra)
    what = args.what
    if what == "congruences":
        cs = congruences(alg)
        data = [[sorted(b) for b in c.blocks] for c in cs]
        _print(args, {"algebra": alg.name, "congruences": data},
               "\n".join(str(d) for d in data))
        return EXIT_POSITIVE
    if what == "filters":
        flavor = {
            "lattice": FILTER_LATTICE,
            "principal": FILTER_PRINCIPAL,
            "prime": FILTER_PRIME,
            "regular": FILTER_REGULAR,
        }[args.flavor]
        fs = [sorted(f) for f in filters(alg, flavor)]
        _print(args, {"algebra": alg.name, "filters": fs},
               "\n".join("{%s}" % ", ".join(f) for f in fs))
        return EXIT_POSITIVE
    if what == "subalgebras":
        subs = [sorted(s) for s in subalgebras(alg)]
        _print(args, {"algebra": alg.name, "subalgebras": subs},
               "\n".join("{%s}" % ", ".join(s) for s in subs))
        return EXIT_POSITIVE
    if what == "profile":
        prof = sorted(variety_profile(alg))
        _print(args, {"algebra": alg.name, "profile": prof}, ", ".join(prof))
        return EXIT_POSITIVE
    if what == "check":
        if not args.identity:
            raise UsageError("algebra check needs --identity 'lhs == rhs'")
        lhs, sep, rhs = args.identity.partition("==")
        if not sep:
            raise UsageError("--identity wants 'lhs == rhs'")
        wit = check_identity(alg, lhs.strip(), rhs.strip())
        if wit is None:
            _print(args, {"result": "valid"}, "Valid.")
            return EXIT_POSITIVE
        _print(args, {"result": "counterexample", "witness": wit},
               "Counterexample: %s" % wit)
        return EXIT_NEGATIVE
    raise UsageError("unknown algebra subcommand %r" % what)


def cmd_interpolate(args):
    from .interpolation import (
        ASSERTIONAL,
        InterpolationInstance,
        ORDER_PRESERVING,
        eip_interpolant,
        maehara_interpolant,
    )

    phi = parse_formula_set(args.phi)
    psi = parse_formula_set(args.psi)
    goal = parse_formula(args.goal)
    if args.logic == "pp-top":
        inst = InterpolationInstance(phi, psi, goal, ASSERTIONAL)
        xi = maehara_interpolant(inst)
        _print(args, {"interpolant": render_formula(xi), "verified": True},
               "%s\nboth entailments verified" % render_formula(xi))
    else:
        inst = InterpolationInstance(phi, psi, goal, ORDER_PRESERVING)
        pi = eip_interpolant(inst)
        rendered = sorted(render_formula(f) for f in pi)
        _print(args, {"interpolant": rendered, "verified": True},
               "%s\nboth entailments verified" % ", ".join(rendered))
    return EXIT_POSITIVE


def cmd_export(args):
    from . import registry

    if args.kind == "matrix":
        m = _get_matrix(args.name)
        print(registry.matrix_to_json(m))
    elif args.kind == "calculus":
        calc, _ = _get_calculus(args.name)
        print(registry.calculus_to_json(calc))
    else:
        raise UsageError("export kind must be matrix or calculus")
    return EXIT_POSITIVE


def cmd_list(args):
    from . import registry

    kinds = [args.kind] if args.kind else [
        registry.KIND_ALGEBRA,
        registry.KIND_MATRIX,
        registry.KIND_MATRIX_CLASS,
        registry.KIND_CALCULUS,
    ]
    data = {k: registry.names(k) for k in kinds}
    _print(
        args,
        data,
        "\n".join("%s: %s" % (k, ", ".join(v)) for k, v in data.items()),
    )
    return EXIT_POSITIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mvl", description="Finite many-valued logic workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("prove", help="run analytic proof search")
    p.add_argument("--calculus", required=True)
    p.add_argument("--premises", default="")
    p.add_argument("--goal", "--conclusions", dest="goal", required=True)
    p.add_argument("--budget-nodes", type=int, default=1_000_000)
    p.add_argument("--dot")
    common(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="semantic consequence check")
    p.add_argument("--matrix")
    p.add_argument("--class", dest="cls")
    p.add_argument("--premises", default="")
    p.add_argument("--conclusions", "--goal", dest="conclusions", required=True)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("soundness", help="sweep a calculus against models")
    p.add_argument("--calculus", required=True)
    p.add_argument("--matrix")
    p.add_argument("--class", dest="cls")
    common(p)
    p.set_defaults(func=cmd_soundness)

    p = sub.add_parser("components", help="maximal total components")
    p.add_argument("--matrix", required=True)
    common(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("axiomatize", help="generate refinement rules")
    p.add_argument("--base", required=True)
    p.add_argument("--refined", required=True)
    p.add_argument("--max-depth", type=int, default=1)
    p.add_argument("--simplify", action="store_true")
    common(p)
    p.set_defaults(func=cmd_axiomatize)

    p = sub.add_parser("algebra", help="finite-algebra toolbox")
    p.add_argument("what", choices=["congruences", "filters", "subalgebras", "profile", "check"])
    p.add_argument("--algebra", required=True)
    p.add_argument("--flavor", default="lattice",
                   choices=["lattice", "principal", "prime", "regular"])
    p.add_argument("--identity")
    common(p)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("interpolate", help="interpolant constructions")
    p.add_argument("--logic", required=True, choices=["pp-top", "pp-leq"])
    p.add_argument("--phi", default="")
    p.add_argument("--psi", default="")
    p.add_argument("--goal", required=True)
    common(p)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("export", help="emit registry objects as JSON")
    p.add_argument("--kind", required=True)
    p.add_argument("--name", required=True)
    common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("list", help="list registered names")
    p.add_argument("--kind")
    common(p)
    p.set_defaults(func=cmd_list)

    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, MvlError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
