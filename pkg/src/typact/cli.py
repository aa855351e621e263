"""Command-line front end.

Exit codes: 0 computed (the answer may be yes or no), 1 usage or parse
error, 2 precondition violated, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__
from .grammar import ParseError, format_group, parse_group
from .group_model import OMEGA, GroupError, GroupDesc

SCHEMA_ID = "typact.report/1"
EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ------------------------------------------------------------ input helpers
def _group(text: str) -> GroupDesc:
    return parse_group(text)


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _tuples(text: str | None) -> list[tuple[int, ...]]:
    """``"1,0;0,2"`` -> ``[(1, 0), (0, 2)]``."""
    if not text:
        return []
    return [_ints(part) for part in text.split(";") if part.strip()]


def _extent(text: str):
    if text.strip().lower() in ("inf", "omega"):
        return OMEGA
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected an integer or 'inf', got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational like 1/4, got {text!r}") from None


def _json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    s = text.strip()
    if s.startswith("{") or s.startswith("["):
        try:
            return json.loads(s)
        except json.JSONDecodeError as e:
            raise UsageError(f"invalid JSON: {e}") from None
    try:
        with open(text) as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"no such file: {text}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"invalid JSON in {text}: {e}") from None


def _action(args, name="action"):
    from .action_engine import FiniteAction

    reg = getattr(args, "regular", None)
    raw = getattr(args, name, None)
    if raw is None and reg is not None and name == "action":
        return FiniteAction.regular(_ints(reg))
    if raw is None:
        raise UsageError(f"--{name} is required")
    try:
        return FiniteAction.from_json(_json_arg(raw))
    except (KeyError, TypeError) as e:
        raise UsageError(f"malformed action JSON: {e}") from None


def _perm(text: str, q: int | None = None):
    from .action_engine import perm as P

    return P.from_one_line(_ints(text)) if q is None else P.check_perm(P.from_one_line(_ints(text)), q)


def _levels(text: str | None):
    from .action_engine.metric import DEFAULT_LEVELS, LevelSequence

    if not text or text == "lcm":
        return DEFAULT_LEVELS
    if text.startswith("geom:"):
        return LevelSequence.geometric(int(text[5:]))
    raise UsageError(f"levels must be 'lcm' or 'geom:<factor>', got {text!r}")


def _seed(args, out_inputs):
    if getattr(args, "seed", None) is None:
        if args.json:
            raise UsageError("--seed is required with --json for randomized commands")
        args.seed = random.SystemRandom().randrange(2**31)
        print(f"seed: {args.seed}", file=sys.stderr)
    out_inputs["seed"] = args.seed
    return args.seed


def _mv(v):
    return v.to_json()


# ---------------------------------------------------------------- commands
def cmd_classify(args):
    from . import classify as C

    inputs, q = {}, args.question
    if q == "monothetic":
        g = _group(args.groups[0]) if len(args.groups) == 1 else None
        if g is None:
            raise UsageError("monothetic takes one group")
        inputs["g"] = format_group(g)
        d = C.generically_monothetic(g)
    else:
        if len(args.groups) != 2:
            raise UsageError(f"{q} takes two groups H G")
        h, g = _group(args.groups[0]), _group(args.groups[1])
        inputs.update(h=format_group(h), g=format_group(g))
        fn = {
            "weak-iso": C.weak_isomorphic,
            "embeds": C.embeds,
            "extend-free": C.extends_to_free,
            "extend-any": C.extends_to_any,
        }[q]
        d = fn(h, g)
    res = d.to_json()
    text = f"{res['answer']}  (rule: {res['rule']})"
    if "witness" in res:
        text += f"\nwitness: {res['witness']}"
    return inputs, res, [d.rule], text


def cmd_dual(args):
    from . import duality as D
    from .finite import FiniteAbelian

    g = FiniteAbelian(_ints(args.group))
    inputs = {"group": list(g.factors)}
    if args.what == "ann":
        gens = _tuples(args.gens)
        inputs["gens"] = [list(x) for x in gens]
        sub = D.subgroup(g, gens)
        ann = D.annihilator(g, gens)
        res = {"subgroup": [list(x) for x in sub], "annihilator": [list(x) for x in ann], "order_product": len(sub) * len(ann)}
        text = f"|H| = {len(sub)}, |Ann H| = {len(ann)}\nAnn H: {ann}"
        return inputs, res, [], text
    if args.what == "spectral":
        h, k = _tuples(args.h), _tuples(args.k)
        inputs.update(h=[list(x) for x in h], k=[list(x) for x in k])
        lhs, rhs = D.spectral_criterion(g, h, k)
        res = {"sum_is_whole": lhs, "annihilators_meet_trivially": rhs, "agree": lhs == rhs}
        return inputs, res, [], f"H + K = G: {lhs}\nAnn H ∩ Ann K trivial: {rhs}"
    # spectrum
    x = FiniteAbelian(_ints(args.target))
    imgs = _tuples(args.images)
    inputs.update(target=list(x.factors), images=[list(v) for v in imgs])
    a = D.TranslationAction(g, x, tuple(imgs))
    spec = D.spectrum_of_translation(a)
    res = {"spectrum": [list(c) for c in spec], "ergodic": a.is_ergodic(), "count": len(spec)}
    return inputs, res, [], f"{len(spec)} characters, ergodic: {a.is_ergodic()}\n{spec}"


def cmd_sim(args):
    return SIM[args.what](args)


def sim_extend(args):
    from .action_engine import extend_finite_action, relations_hold, restriction_is_lift

    base = _action(args)
    if args.k is None:
        raise UsageError("extend needs --k")
    k = _extent(args.k)
    h = _ints(args.h) if args.h is not None else None
    order = _extent(args.order) if args.order is not None else None
    ext = extend_finite_action(base, k, h, order)
    res = {
        "action": ext.action.to_json(),
        "relations_hold": relations_hold(ext.action),
        "restriction_is_lift": restriction_is_lift(ext, base),
    }
    inputs = {"action": base.to_json(), "k": "inf" if k is OMEGA else k, "h": list(h) if h else None}
    return inputs, res, [], json.dumps(res["action"])


def sim_metric(args):
    from .action_engine import metric_d, metric_dn

    s, t = _perm(args.s), _perm(args.t)
    lv = _levels(args.levels)
    inputs = {"s": list(_ints(args.s)), "t": list(_ints(args.t)), "levels": lv.to_json()}
    if args.n is not None:
        v = metric_dn(s, t, args.n, lv)
        inputs["n"] = args.n
        return inputs, {"d_n": str(v)}, [], f"d_{args.n} = {v}"
    v = metric_d(s, t, lv)
    return inputs, {"d": _mv(v)}, [], f"d = {v}"


def sim_lnk(args):
    from .action_engine import build_Lnk
    from .action_engine.presentation import Presentation

    orders = tuple(_extent(x) for x in args.orders.split(","))
    pres = Presentation(orders, tuple(_tuples(args.relations)))
    inputs = {"presentation": pres.to_json(), "q": args.q, "transitive": args.transitive, "mode": args.mode}
    seed = None
    if args.mode == "sample" or (args.mode == "auto" and args.q > (args.max_q or 7)):
        seed = _seed(args, inputs)
    members = build_Lnk(pres, args.q, args.transitive, args.mode, args.count, seed, args.max_q)
    res = {"count": len(members), "members": [m.to_json() for m in members[: args.limit]]}
    lines = [f"{len(members)} members"]
    for m in members[: args.limit]:
        lines.append(" ".join(str(g["permutation"]) for g in m.to_json()["generators"]))
    return inputs, res, [], "\n".join(lines)


def sim_probe(args):
    from .action_engine import density_probe

    target = _action(args)
    eps = _fraction(args.eps)
    lv = _levels(args.levels)
    inputs = {"action": target.to_json(), "eps": str(eps), "levels": lv.to_json()}
    seed = _seed(args, inputs)
    cl = list(_ints(args.candidate_levels)) if args.candidate_levels else None
    r = density_probe(target, eps, levels=lv, candidate_levels=cl, seed=seed, samples=args.samples)
    res = r.to_json()
    text = f"best level {r.level}, distance {r.distance}, success {r.success}, exhausted {r.exhausted}"
    return inputs, res, [], text


def sim_defect(args):
    from .action_engine.closure import defect_rows, good_approx_defect

    target = _action(args, "target")
    p = _action(args, "p")
    inputs = {"target": target.to_json(), "p": p.to_json()}
    v = good_approx_defect(target, p)
    res = {"defect": str(v), "approx": float(v)}
    if args.csv:
        w = csv.writer(sys.stdout)
        w.writerow(["coords", "mu"])
        for coords, mu in defect_rows(target, p):
            w.writerow([" ".join(map(str, coords)), str(mu)])
    return inputs, res, [], f"defect = {v}"


def sim_centralizer(args):
    from .action_engine import centralizer_brute
    from .action_engine import perm as P

    a = _action(args)
    c = centralizer_brute(a, args.method, args.max_q)
    res = {
        "size": len(c),
        "equals_image": set(c) == set(a.image),
        "elements": [P.to_one_line(x) for x in c[: args.limit]],
    }
    return {"action": a.to_json(), "method": args.method}, res, [], f"{len(c)} commuting permutations; equals image: {res['equals_image']}"


def sim_witness(args):
    from .action_engine import weak_closure_witness

    a = _action(args)
    s = _perm(args.s, a.q)
    w = weak_closure_witness(a, s)
    return {"action": a.to_json(), "s": list(_ints(args.s))}, w.to_json(), [], f"g = {w.element} (coords {w.coords})"


def sim_param(args):
    from .action_engine import canonical_parametrization

    a = _action(args)
    p = canonical_parametrization(a)
    return {"action": a.to_json()}, p.to_json(), [], f"orders {p.orders}, basis {p.basis}"


def sim_rge(args):
    from .action_engine.rge import RelationData, random_instance, relation_guided_extension

    from .action_engine import FiniteAction

    inputs = {}
    if args.instance:
        d = _json_arg(args.instance)
        try:
            base = FiniteAction.from_json(d["base"])
            ref = FiniteAction.from_json(d["reference"]) if d.get("reference") else None
            rel = RelationData.from_json(d["relation_data"])
            approx = [tuple(v) for v in d["approx"]]
            gamma = Fraction(d.get("gamma", "1"))
            prefix = int(d.get("prefix", 0))
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed instance: {e}") from None
        inputs["instance"] = d
        r = relation_guided_extension(base, approx, rel, gamma, ref, prefix=prefix)
    else:
        seed = _seed(args, inputs)
        inst = random_instance(seed)
        inputs["generated"] = {"base": inst.base.to_json(), "relation_data": inst.rel.to_json()}
        r = inst.run()
    res = r.to_json()
    res["bound_holds"] = r.bound_holds
    text = (
        f"relations exact: {r.relations_exact}, commuting: {r.commuting}\n"
        f"hypotheses: {r.hypotheses} -> {r.hypotheses_hold}\n"
        + "\n".join(f"bound: d = {float(v):.6g} < {b} : {ok}" for v, b, ok in r.bound19)
    )
    return inputs, res, [], text


SIM = {
    "extend": sim_extend,
    "metric": sim_metric,
    "lnk": sim_lnk,
    "probe": sim_probe,
    "defect": sim_defect,
    "centralizer": sim_centralizer,
    "witness": sim_witness,
    "param": sim_param,
    "rge": sim_rge,
}


def cmd_chacon(args):
    from .chacon import ChaconInstance, chacon_select, chacon_verify

    if args.file is None:
        src = resources.files("typact").joinpath("data/chacon_sample.json").read_text()
        inst = ChaconInstance.from_json(src)
    else:
        inst = ChaconInstance.from_json(_json_arg(args.file))
    inputs = {"instance": inst.to_json()}
    if args.what == "select":
        g, sc = chacon_select(inst)
        rep = chacon_verify(inst, g)
        res = rep.to_json()
        return inputs, res, [], f"gamma = {g + 1}, score = {sc}, bound = {rep.bound}"
    if args.gamma is None:
        raise UsageError("verify needs --gamma")
    rep = chacon_verify(inst, args.gamma - 1)
    inputs["gamma"] = args.gamma
    res = rep.to_json()
    return inputs, res, [], f"score {rep.score} vs bound {rep.bound}: hypothesis {rep.hypothesis}, ok {rep.ok}"


def cmd_oracle(args):
    from .classify import FiniteGroupTable, oracle_embeds, oracle_subgroups

    if args.what == "subgroups":
        t = FiniteGroupTable.of(_group(args.groups[0]), args.max_order)
        subs = oracle_subgroups(t)
        res = {
            "count": len(subs),
            "subgroups": [{"type": format_group(ty), "elements": [list(e) for e in els]} for els, ty in subs],
        }
        text = "\n".join(f"{format_group(ty)}  (order {len(els)})" for els, ty in subs)
        return {"g": format_group(t.desc())}, res, [], text
    if len(args.groups) != 2:
        raise UsageError("oracle embeds takes two groups H G")
    h = FiniteGroupTable.of(_group(args.groups[0]), args.max_order)
    g = FiniteGroupTable.of(_group(args.groups[1]), args.max_order)
    ans = oracle_embeds(h, g)
    return {"h": format_group(h.desc()), "g": format_group(g.desc())}, {"answer": "yes" if ans else "no"}, [], "yes" if ans else "no"


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--budget", help="budget overrides, e.g. 'gray=20,states=100000'")
    common.add_argument("--max-order", type=int, default=256, help="largest explicit group order")
    common.add_argument("--max-q", type=int, default=None, help="largest block count for exhaustive searches")

    p = _Parser(prog="typact", description="Extensions of typical abelian group actions.")
    p.add_argument("--version", action="version", version=f"typact {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="decision queries on group expressions")
    c.add_argument("question", choices=["weak-iso", "embeds", "extend-free", "extend-any", "monothetic"])
    c.add_argument("groups", nargs="+", help="group expressions (H G, or G for monothetic)")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("dual", parents=[common], help="characters of finite groups")
    d.add_argument("what", choices=["ann", "spectral", "spectrum"])
    d.add_argument("--group", required=True, help="invariant factors, e.g. 2,4")
    d.add_argument("--gens", help="subgroup generators, e.g. '1,0;0,2'")
    d.add_argument("--h", help="generators of H")
    d.add_argument("--k", help="generators of K")
    d.add_argument("--target", help="invariant factors of the translated group")
    d.add_argument("--images", help="images of the standard generators")
    d.set_defaults(func=cmd_dual)

    s = sub.add_parser("sim", parents=[common], help="finite action simulator")
    s.add_argument("what", choices=sorted(SIM))
    s.add_argument("--action", help="action JSON (inline or file)")
    s.add_argument("--regular", help="regular action of the given invariant factors")
    s.add_argument("--target", help="fine target action JSON (defect)")
    s.add_argument("--p", help="coarse approximation JSON (defect)")
    s.add_argument("--k", help="least multiple landing in the base, or inf (extend)")
    s.add_argument("--h", help="base element over the base generators (extend)")
    s.add_argument("--order", help="declared order of the new generator (extend)")
    s.add_argument("--s", help="one-line permutation, 1-indexed")
    s.add_argument("--t", help="one-line permutation, 1-indexed")
    s.add_argument("--n", type=int, help="level index for d_n")
    s.add_argument("--levels", help="'lcm' (default) or 'geom:<factor>'")
    s.add_argument("--orders", default="inf", help="generator orders for lnk, e.g. 2,inf")
    s.add_argument("--relations", help="relations for lnk, e.g. '2,-1'")
    s.add_argument("--q", type=int, default=2, help="block count for lnk")
    s.add_argument("--transitive", action="store_true")
    s.add_argument("--mode", default="auto", choices=["auto", "enumerate", "sample"])
    s.add_argument("--count", type=int, default=20, help="number of samples")
    s.add_argument("--limit", type=int, default=50, help="members shown")
    s.add_argument("--eps", default="1/10", help="success threshold (probe)")
    s.add_argument("--candidate-levels", help="explicit candidate block counts (probe)")
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--method", default="auto", choices=["auto", "full", "orbit"])
    s.add_argument("--csv", action="store_true", help="emit per-element defect rows")
    s.add_argument("--instance", help="relation-guided extension instance JSON")
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_sim)

    ch = sub.add_parser("chacon", parents=[common], help="row selection for 0/1 matrices")
    ch.add_argument("what", choices=["select", "verify"])
    ch.add_argument("file", nargs="?", help="instance JSON (default: bundled sample)")
    ch.add_argument("--gamma", type=int, help="row index, 1-based (verify)")
    ch.set_defaults(func=cmd_chacon)

    o = sub.add_parser("oracle", parents=[common], help="brute-force subgroup oracle")
    o.add_argument("what", choices=["subgroups", "embeds"])
    o.add_argument("groups", nargs="+")
    o.set_defaults(func=cmd_oracle)
    return p


def _exit_code(exc: BaseException) -> int:
    from .action_engine.metric import BudgetError
    from .chacon import ChaconError
    from .finite import OrderBoundError

    if isinstance(exc, (UsageError, ParseError)):
        return EXIT_USAGE
    if isinstance(exc, (BudgetError, OrderBoundError)):
        return EXIT_BUDGET
    if isinstance(exc, (GroupError, ChaconError, ValueError)):
        return EXIT_PRECONDITION
    raise exc


def run(argv=None) -> tuple[int, dict | None]:
    """Execute one command; returns ``(exit code, report or None)``.

    A ``--budget`` override applies to this call only.
    """
    saved = os.environ.get("TYPACT_BUDGET")
    try:
        return _run(argv)
    finally:
        if saved is None:
            os.environ.pop("TYPACT_BUDGET", None)
        else:
            os.environ["TYPACT_BUDGET"] = saved


def _run(argv):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    json_mode = "--json" in argv
    t0 = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        if args.budget:
            os.environ["TYPACT_BUDGET"] = args.budget
        inputs, result, rules, text = args.func(args)
    except Exception as exc:
        code = _exit_code(exc)  # re-raises anything unexpected
        kind = {EXIT_USAGE: "usage", EXIT_PRECONDITION: "precondition", EXIT_BUDGET: "budget"}[code]
        if json_mode:
            rep = {
                "schema": SCHEMA_ID,
                "command": argv,
                "inputs": {},
                "result": None,
                "rules": [],
                "error": {"kind": kind, "message": str(exc)},
                "timing": {"seconds": round(time.perf_counter() - t0, 6)},
            }
            print(json.dumps(rep, indent=2))
            return code, rep
        print(f"error ({kind}): {exc}", file=sys.stderr)
        return code, None
    rep = {
        "schema": SCHEMA_ID,
        "command": argv,
        "inputs": inputs,
        "result": result,
        "rules": rules,
        "timing": {"seconds": round(time.perf_counter() - t0, 6)},
    }
    if args.json:
        print(json.dumps(rep, indent=2))
    elif not getattr(args, "csv", False):
        print(text)
    return EXIT_OK, rep


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
