"""Command-line front end.

Exit codes: 0 success / feasible / ordered, 1 infeasible / not ordered /
suite violations, 2 parse or validation error, 3 arithmetic failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import arith, io
from .blackwell import check_garbling
from .core import InfoStructure, PairMeasure, ProbVector, make_cond_independent, marginal, quantize_channel
from .errors import ArithmeticFailure, InfoOrderError
from .instances import gaussian_bump_density, random_game, random_structure
from .ordering import check_order, monotonicity_suite, witness_game
from .solver import normal_form_value, value

log = logging.getLogger("infoorder")

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_ARITH = 0, 1, 2, 3
DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _mode(args) -> bool | None:
    if getattr(args, "rational", False):
        return True
    if getattr(args, "float", False):
        return False
    return None


def _emit(args, payload: dict, text: str) -> None:
    if args.text:
        print(text)
    else:
        print(json.dumps(payload, indent=2))


def _pair(path, player: int, exact) -> PairMeasure:
    obj = io.load(path, exact)
    if isinstance(obj, PairMeasure):
        return obj
    if isinstance(obj, InfoStructure):
        return marginal(obj, player)
    raise InfoOrderError(f"{path}: expected a pair or structure file")


def _structure(path, exact) -> InfoStructure:
    obj = io.load(path, exact)
    if not isinstance(obj, InfoStructure):
        raise InfoOrderError(f"{path}: expected a structure file")
    return obj


def cmd_solve(args) -> int:
    exact = _mode(args)
    game = io.load(args.game, exact)
    mu = _structure(args.structure, exact)
    res = value(game, mu, exact=exact, cross_check=args.cross_check)
    payload = {
        "value": arith.fmt(res.value),
        "duality_gap": arith.fmt(res.duality_gap),
        "strategy1": io.to_dict(res.strategy1.policy),
        "strategy2": io.to_dict(res.strategy2.policy),
    }
    text = f"V* = {res.value}  (duality gap {res.duality_gap})"
    if args.oracle == "normal-form":
        nf = normal_form_value(game, mu, exact=exact)
        if isinstance(nf, Fraction) and isinstance(res.value, Fraction):
            same = nf == res.value
        else:
            same = abs(float(nf) - float(res.value)) <= args.tol
        payload["oracle"] = {"method": "normal-form", "value": arith.fmt(nf), "equal": same}
        text += f"\nnormal-form value = {nf}  equal: {same}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_garble(args) -> int:
    exact = _mode(args)
    mu = _pair(args.mu, args.player, exact)
    nu = _pair(args.nu, args.player, exact)
    res = check_garbling(mu, nu, exact=exact)
    if res.feasible:
        _emit(args, {"feasible": True, "kernel": io.to_dict(res.kernel)}, f"feasible; kernel\n{res.kernel.matrix}")
        return EXIT_OK
    payload = {
        "feasible": False,
        "margin": arith.fmt(res.margin),
        "separating_cost": {
            "x_labels": list(res.x_labels),
            "y_labels": list(res.y_labels),
            "table": arith.dump_array(res.separating_cost),
        },
    }
    _emit(args, payload, f"infeasible; margin {res.margin}\nseparating cost\n{res.separating_cost}")
    return EXIT_NO


def cmd_order(args) -> int:
    exact = _mode(args)
    nu = _structure(args.nu, exact)
    mu = _structure(args.mu, exact)
    res = check_order(nu, mu, mode=args.mode, exact=exact)
    payload = {"ordered": res.ordered, "mode": res.mode}
    if res.ordered:
        payload.update(kappa1=io.to_dict(res.kappa1), kappa2=io.to_dict(res.kappa2), common=io.to_dict(res.common))
        _emit(args, payload, f"ordered ({res.mode}): mu is better for the maximizer than nu")
        return EXIT_OK
    text = f"not ordered ({res.mode})"
    if res.witness is not None:
        w = res.witness
        payload["witness"] = {
            "side": w.side,
            "value_nu": arith.fmt(w.value_nu),
            "value_mu": arith.fmt(w.value_mu),
            "margin": arith.fmt(w.margin),
            "game": io.to_dict(w.game),
        }
        if args.witness_out:
            io.save(w.game, args.witness_out)
            payload["witness"]["file"] = str(args.witness_out)
        text += f"; witness game on side {w.side}: V(nu) = {w.value_nu} > V(mu) = {w.value_mu}"
    elif res.farkas is not None:
        payload["farkas"] = arith.dump_array(res.farkas)
        text += "; joint LP infeasible (Farkas certificate attached)"
    _emit(args, payload, text)
    return EXIT_NO


def cmd_witness(args) -> int:
    exact = _mode(args)
    nu = _structure(args.nu, exact)
    mu = _structure(args.mu, exact)
    game = witness_game(nu, mu, args.side, exact=exact)
    if args.out:
        io.save(game, args.out)
    v_nu = value(game, nu, exact=exact).value
    v_mu = value(game, mu, exact=exact).value
    payload = {"game": io.to_dict(game), "value_nu": arith.fmt(v_nu), "value_mu": arith.fmt(v_mu)}
    _emit(args, payload, f"witness game: V(nu) = {v_nu} > V(mu) = {v_mu}")
    return EXIT_OK


def cmd_quantize(args) -> int:
    xs = tuple(range(len(args.means)))
    if args.density == "gaussian":
        density = gaussian_bump_density(dict(zip(xs, args.means)), args.sigma)
    else:
        density = lambda y, x: np.ones_like(y)  # noqa: E731
    ch = quantize_channel(density, xs, tuple(args.interval), args.cells, exact=bool(args.rational))
    if args.structure:
        zeta = ProbVector.uniform(xs, exact=ch.exact)
        obj = make_cond_independent(zeta, ch, ch)
    else:
        obj = ch
    doc = io.to_dict(obj)
    if args.out:
        io.save(obj, args.out)
    _emit(args, doc, f"{args.cells}-cell channel over {len(xs)} states" + (f" -> {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_gen(args) -> int:
    exact = not args.float
    rng = np.random.default_rng(args.seed)
    mu = random_structure(rng, args.x, args.y, args.y, exact, cond_independent=args.cond_independent)
    game = random_game(rng, args.x, args.u, args.u, exact)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    gpath = io.save(game, out / "game.json")
    spath = io.save(mu, out / "structure.json")
    _emit(args, {"seed": args.seed, "game": str(gpath), "structure": str(spath)},
          f"seed {args.seed}: wrote {gpath} and {spath}")
    return EXIT_OK


def cmd_suite(args) -> int:
    mu = _structure(args.structure, _mode(args)) if args.structure else None
    rep = monotonicity_suite(mu, args.trials, args.seed, exact=bool(args.rational), tol=args.tol, jobs=args.jobs)
    payload = {"seed": rep.seed, "trials": rep.trials, "checks": rep.checks, "violations": rep.violations}
    _emit(args, payload, f"seed {rep.seed}: {rep.checks} checks, {len(rep.violations)} violations")
    return EXIT_OK if rep.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infoorder", description="Information-structure ordering for finite zero-sum Bayesian games.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, arithmetic=True):
        sp.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
        sp.add_argument("--tol", type=float, default=arith.TOL)
        if arithmetic:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--rational", action="store_true")
            g.add_argument("--float", action="store_true")

    sp = sub.add_parser("solve", help="equilibrium value of a game under a structure")
    sp.add_argument("--game", required=True)
    sp.add_argument("--structure", required=True)
    sp.add_argument("--oracle", choices=["normal-form"])
    sp.add_argument("--cross-check", action="store_true", help="also solve the maximizer-side LP")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("garble", help="is NU a garbling of MU for one player")
    sp.add_argument("mu")
    sp.add_argument("nu")
    sp.add_argument("--player", type=int, choices=[1, 2], default=1)
    common(sp)
    sp.set_defaults(func=cmd_garble)

    sp = sub.add_parser("order", help="is MU better for the maximizer than NU")
    sp.add_argument("nu")
    sp.add_argument("mu")
    sp.add_argument("--mode", choices=["joint", "decomposed"])
    sp.add_argument("--witness-out")
    common(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("witness", help="witness game for a failed order")
    sp.add_argument("nu")
    sp.add_argument("mu")
    sp.add_argument("--side", type=int, choices=[1, 2], required=True)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("quantize", help="discretize a density channel")
    sp.add_argument("--density", choices=["gaussian", "uniform"], default="gaussian")
    sp.add_argument("--means", type=float, nargs="+", default=[0.25, 0.75])
    sp.add_argument("--sigma", type=float, default=0.2)
    sp.add_argument("--interval", type=float, nargs=2, default=[0.0, 1.0])
    sp.add_argument("--cells", type=int, required=True)
    sp.add_argument("--structure", action="store_true", help="write a structure with the channel for both players")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_quantize)

    sp = sub.add_parser("gen", help="write a seeded random game and structure")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--x", type=int, default=2)
    sp.add_argument("--y", type=int, default=2)
    sp.add_argument("--u", type=int, default=2)
    sp.add_argument("--cond-independent", action="store_true")
    sp.add_argument("--out-dir", default=".")
    common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("suite", help="random monotonicity checks")
    sp.add_argument("--structure")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ArithmeticFailure as exc:
        print(f"arithmetic failure: {exc}", file=sys.stderr)
        return EXIT_ARITH
    except (InfoOrderError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # exit-code contract is total
        log.debug("unexpected failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
