"""Command-line front end: ``toric-ej <command> system.json [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cox import (
    DegreeHypothesisError,
    build_context,
    critical_degree,
    delta_element,
    graded_quotient_dim,
    homogenize,
    irrelevant_saturation,
    membership,
    parse_cox,
    toric_jacobian_cox,
)
from .exact import EigenConvergenceError, rat_to_json
from .groebner import GroebnerStepLimit
from .laurent import LaurentSystem, ParseError, load_system, newton_polytope, parse, torus_jacobian
from .polytope import PolytopeSequence, is_essential, is_indecomposable, mixed_volume
from .quotient import InfiniteVarietyError, RootSeparationError, build_quotient, numeric_roots
from .residue import (
    EmptyVarietyError,
    ResidueContext,
    audit_infinity,
    converse_certificate,
    euler_jacobi_check,
    equivalence_harness,
)

SCHEMA = "toric-ej/1"


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    seed: int = 0
    groebner_step_cap: int = 100_000
    eigen_dim_cap: int = 200

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.groebner_step_cap < 1 or self.eigen_dim_cap < 1:
            raise ValueError("caps must be at least 1")

    def residue_kwargs(self) -> dict:
        return dict(tol=self.tolerance, seed=self.seed, step_cap=self.groebner_step_cap, dim_cap=self.eigen_dim_cap)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# commands; each returns a JSON-ready dict


def _square(system: LaurentSystem) -> LaurentSystem:
    if not system.is_square:
        raise InputError(f"command needs a square system ({system.n_vars} polynomials), got {len(system)}")
    return system


def cmd_info(system, args, cfg):
    supports = system.supports()
    out = {
        "variables": list(system.variables),
        "newton_polytopes": [newton_polytope(f).to_json() for f in system.polys],
        "supports": [P.to_json() for P in supports],
    }
    if system.is_square:
        seq = PolytopeSequence(supports)
        out["mixed_volume"] = rat_to_json(mixed_volume(seq))
        ess = is_essential(seq)
        ind = is_indecomposable(seq)
        out["essential"] = ess.ok
        out["indecomposable"] = ind.ok
        out["indecomposable_witness"] = ind.to_json()
    out["exact"] = True
    return out


def cmd_solve(system, args, cfg):
    q = build_quotient(_square(system), cfg.groebner_step_cap)
    out = q.to_json()
    out["roots"] = numeric_roots(q, cfg.tolerance, cfg.seed, cfg.eigen_dim_cap).to_json()
    return out


def cmd_residue(system, args, cfg):
    h = _parse_h(args.h, system)
    ctx = ResidueContext(_square(system), **cfg.residue_kwargs())
    r = ctx.residue(h)
    return {"h": h.to_string(system.variables), **r.to_json()}


def cmd_euler_jacobi(system, args, cfg):
    return euler_jacobi_check(_square(system), **cfg.residue_kwargs()).to_json()


def cmd_converse(system, args, cfg):
    return converse_certificate(_square(system), **cfg.residue_kwargs()).to_json(system.variables)


def cmd_infinity(system, args, cfg):
    return audit_infinity(_square(system), step_cap=cfg.groebner_step_cap).to_json()


def cmd_equivalence(system, args, cfg):
    return equivalence_harness(_square(system), **cfg.residue_kwargs()).to_json()


def _cox_setup(system: LaurentSystem):
    supports = system.supports()
    P = PolytopeSequence(supports).total()
    ctx = build_context(P)
    F = [homogenize(f, S, ctx) for f, S in zip(system.polys, supports)]
    return ctx, F


def _cox_system(system: LaurentSystem) -> LaurentSystem:
    if len(system) != system.n_vars + 1:
        raise InputError(f"Cox commands need n+1 = {system.n_vars + 1} polynomials, got {len(system)}")
    return system


def cmd_homogenize(system, args, cfg):
    ctx, F = _cox_setup(system)
    return {"context": ctx.to_json(), "homogenized": [f.to_json() for f in F], "exact": True}


def cmd_cox_dim(system, args, cfg):
    ctx, F = _cox_setup(system)
    if args.degree is None:
        if len(F) != ctx.n + 1:
            raise InputError("--degree is required unless the system has n+1 polynomials")
        alpha = critical_degree([f.degree for f in F], ctx).rho_F
    else:
        rep = _int_list(args.degree, "--degree")
        if len(rep) != ctx.nvars:
            raise InputError(f"--degree needs {ctx.nvars} entries (one per ray)")
        alpha = ctx.degree(rep)
    return {"degree": alpha.to_json(), "quotient_dim": graded_quotient_dim(F, alpha), "exact": True}


def cmd_jacobian(system, args, cfg):
    out = {}
    if system.is_square:
        out["torus_jacobian"] = torus_jacobian(system).to_string(system.variables)
    if len(system) == system.n_vars + 1:
        ctx, F = _cox_setup(system)
        I = [j - 1 for j in _int_list(args.I, "--I")] if args.I else None
        J = toric_jacobian_cox(F, ctx, I=I)
        out["toric_jacobian"] = J.to_json()
        out["rays"] = [list(r) for r in ctx.rays]
    if not out:
        raise InputError("jacobian needs n or n+1 polynomials")
    out["exact"] = True
    return out


def cmd_delta(system, args, cfg):
    ctx, F = _cox_setup(_cox_system(system))
    cone = [j - 1 for j in _int_list(args.cone, "--cone")]
    if any(j < 0 or j >= ctx.nvars for j in cone):
        raise InputError(f"--cone ray indices must lie in 1..{ctx.nvars}")
    D = delta_element(F, cone, ctx)
    return {"cone": [j + 1 for j in cone], "delta": D.to_json(), "tie_break": "smallest ray index", "exact": True}


def cmd_membership(system, args, cfg):
    ctx, F = _cox_setup(system)
    try:
        H = parse_cox(args.h, ctx)
    except (ParseError, ValueError) as exc:
        raise InputError(f"--h: {exc}") from None
    res = membership(H, F, step_cap=cfg.groebner_step_cap)
    return {"h": H.to_string(), **res.to_json()}


def cmd_empty(system, args, cfg):
    ctx, F = _cox_setup(system)
    return {**irrelevant_saturation(F, ctx, step_cap=cfg.groebner_step_cap).to_json(), "exact": True}


COMMANDS = {
    "info": (cmd_info, "Newton polytopes, mixed volume, essential/indecomposable"),
    "solve": (cmd_solve, "degree, quotient basis and torus roots"),
    "residue": (cmd_residue, "global residue of --h"),
    "euler-jacobi": (cmd_euler_jacobi, "residues of all interior monomials"),
    "converse": (cmd_converse, "interior representative of the torus jacobian"),
    "infinity": (cmd_infinity, "zeros-at-infinity audit over the normal fan"),
    "equivalence": (cmd_equivalence, "three-way equivalence harness"),
    "homogenize": (cmd_homogenize, "Cox-ring homogenization"),
    "cox-dim": (cmd_cox_dim, "graded quotient dimension"),
    "jacobian": (cmd_jacobian, "torus jacobian and toric jacobian"),
    "delta": (cmd_delta, "determinant element for a maximal cone"),
    "membership": (cmd_membership, "ideal membership of --h in the Cox ring"),
    "empty": (cmd_empty, "emptiness of the common zero set on the toric variety"),
}


def _parse_h(src: str, system: LaurentSystem):
    try:
        return parse(src, system.variables)
    except ParseError as exc:
        raise InputError(f"--h: {exc}") from None


def _int_list(src: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in src.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated integers") from None


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="numeric tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0, or $TORIC_EJ_SEED)")
    common.add_argument("--step-cap", type=int, default=None, help="Groebner reduction-step cap (default 100000)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="human-readable output")

    parser = argparse.ArgumentParser(prog="toric-ej", description="Toric Euler-Jacobi toolkit")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("system", help="system file (JSON)")
        if name in ("residue", "membership"):
            p.add_argument("--h", required=True, help="polynomial to test")
        if name == "cox-dim":
            p.add_argument("--degree", default=None, help="degree representative, one entry per ray")
        if name == "jacobian":
            p.add_argument("--I", default=None, help="1-based ray indices for the toric jacobian")
        if name == "delta":
            p.add_argument("--cone", required=True, help="1-based ray indices of a maximal cone")
    return parser


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("TORIC_EJ_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise InputError("TORIC_EJ_SEED must be an integer") from None
    kw = {}
    if args.tol is not None:
        kw["tolerance"] = args.tol
    if seed is not None:
        kw["seed"] = seed
    if args.step_cap is not None:
        kw["groebner_step_cap"] = args.step_cap
    try:
        return RunConfig(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _render_table(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render_table(item, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
    else:
        lines.append(pad + _flat(obj))
    return lines


def _is_flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _is_flat(x)) for x in v)


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    func = COMMANDS[args.command][0]
    try:
        cfg = _config(args)
        system = load_system(args.system)
    except InputError as exc:
        print(f"toric-ej: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError:
        print(f"toric-ej: no such file: {args.system}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ParseError, ValueError, TypeError) as exc:
        print(f"toric-ej: malformed system file {args.system}: {exc}", file=sys.stderr)
        return 2
    try:
        result = func(system, args, cfg)
    except InputError as exc:
        print(f"toric-ej: {exc}", file=sys.stderr)
        return 2
    except (
        GroebnerStepLimit,
        InfiniteVarietyError,
        EmptyVarietyError,
        RootSeparationError,
        EigenConvergenceError,
        DegreeHypothesisError,
        ArithmeticError,
        ValueError,
    ) as exc:
        print(f"toric-ej: computation fault: {exc}", file=sys.stderr)
        return 1
    payload = {"schema": SCHEMA, "command": args.command, **result}
    if (args.fmt or "json") == "table":
        print("\n".join(_render_table(payload)))
    else:
        print(dumps(payload))
    return 0


def dumps(obj, indent: int = 0) -> str:
    """JSON with two-space indentation; lists of scalars stay on one line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in obj) or _is_flat(list(obj)):
            return json.dumps(obj, default=_json_default)
        items = [pad + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, default=_json_default)


def _json_default(o):
    if isinstance(o, Fraction):
        return rat_to_json(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


if __name__ == "__main__":
    sys.exit(main())
