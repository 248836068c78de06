"""Command line front end: JSON in, JSON out.

Exit codes: 0 success, 1 verified negative (Empty, Mazur violation),
2 invalid input, 3 budget exhausted.  Arguments taking structured data
accept inline JSON or ``@path`` to read a file.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import serialize as ser
from .arith import FieldError, FieldTower, common_field
from .chains import Empty, build_chain, chain_membership, extend_chain
from .config import BudgetExhausted, SearchConfig
from .coweight import CoweightError
from .incidence import CircularDiagram, IncidenceError, check_lines, solve_lines
from .isocrystal import (IsocrystalError, example_block, example_conjugate, newton_point,
                         standard_isocrystal, standard_symplectic_isocrystal)
from .lattice import ChainError, LatticeError, SymplecticForm
from .mazur import (MazurViolation, construct_lattice, construct_lattice_gsp,
                    enumerate_hodge_set, hodge, in_b_g_mu, mazur_check)
from .resscalars import GradedError, GradedIsocrystal, graded_membership, witness_graded
from .weyl import WeylError, adm_set, perm_set_by_chains

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class InvalidInput(ValueError):
    pass


class Negative(Exception):
    def __init__(self, kind, reason, payload=None):
        super().__init__(reason)
        self.kind, self.reason, self.payload = kind, reason, payload or {}


# --- input helpers -------------------------------------------------------------------

def load_json(arg, what):
    """Inline JSON or @path."""
    if arg is None:
        raise InvalidInput(f"missing --{what}")
    src, text = "<inline>", arg
    if arg.startswith("@"):
        src = arg[1:]
        try:
            with open(src) as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"--{what}: cannot read {src}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"--{what}: malformed JSON in {src} at line {exc.lineno}, "
                           f"column {exc.colno} (char {exc.pos}): {exc.msg}")


def _coweight(s, what):
    if s is None:
        raise InvalidInput(f"missing --{what}")
    if s.startswith("@") or s.startswith("["):
        return ser.coweight_from_json(load_json(s, what), what)
    return ser.coweight_from_json(s, what)


def _ints(s, what):
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError:
        raise InvalidInput(f"--{what}: expected comma separated integers, got {s!r}")


def _field(args):
    return FieldTower(args.p, 1, args.m)


def _cfg(args):
    kw = {}
    for name in ("a", "m_max", "deadline", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    return SearchConfig.from_env(**kw)


def _isocrystal(args, group="GL"):
    """From --b (JSON), --example, or --nu (standard form)."""
    F = _field(args)
    if getattr(args, "b", None):
        return ser.isocrystal_from_json(load_json(args.b, "b"), "b"), None
    ex = getattr(args, "example", None)
    if ex:
        fn = {"block": example_block, "conjugate": example_conjugate}.get(ex)
        if fn is None:
            raise InvalidInput("--example must be block or conjugate")
        return fn(args.param, F), None
    if getattr(args, "nu", None):
        nu = _coweight(args.nu, "nu")
        if group == "GSp":
            S = standard_symplectic_isocrystal(nu, F)
            return S.iso, S.form
        return standard_isocrystal(nu, F), None
    raise InvalidInput("need one of --b, --example, --nu")


def _group(args):
    g = (getattr(args, "group", None) or "gl").lower()
    if g not in ("gl", "gsp"):
        raise InvalidInput("--group must be gl or gsp")
    return "GSp" if g == "gsp" else "GL"


# --- subcommands -----------------------------------------------------------------------

def cmd_newton(args, log):
    X, _ = _isocrystal(args)
    npt = newton_point(X, _cfg(args))
    out = ser.newton_to_json(npt)
    log.append({"method": npt.method, "bounds": out.pop("bounds", None)})
    out.pop("method")
    if not npt.certified:
        raise Negative("uncertified", "Newton point could not be certified", out)
    return out


def _witness_input(args):
    if getattr(args, "witness", None):
        w = load_json(args.witness, "witness")
        if not isinstance(w, dict) or "lattice" not in w or "isocrystal" not in w:
            raise InvalidInput("--witness must contain lattice and isocrystal")
        X = ser.isocrystal_from_json(w["isocrystal"], "witness.isocrystal")
        M = ser.lattice_from_json(w["lattice"], None, "witness.lattice")
        return X, M, w
    X, _ = _isocrystal(args)
    M = ser.lattice_from_json(load_json(args.lattice, "lattice"), None, "lattice")
    return X, M, {}


def cmd_hodge(args, log):
    X, M, w = _witness_input(args)
    F = common_field(X.field, M.field)
    mu = hodge(M.to_field(F), X.to_field(F))
    out = {"mu": ser.coweight_to_json(mu)}
    if "mu" in w:
        out["matches_witness"] = ser.coweight_to_json(mu) == list(w["mu"])
        if not out["matches_witness"]:
            raise Negative("mismatch", "witness does not re-verify", out)
    return out


def cmd_mazur(args, log):
    cfg = _cfg(args)
    if args.mu is not None and args.lattice is None and args.witness is None:
        X, form = _isocrystal(args, _group(args))
        mu = _coweight(args.mu, "mu")
        v = in_b_g_mu(X, mu, _group(args), form, cfg)
        if v is None:
            raise BudgetExhausted("Newton point not certified")
        out = {"in_B_G_mu": bool(v), "mu": ser.coweight_to_json(mu)}
        if not v:
            raise Negative("mazur-violation", "[b] is not in B(G, mu)", out)
        return out
    X, M, _ = _witness_input(args)
    rep = mazur_check(M, X, cfg)
    out = {"nu": ser.coweight_to_json(rep.nu.nu), "mu": ser.coweight_to_json(rep.hodge),
           "holds": rep.verdict, "kappa": rep.kappa}
    if rep.verdict is None:
        raise BudgetExhausted("Newton point not certified")
    if not rep.verdict:
        raise Negative("mazur-violation", "Hodge vector is not above the Newton point", out)
    return out


def _construct(args, log, group):
    nu = _coweight(args.nu, "nu")
    mu = _coweight(args.mu, "mu")
    F = _field(args)
    cfg = _cfg(args)
    if group == "GSp":
        S = standard_symplectic_isocrystal(nu, F)
        M = construct_lattice_gsp(nu, mu, S.form, cfg, field=F, transcript=log)
        X = S.iso
    else:
        M = construct_lattice(nu, mu, cfg, field=F, transcript=log)
        X = standard_isocrystal(nu, F)
    X = X.to_field(M.field)
    got = hodge(M, X)
    log.append({"relative_position": ser.coweight_to_json(got)})
    return {"nu": ser.coweight_to_json(nu), "mu": ser.coweight_to_json(got),
            "lattice": ser.lattice_to_json(M), "isocrystal": ser.isocrystal_to_json(X)}


def cmd_construct(args, log):
    return _construct(args, log, "GL")


def cmd_construct_gsp(args, log):
    return _construct(args, log, "GSp")


def _chain_setup(args):
    group = _group(args)
    X, form = _isocrystal(args, group)
    if group == "GSp":
        if args.n is not None and X.n != 2 * args.n:
            raise InvalidInput(f"--nu must have length 2n = {2 * args.n}")
        form = form or SymplecticForm.standard(X.n)
    elif args.n is not None and X.n != args.n:
        raise InvalidInput(f"isocrystal has rank {X.n}, expected {args.n}")
    return group, X, form


def cmd_chain_build(args, log):
    group, X, form = _chain_setup(args)
    I = _ints(args.type, "type")
    res = build_chain(X, args.r, I, form, _cfg(args), log)
    if isinstance(res, Empty):
        raise Negative("mazur-violation", res.reason)
    return {"chain": ser.chain_to_json(res), "r": args.r, "group": group,
            "isocrystal": ser.isocrystal_to_json(X.to_field(res.lattices[res.type[0]].field))}


def cmd_chain_extend(args, log):
    group, X, form = _chain_setup(args)
    C = ser.chain_from_json(load_json(args.chain, "chain"), None, "chain")
    if not chain_membership(C, X, args.r, form):
        raise Negative("not-member", "input chain is not in X(omega_r, b)")
    I = _ints(args.type, "type") if args.type else list(C.type)
    out = extend_chain(C, X, args.r, I, form, _cfg(args), log)
    return {"chain": ser.chain_to_json(out), "r": args.r, "group": group}


def cmd_incidence(args, log):
    data = load_json(args.diagram, "diagram")
    if not isinstance(data, dict) or "maps" not in data:
        raise InvalidInput("--diagram: expected {f, m, maps: [...]}")
    F = ser.field_from_json(data.get("field"), "diagram.field")
    maps = []
    for i, x in enumerate(data["maps"]):
        try:
            phi = [[ser.elem_from_json(F, c, f"maps[{i}].phi") for c in row] for row in x["phi"]]
            psi = [[ser.elem_from_json(F, c, f"maps[{i}].psi") for c in row] for row in x["psi"]]
        except (KeyError, TypeError):
            raise InvalidInput(f"diagram.maps[{i}]: expected phi and psi matrices")
        maps.append((phi, int(x.get("sigma", 1)), psi, int(x.get("tau", -1))))
    D = CircularDiagram.from_matrices(F, maps)
    sol = solve_lines(D, _cfg(args))
    ok = check_lines(D, sol.lines, sol.field)
    log.extend(sol.transcript)
    G = sol.field
    return {"lines": [[ser.elem_to_json(G, c) for c in line] for line in sol.lines],
            "field": ser.field_to_json(G), "extension_degree": G.m, "verified": bool(ok)}


def cmd_adm(args, log):
    group = _group(args)
    mu = _coweight(args.mu, "mu")
    I = _ints(args.type, "type") if args.type else None
    A = adm_set(mu, group, I)
    out = {"mu": ser.coweight_to_json(mu), "group": group, "size": len(A),
           "elements": sorted((x.to_json() for x in A.elements),
                              key=lambda d: (d["lambda"], d["w"]))}
    if A.flags:
        log.extend(A.flags)
    if args.check_perm:
        P = perm_set_by_chains(mu, group, I, a=args.window)
        out["equals_perm"] = set(A.elements) == set(P.elements)
        if not out["equals_perm"]:
            raise Negative("mismatch", "Adm differs from Perm", out)
    return out


def cmd_graded_witness(args, log):
    group = _group(args)
    F = _field(args)
    mus = [_coweight(s, "mus") for s in args.mus.split(";")]
    if args.bs:
        data = load_json(args.bs, "bs")
        if not isinstance(data, list):
            raise InvalidInput("--bs must be a list of matrices")
        X = GradedIsocrystal([ser.matrix_from_json(F, b, f"bs[{j}]") for j, b in enumerate(data)])
    else:
        nu = _coweight(args.nu, "nu")
        base = (standard_symplectic_isocrystal(nu, F).iso if group == "GSp"
                else standard_isocrystal(nu, F))
        X = GradedIsocrystal.from_norm(base.b, len(mus))
    form = SymplecticForm.standard(X.n) if group == "GSp" else None
    GM = witness_graded(mus, X, group, form, _cfg(args), log)
    if isinstance(GM, Empty):
        raise Negative("mazur-violation", GM.reason)
    return {"graded_lattice": [ser.lattice_to_json(M) for M in GM.parts],
            "mus": [ser.coweight_to_json(m) for m in mus],
            "verified": graded_membership(GM, X, mus)}


def cmd_enumerate(args, log):
    X, _ = _isocrystal(args)
    rep = enumerate_hodge_set(X, _cfg(args))
    out = {"enumerated": sorted([ser.coweight_to_json(m) for m in rep.enumerated]),
           "predicted": sorted([ser.coweight_to_json(m) for m in rep.predicted]),
           "window": rep.window, "lattices_seen": rep.lattices_seen, "equal": rep.equal}
    return out


COMMANDS = {
    "newton": cmd_newton, "hodge": cmd_hodge, "mazur": cmd_mazur,
    "construct": cmd_construct, "construct-gsp": cmd_construct_gsp,
    "chain-build": cmd_chain_build, "chain-extend": cmd_chain_extend,
    "incidence": cmd_incidence, "adm": cmd_adm,
    "graded-witness": cmd_graded_witness, "enumerate": cmd_enumerate,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="fcrystals", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic of the base field")
    common.add_argument("--m", type=int, default=1, help="degree of the base field over F_p")
    common.add_argument("--a", type=int, help="exponent window for searches")
    common.add_argument("--m-max", dest="m_max", type=int, help="largest working field degree")
    common.add_argument("--deadline", type=float, help="wall-clock budget in seconds")
    common.add_argument("--seed", type=int, help="seed for sampled searches")
    common.add_argument("--transcript", action="store_true", help="emit the verification trail")
    common.add_argument("--output", help="write JSON here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def iso(p):
        p.add_argument("--b", help="isocrystal JSON (inline or @path)")
        p.add_argument("--nu", help="Newton vector for the standard isocrystal")
        p.add_argument("--example", help="built-in example: block or conjugate")
        p.add_argument("--param", type=int, default=1, help="parameter a of the examples")

    p = sub.add_parser("newton", parents=[common]); iso(p)
    for name in ("hodge", "mazur"):
        p = sub.add_parser(name, parents=[common]); iso(p)
        p.add_argument("--witness", help="witness JSON with lattice and isocrystal")
        p.add_argument("--lattice", help="lattice JSON")
        if name == "mazur":
            p.add_argument("--mu", help="test [b] in B(G, mu) instead")
            p.add_argument("--group", default="gl")
    for name in ("construct", "construct-gsp"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--nu", required=True)
        p.add_argument("--mu", required=True)
    for name in ("chain-build", "chain-extend"):
        p = sub.add_parser(name, parents=[common]); iso(p)
        p.add_argument("--group", default="gl")
        p.add_argument("--n", type=int, help="n for GL_n or GSp_2n")
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--type", required=name == "chain-build", help="chain type, e.g. 0,2")
        if name == "chain-extend":
            p.add_argument("--chain", required=True)
    p = sub.add_parser("incidence", parents=[common])
    p.add_argument("--diagram", required=True)
    p = sub.add_parser("adm", parents=[common])
    p.add_argument("--mu", required=True)
    p.add_argument("--group", default="gl")
    p.add_argument("--type")
    p.add_argument("--check-perm", action="store_true")
    p.add_argument("--window", type=int, default=1)
    p = sub.add_parser("graded-witness", parents=[common])
    p.add_argument("--mus", required=True, help="semicolon separated coweights")
    p.add_argument("--bs", help="list of matrices b_j (inline JSON or @path)")
    p.add_argument("--nu", help="Newton vector of the norm (standard form)")
    p.add_argument("--group", default="gl")
    p = sub.add_parser("enumerate", parents=[common]); iso(p)
    return ap


def _emit(payload, args):
    text = json.dumps(ser.to_plain(payload), sort_keys=True, indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    log = []
    try:
        out = COMMANDS[args.command](args, log)
        code = EXIT_OK
    except Negative as neg:
        out = {"status": neg.kind, "reason": neg.reason, **neg.payload}
        code = EXIT_NEGATIVE
    except MazurViolation as exc:
        out = {"status": "mazur-violation", "reason": str(exc)}
        code = EXIT_NEGATIVE
    except BudgetExhausted as exc:
        out = {"status": "budget", "reason": str(exc)}
        code = EXIT_BUDGET
    except (InvalidInput, ser.SchemaError, CoweightError, IsocrystalError, LatticeError,
            ChainError, IncidenceError, GradedError, WeylError, FieldError, ValueError) as exc:
        out = {"status": "invalid-input", "reason": str(exc)}
        code = EXIT_INVALID
    if args.transcript and code != EXIT_INVALID:
        out["transcript"] = log
    _emit(out, args)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
