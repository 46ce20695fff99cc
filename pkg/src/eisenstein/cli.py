"""Command line: classify, verify, gen, sigma, oracle.

Output is JSON with a top-level ``"schema": 1``; big integers are written
as decimal strings.  Exit codes: 0 ok, 1 disagreement or discrepancy,
2 invalid input (with a JSON error object on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .cft_oracle import norm_subgroup, oracle_verdicts, required_precision
from .classify2 import check_cyclic_p2, classify_p2, gen_p2
from .classify3 import check_cyclic_p3, gen_p3
from .cyclosum import Partition, sigma_direct, sigma_formula
from .gf import ResidueField
from .upoly import EisensteinPoly
from .zq import PrecisionError, UnramRing

SCHEMA = 1
DEFAULT_N = {2: 6, 3: 7}


class InputError(ValueError):
    pass


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2) + "\n")


def _fail(kind: str, msg: str, code: int = 2) -> int:
    err = {"schema": SCHEMA, "error": {"type": kind, "message": msg}}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


# -- polynomial documents --------------------------------------------------------

def poly_to_document(f: EisensteinPoly) -> dict:
    R = f.ring
    return {
        "schema": SCHEMA,
        "p": R.p,
        "f": R.f,
        "residue_modulus": [str(c) for c in R.base.modulus],
        "degree": f.n,
        "precision": R.N,
        "coeffs": [[str(int(c)) for c in x.coeffs] for x in f.coeffs],
    }


def _exponent(n: int, p: int) -> int:
    k, m = 0, 1
    while m < n:
        m *= p
        k += 1
    if m != n or k not in (2, 3):
        raise InputError(f"degree {n} is not p^2 or p^3 for p = {p}")
    return k


def poly_from_document(doc: dict) -> EisensteinPoly:
    try:
        p, fdeg, n = int(doc["p"]), int(doc.get("f", 1)), int(doc["degree"])
        coeffs = doc["coeffs"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed polynomial document: {e}") from None
    k = _exponent(n, p)
    N = int(doc.get("precision") or DEFAULT_N[k])
    if len(coeffs) != n:
        raise InputError(f"expected {n} coefficients, got {len(coeffs)}")
    try:
        mod = doc.get("residue_modulus")
        K = ResidueField(p, fdeg, tuple(int(c) for c in mod) if mod else None)
        R = UnramRing(K, N)
        rows = []
        for c in coeffs:
            c = [c] if isinstance(c, (int, str)) else list(c)
            if len(c) != fdeg:
                raise InputError(f"coefficient {c} does not have {fdeg} coordinates")
            rows.append(tuple(int(x) for x in c))
        return EisensteinPoly.from_ints(R, rows)
    except InputError:
        raise
    except (TypeError, ValueError) as e:
        raise InputError(str(e)) from None


def _load(path: str) -> EisensteinPoly:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise InputError("polynomial document must be a JSON object")
    return poly_from_document(doc)


# -- subcommands ----------------------------------------------------------------

def cmd_classify(args) -> int:
    f = _load(args.input)
    p = f.p
    if f.n == p * p:
        rep = check_cyclic_p2(f)
        out = {"command": "classify", "degree": str(f.n), "theorem": rep.to_json(),
               "classification": classify_p2(f).to_json()}
        code = 0
    else:
        rep = check_cyclic_p3(f, cross_check=args.cross_check)
        out = {"command": "classify", "degree": str(f.n), "theorem": rep.to_json()}
        code = 1 if rep.discrepancies else 0
    if args.json:
        _emit(out)
    else:
        th = out["theorem"]
        print(f"degree {f.n} over F_{p}^{f.ring.f}: cyclic={th['cyclic']} first_failed={th['first_failed']}")
        for c in th["conditions"]:
            mark = "ok  " if c["passed"] else "FAIL"
            print(f"  [{mark}] ({c['id']}) {c['reason']}")
        if "classification" in out:
            cl = out["classification"]
            print(f"  regime={cl['regime']} galois={cl['galois']} max_abelian_degree={cl['predicted_max_abelian_degree']}")
    return code


def _p2_targets(p: int) -> list[str]:
    fails = [f"fail:{i}" for i in range(1, 8) if not (i == 5 and p == 3)]
    return ["cyclic", "random_profile"] + fails


def _p3_targets(p: int) -> list[str]:
    return ["cyclic", "near", "pair", "random_profile"]


def cmd_verify(args) -> int:
    p, fdeg = args.p, args.f
    k = 2 if args.degree == "p2" else 3
    if k == 3 and p < 5:
        raise InputError("degree p^3 verification needs p >= 5")
    targets = args.targets.split(",") if args.targets else (_p2_targets(p) if k == 2 else _p3_targets(p))
    cells: dict[str, int] = {}
    bad = []
    rows = []
    for idx in range(args.samples):
        tgt = targets[idx % len(targets)]
        seed = args.seed * 100003 + idx
        try:
            f = gen_p2(p, fdeg, tgt, seed) if k == 2 else gen_p3(p, fdeg, tgt, seed)
        except ValueError as e:
            raise InputError(f"target {tgt!r}: {e}") from None
        if k == 2:
            th = check_cyclic_p2(f).cyclic
            discrepancies = []
        else:
            rep3 = check_cyclic_p3(f)
            th = rep3.cyclic
            discrepancies = [d.to_json() for d in rep3.discrepancies]
        orc = oracle_verdicts(f)
        key = f"theorem_{str(th).lower()}__oracle_{str(orc.cyclic).lower()}"
        cells[key] = cells.get(key, 0) + 1
        row = {"index": idx, "target": tgt, "seed": str(seed), "theorem_cyclic": th,
               "oracle_cyclic": orc.cyclic,
               "invariant_factors": [str(d) for d in orc.invariant_factors]}
        if discrepancies:
            row["discrepancies"] = discrepancies
        rows.append(row)
        if th != orc.cyclic or discrepancies:
            bad.append(idx)
    _emit({
        "command": "verify", "p": str(p), "f": str(fdeg), "degree": args.degree,
        "samples": str(args.samples), "seed": str(args.seed),
        "agreement": f"{args.samples - len(bad)}/{args.samples}",
        "matrix": dict(sorted(cells.items())),
        "disagreements": [str(i) for i in bad],
        "rows": rows,
    })
    return 1 if bad else 0


def cmd_gen(args) -> int:
    try:
        if args.degree == "p2":
            f = gen_p2(args.p, args.f, args.target, args.seed)
        else:
            f = gen_p3(args.p, args.f, args.target, args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    sys.stdout.write(json.dumps(poly_to_document(f), sort_keys=True) + "\n")
    return 0


def cmd_sigma(args) -> int:
    try:
        lam = Partition(tuple(int(x) for x in args.lam.split(",")))
    except ValueError as e:
        raise InputError(f"bad partition {args.lam!r}: {e}") from None
    if args.ell < 1:
        raise InputError("ell must be positive")
    out = {"command": "sigma", "lambda": [str(x) for x in lam.parts], "ell": str(args.ell)}
    if args.method in ("direct", "both"):
        out["direct"] = str(sigma_direct(lam, args.ell))
    if args.method in ("formula", "both"):
        out["formula"] = str(sigma_formula(lam, args.ell))
    out["value"] = out.get("formula", out.get("direct"))
    _emit(out)
    if args.method == "both" and out["direct"] != out["formula"]:
        return 1
    return 0


def cmd_oracle(args) -> int:
    f = _load(args.input)
    m = args.level
    if m is not None:
        need = required_precision(f.p, m)
        if f.ring.N < need:
            f = f.with_ring(f.ring.with_precision(need))
    try:
        rep = norm_subgroup(f, m)
    except PrecisionError as e:
        raise InputError(str(e)) from None
    _emit({"command": "oracle", "report": rep.to_json()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eisenstein", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="run the coefficient criteria on a polynomial document")
    c.add_argument("--input", required=True)
    c.add_argument("--json", action="store_true")
    c.add_argument("--cross-check", action="store_true", help="degree p^3: also probe the norms")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="criteria versus norm-group oracle on a generated corpus")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--f", type=int, default=1)
    v.add_argument("--degree", choices=("p2", "p3"), default="p2")
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--targets", default=None)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="emit a polynomial document")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--f", type=int, default=1)
    g.add_argument("--degree", choices=("p2", "p3"), default="p2")
    g.add_argument("--target", default="cyclic")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sigma", help="root-of-unity sum Sigma_lambda(ell)")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--method", choices=("direct", "formula", "both"), default="both")
    s.set_defaults(func=cmd_sigma)

    o = sub.add_parser("oracle", help="raw norm-group report")
    o.add_argument("--input", required=True)
    o.add_argument("--level", type=int, default=None)
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.func(args)
    except InputError as e:
        return _fail("invalid_input", str(e))
    except ValueError as e:
        return _fail("invalid_input", str(e))


if __name__ == "__main__":
    sys.exit(main())
