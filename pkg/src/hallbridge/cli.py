"""Command line front end.

    hallbridge --algebra FILE [--bound B] [--json] <command> [args]

Classes are selected as ``S<i>``, ``P<i>``, ``0`` or a catalog id such as
``1,1#0``.  Exit status: 0 on success, 1 when a verification fails, 2 on bad
input or when a search cap is hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bridgeland import BridgelandElement, check_counts, compare_products
from .hall import SERRE_FORMS, HallElement, serre_exponent, serre_sum
from .modules import CapExceeded, GlobalDimensionError, aut_order, vadd
from .quiver import load_algebra
from .verify import SUITE, Session, check_psi_inverse, render, serre_asserted, verify_all

COMMANDS = ("catalog", "hom", "ext", "resolve", "hall", "e", "dh2", "phi-check", "psi-check", "serre", "counts",
            "thm37", "verify-all")

BOUND_HELP = ("catalog bound as a comma separated dimension vector; by default every entry is 1, raised to "
              "cover the degree of the requested product (or N S_i + S_j for serre)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hallbridge", description="Hall algebras of 2-periodic complexes over F_q")
    p.add_argument("--algebra", required=True, help="algebra description file")
    p.add_argument("--bound", help=BOUND_HELP)
    p.add_argument("--json", action="store_true", help="machine readable output")
    # the same options are accepted after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", default=argparse.SUPPRESS, help=BOUND_HELP)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name: str, helptext: str, *positionals: str) -> argparse.ArgumentParser:
        c = sub.add_parser(name, help=helptext, parents=[common])
        for arg in positionals:
            c.add_argument(arg)
        return c

    command("catalog", "list isoclasses within the bound")
    command("hom", "dim Hom(A, B)", "a", "b")
    command("ext", "dim Ext^t(A, B) for all t", "a", "b")
    command("resolve", "minimal projective resolution", "a")
    command("hall", "[A] * [B] in the (twisted) Hall algebra", "a", "b").add_argument("--untwisted",
                                                                                    action="store_true")
    command("e", "E_A (or F_A with --star)", "a").add_argument("--star", action="store_true")
    command("dh2", "E_A * E_B (or F_A * F_B with --star)", "a", "b").add_argument("--star", action="store_true")
    command("phi-check", "phi multiplicativity on one pair or on all pairs in the bound").add_argument(
        "pair", nargs="*")
    command("psi-check", "psi(phi[M]) = [M] on one class or on the whole catalog").add_argument("a", nargs="?")
    s = command("serre", "quantum Serre sum in S_i, S_j")
    s.add_argument("i", type=int)
    s.add_argument("j", type=int)
    s.add_argument("--form", choices=SERRE_FORMS, default="divided")
    command("counts", "Hom-count identities for resolutions of A and B", "a", "b")
    command("thm37", "compare phi([A]*[B]) with E_A * E_B", "a", "b")
    command("verify-all", "run every verification suite")
    return p


def _parse_bound(text: str | None, n: int):
    if text is None:
        return None
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad bound {text!r}") from None
    if len(vals) != n or min(vals) < 0:
        raise ValueError(f"bound must have {n} non-negative entries")
    return vals


def _selector_dims(text: str, alg) -> tuple[int, ...]:
    """Dimension vector of a selector before any catalog exists."""
    from .modules import ModuleClass, indec_projective

    t = text.strip()
    if t == "0":
        return tuple([0] * alg.n)
    if t[:1] in ("S", "P") and t[1:].isdigit() and 1 <= int(t[1:]) <= alg.n:
        i = int(t[1:])
        return tuple(int(k == i - 1) for k in range(alg.n)) if t[0] == "S" else indec_projective(alg, i).dims
    try:
        return ModuleClass.parse(t).dims
    except ValueError:
        raise ValueError(f"bad class selector {text!r}; use S<i>, P<i>, 0 or an id like 1,1#0") from None


def _default_bound(args, alg) -> tuple[int, ...]:
    base = tuple([1] * alg.n)
    if args.command == "serre":
        probe = Session(alg, base)
        big_n = serre_exponent(probe.modcat, args.i, args.j) if 1 <= args.i <= alg.n and 1 <= args.j <= alg.n else 0
        deg = tuple(max(big_n, 0) * int(k == args.i - 1) + int(k == args.j - 1) for k in range(alg.n))
        return tuple(map(max, base, deg))
    sels = [getattr(args, k) for k in ("a", "b") if getattr(args, k, None)]
    sels += list(getattr(args, "pair", None) or [])
    total = base if not sels else tuple([0] * alg.n)
    for s in sels:
        total = vadd(total, _selector_dims(s, alg))
    return tuple(map(max, base, total))


# ------------------------------------------------------------ rendering

def _coeff(c) -> str:
    return str(c)


def _hall_text(x: HallElement) -> list[str]:
    if x.is_zero():
        return ["0"]
    return [f"({_coeff(x.terms[k])}) [{k}]" for k in sorted(x.terms)]


def _bridgeland_text(x: BridgelandElement, s: Session) -> list[str]:
    if x.is_zero():
        return ["0"]
    out = []
    for row in x.to_json(s.cc):
        key = row["key"]
        cx = key["complex"]
        c = row["coeff"]
        out.append(f"({c['a']} + {c['b']}*sqrt({s.q})) K^{tuple(key['alpha'])} K*^{tuple(key['beta'])} "
                   f"[P1={tuple(cx['p1'])} P0={tuple(cx['p0'])} d1={cx['d1']} d0={cx['d0']}]")
    return out


def _emit(payload, text_lines: list[str], as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


# ------------------------------------------------------------ commands

def run(args, out) -> int:
    alg = load_algebra(args.algebra)
    bound = _parse_bound(args.bound, alg.n) or _default_bound(args, alg)
    s = Session(alg, bound)
    cmd = args.command
    failed = False

    if cmd == "catalog":
        rows, lines = [], [f"{len(s.catalog())} classes within bound {bound}"]
        for cls in s.catalog():
            rep = s.modcat.rep(cls)
            rows.append({"class_id": str(cls), "dim_vector": list(cls.dims), "maps": [m.tolist() for m in rep.maps],
                         "aut_order": aut_order(rep)})
            lines.append(f"{cls}  |Aut| = {rows[-1]['aut_order']}  maps = {rows[-1]['maps']}")
        payload = rows

    elif cmd in ("hom", "ext"):
        a, b = s.select(args.a), s.select(args.b)
        ext = s.modcat.ext_dims(a, b)
        if cmd == "hom":
            payload = {"a": str(a), "b": str(b), "hom_dim": ext[0]}
            lines = [f"dim Hom({a}, {b}) = {ext[0]}"]
        else:
            payload = {"a": str(a), "b": str(b), "ext": ext, "euler": s.modcat.euler(a.dims, b.dims)}
            lines = [f"dim Ext^{t}({a}, {b}) = {d}" for t, d in enumerate(ext)]
            lines.append(f"<{a}, {b}> = {payload['euler']}")

    elif cmd == "resolve":
        a = s.select(args.a)
        r = s.modcat.resolution(a)
        inv = r.invariants
        payload = {
            "class_id": str(a),
            "terms": [list(t.summands) for t in r.terms],
            "maps": [[m.tolist() for m in mp] for mp in r.maps],
            "syzygy_dims": [list(x) for x in inv.syzygy_classes],
            "m_odd": list(inv.m_odd), "m_even": list(inv.m_even),
            "p_odd": list(inv.p_odd), "p_even": list(inv.p_even), "tau": list(inv.tau),
        }
        lines = [f"resolution of {a}, length {r.length}"]
        lines += [f"P_{t} = sum of P{list(x.summands)}" for t, x in enumerate(r.terms)]
        lines += [f"{k} = {tuple(payload[k])}" for k in ("m_odd", "m_even", "p_odd", "p_even", "tau")]

    elif cmd == "hall":
        a, b = s.select(args.a), s.select(args.b)
        x = s.hall.product(s.hall.basis(a), s.hall.basis(b), twisted=not args.untwisted)
        payload = x.to_json()
        lines = _hall_text(x)

    elif cmd == "e":
        a = s.select(args.a)
        x = s.br.f_element(a) if args.star else s.br.e_element(a)
        payload, lines = x.to_json(s.cc), _bridgeland_text(x, s)

    elif cmd == "dh2":
        a, b = s.select(args.a), s.select(args.b)
        el = s.br.f_element if args.star else s.br.e_element
        x = s.br.product(el(a), el(b))
        payload, lines = x.to_json(s.cc), _bridgeland_text(x, s)

    elif cmd == "phi-check":
        if args.pair:
            if len(args.pair) != 2:
                raise ValueError("phi-check takes two classes or none")
            pairs = [(s.select(args.pair[0]), s.select(args.pair[1]))]
        else:
            pairs = s.in_bound_pairs()
        rows, lines = [], []
        for a, b in pairs:
            rep = compare_products(s.br, a, b)
            rows.append({"a": str(a), "b": str(b), "equal": rep.equal, "ext_high": rep.ext_high,
                         "consistent": rep.consistent})
            lines.append(f"{a} * {b}: {'equal' if rep.equal else 'different'}, Ext^>=3 = {rep.ext_high}"
                         + ("" if rep.consistent else "  INCONSISTENT"))
            failed |= not rep.consistent
        payload = rows

    elif cmd == "psi-check":
        if args.a:
            a = s.select(args.a)
            ok = {st: s.br.psi(s.br.f_element(a) if st else s.br.e_element(a), starred=st) == s.hall.basis(a)
                  for st in (False, True)}
            payload = {"class_id": str(a), "psi": ok[False], "psi_star": ok[True]}
            lines = [f"psi(E_{a}) = [{a}]: {ok[False]}", f"psi*(F_{a}) = [{a}]: {ok[True]}"]
            failed = not all(ok.values())
        else:
            r = check_psi_inverse(s)
            payload = {"passed": r.passed, "checks": r.count, "messages": r.lines}
            lines = [r.summary()] + r.lines
            failed = not r.passed

    elif cmd == "serre":
        i, j = args.i, args.j
        if not (1 <= i <= alg.n and 1 <= j <= alg.n) or i == j:
            raise ValueError("serre needs two different vertices")
        big_n = serre_exponent(s.modcat, i, j)
        h = serre_sum(s.hall, i, j, args.form)
        d = s.br.serre_sum(i, j, args.form)
        asserted = serre_asserted(s, i, j) and args.form == "divided"
        payload = {"i": i, "j": j, "N": big_n, "form": args.form, "hall_zero": h.is_zero(),
                   "dh2_zero": d.is_zero(), "asserted": asserted, "hall": h.to_json(), "dh2": d.to_json(s.cc)}
        lines = [f"N = {big_n}, form {args.form}", f"Hall sum zero: {h.is_zero()}",
                 f"DH2 sum zero: {d.is_zero()}"]
        if not asserted:
            lines.append("(reported only)")
        failed = asserted and not (h.is_zero() and d.is_zero())
        if failed:
            lines += ["Hall sum:"] + _hall_text(h) + ["DH2 sum:"] + _bridgeland_text(d, s)

    elif cmd == "counts":
        a, b = s.select(args.a), s.select(args.b)
        rep = check_counts(s.br, a, b)
        payload = rep.to_json()
        lines = [f"{k} = {v}" for k, v in payload.items() if k not in ("checks", "passed")]
        lines += [f"{k}: {'ok' if v else 'FAIL'}" for k, v in rep.checks.items()]
        failed = not rep.passed

    elif cmd == "thm37":
        a, b = s.select(args.a), s.select(args.b)
        rep = compare_products(s.br, a, b)
        payload = rep.to_json(s.cc)
        lines = [f"phi([{a}]*[{b}]) {'=' if rep.equal else '!='} E_{a} * E_{b}",
                 f"Ext = {rep.ext}, Ext^>=3 = {rep.ext_high}, w0 = {rep.w0}",
                 f"t0 = {rep.t0} (non-symmetric reading {rep.t0_nonsymmetric}), t1 = {rep.t1}",
                 f"consistent with the Ext^>=3 criterion: {rep.consistent}"]
        if not rep.equal or not rep.consistent:
            lines += ["lhs:"] + _bridgeland_text(rep.lhs, s) + ["rhs:"] + _bridgeland_text(rep.rhs, s)
        failed = not rep.consistent

    else:  # verify-all
        results = verify_all(s)
        payload = [{"suite": name, "name": r.name, "passed": r.passed, "checks": r.count, "messages": r.lines}
                   for (name, _), r in zip(SUITE, results)]
        lines = render(results, f"verify-all on {alg.name or args.algebra} (q = {alg.q}, bound {bound})"
                       ).rstrip("\n").split("\n")
        failed = not all(r.passed for r in results)

    _emit(payload, lines, args.json, out)
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args, sys.stdout)
    except (ValueError, KeyError, OSError, CapExceeded, GlobalDimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
