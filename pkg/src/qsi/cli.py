"""Command-line front end.

Exit status: 0 on success, 1 on input errors, 2 when a verification fails
(for example a span inequality or a broken identity).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import invariants as inv
from . import repthy, spanning
from .io import (ParseError, load_json, map_from_json, map_to_json, parse_degree, parse_dimvector,
                 parse_path_expr, parse_poly, point_from_json, render_dimvector, render_poly,
                 rep_from_json, rep_to_json)
from .poly import AmbientError, RepPoint, a_degree_component, evaluate, ring_of
from .quiver import QuiverError, canonical_rotation, validate_quiver
from .search import Bounds


class VerificationFailure(Exception):
    pass


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}

    def add(self, line: str = ""):
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _quiver(args):
    return validate_quiver(load_json(args.quiver))


def _dims(text, quiver):
    return parse_dimvector(text, quiver)


def _point(path, quiver, alpha):
    if path == "origin":
        return RepPoint.origin(quiver, alpha)
    return point_from_json(load_json(path), quiver, alpha)


def _bounds(args) -> Bounds:
    coeffs = tuple(int(c) for c in args.coeffs.split(","))
    return Bounds(max_len=args.max_len, max_mult=args.max_mult, coeffs=coeffs, limit=args.limit,
                  per_config=args.per_config, trace_degree=getattr(args, "trace_degree", 0))


def _weight(w: dict) -> str:
    return ",".join(f"{v}:{n}" for v, n in w.items())


# ---------------------------------------------------------------- subcommands

def cmd_det(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    phi = map_from_json(load_json(args.map), q)
    p = inv.det_semiinvariant(q, alpha, phi)
    w = inv.weight_of_map(phi)
    rep.add(f"map: {phi!r}")
    rep.add(f"P = {render_poly(p)}")
    rep.add(f"weight: {_weight(w)}")
    cert = inv.check_semiinvariance(p, w)
    rng = random.Random(args.seed)
    group_ok = True
    for _ in range(args.samples):
        g = inv.GroupElement.random(q, alpha, rng)
        pt = RepPoint.random(q, alpha, rng)
        if evaluate(p, g.act(pt)) != g.character(w) * evaluate(p, pt):
            group_ok = False
    rep.add(f"semi-invariance: {'ok' if cert else 'FAILED'}; group check ({args.samples} samples): "
            f"{'ok' if group_ok else 'FAILED'}")
    rep.data.update(poly=render_poly(p), weight=w, semi_invariant=bool(cert) and group_ok)
    if not (cert and group_ok):
        raise VerificationFailure("semi-invariance check failed")


def cmd_component(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    phi = map_from_json(load_json(args.map), q)
    chi = parse_degree(args.degree, q)
    comp = a_degree_component(inv.det_semiinvariant(q, alpha, phi), chi)
    rep.add(f"map: {phi!r}")
    rep.add(f"degree: {_weight(chi)}")
    rep.add(f"component = {render_poly(comp)}")
    rep.data.update(poly=render_poly(comp), degree=chi)


def cmd_trace(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    path = parse_path_expr(args.cycle, q)
    if len(path.terms) != 1 or path.terms[0][1] != 1:
        raise QuiverError("--cycle must be a single path")
    cycle = canonical_rotation(q, path.terms[0][0])
    t = inv.trace_invariant(q, alpha, path.terms[0][0])
    cert = inv.trace_from_dets(q, alpha, path.terms[0][0])
    ok = cert.verify(q, alpha)
    rep.add(f"cycle: {cycle}")
    rep.add(f"Tr = {render_poly(t)}")
    rep.add("certificate: " + " + ".join(f"({c})*P[e+{lam}*{path.terms[0][0]}]"
                                         for lam, c in zip(cert.lambdas, cert.coefficients)))
    rep.add(f"certificate identity: {'ok' if ok else 'FAILED'}")
    rep.data.update(poly=render_poly(t), lambdas=[str(x) for x in cert.lambdas],
                    coefficients=[str(c) for c in cert.coefficients], verified=ok)
    if not ok:
        raise VerificationFailure("trace certificate does not hold")


def cmd_weight_space(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    chi = parse_degree(args.degree, q)
    basis = spanning.weight_space_basis(q, alpha, chi)
    rep.add(f"alpha: {render_dimvector(alpha)}")
    rep.add(f"degree: {_weight(chi)}")
    rep.add(f"dimension: {len(basis)}")
    for n, f in enumerate(basis, 1):
        rep.add(f"  [{n}] {render_poly(f)}")
    rep.data.update(dimension=len(basis), basis=[render_poly(f) for f in basis])


def cmd_span_check(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    chi = parse_degree(args.degree, q)
    r = spanning.span_check(q, alpha, chi, args.strategy, _bounds(args), args.workers)
    rep.lines.extend(r.render().rstrip("\n").split("\n"))
    rep.data.update(json.loads(r.to_json()))
    if not r.equal:
        raise VerificationFailure(f"span check verdict {r.verdict}")


def cmd_gamma(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    target = q
    if args.degree:
        qchi = spanning.build_q_chi(q, parse_degree(args.degree, q))
        target = qchi.quiver
        rep.add("polarized arrows: " + ",".join(f"{a.id}:{a.source}->{a.target}" for a in target.arrows))
    gammas = spanning.enumerate_gamma(target, alpha)
    rep.add(f"admissible Gamma: {len(gammas)}")
    failed = 0
    items = []
    for n, g in enumerate(gammas, 1):
        pg = spanning.phi_gamma(target, alpha, g)
        sign = spanning.theorem1_sign(target, alpha, g)
        failed += sign is None
        cyc = " ".join(f"Tr({c})" for c in pg.cycles) or "-"
        verdict = "FAILED" if sign is None else f"ok sign={sign:+d}"
        rep.add(f"  [{n}] {g.describe()}")
        rep.add(f"      Phi = {pg.phi!r}; traces: {cyc}; check: {verdict}")
        if args.show_poly:
            rep.add(f"      f = {render_poly(spanning.f_gamma(target, alpha, g))}")
        items.append({"gamma": g.describe(), "phi": map_to_json(pg.phi), "cycles": [str(c) for c in pg.cycles],
                      "sign": sign})
    rep.data.update(gammas=items)
    if failed:
        raise VerificationFailure(f"{failed} Gamma failed the determinant identity")


def cmd_polarize(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    chi = parse_degree(args.degree, q)
    f = parse_poly(args.poly, ring_of(q, alpha))
    qchi = spanning.build_q_chi(q, chi)
    g = spanning.polarize(f, chi, qchi)
    rep.add("polarized arrows: " + ",".join(f"{a.id}:{a.source}->{a.target}" for a in qchi.quiver.arrows))
    rep.add(f"polarized = {render_poly(g)}")
    rep.data.update(poly=render_poly(g), arrows=[a.id for a in qchi.quiver.arrows])


def cmd_restitute(args, rep: Report):
    q = _quiver(args)
    alpha = _dims(args.alpha, q)
    chi = parse_degree(args.degree, q)
    qchi = spanning.build_q_chi(q, chi)
    f = parse_poly(args.poly, ring_of(qchi.quiver, alpha))
    g = spanning.restitute(f, qchi)
    rep.add(f"restituted = {render_poly(g)}")
    rep.data.update(poly=render_poly(g))


def _two_reps(args):
    q = _quiver(args)
    return q, rep_from_json(load_json(args.rep), q), rep_from_json(load_json(args.to), q)


def cmd_hom(args, rep: Report):
    q, r, s = _two_reps(args)
    basis = repthy.hom_basis(q, r, s)
    rep.add(f"dim Hom = {len(basis)}")
    for n, m in enumerate(basis, 1):
        rep.add(f"  [{n}] " + "; ".join(f"{v}: {[list(map(str, row)) for row in mat]}" for v, mat in m.maps))
    rep.data.update(dimension=len(basis))


def cmd_ext(args, rep: Report):
    q, r, s = _two_reps(args)
    h = repthy.hom_dim(q, r, s)
    e = repthy.ext_dim(q, r, s)
    pres = repthy.canonical_presentation(q, r)
    h2, e2 = repthy.hom_ext_via_map(pres.phi, s)
    rep.add(f"dim Hom = {h}; dim Ext = {e} (Euler defect)")
    rep.add(f"presentation route: Hom = {h2}, Ext = {e2}")
    rep.data.update(hom=h, ext=e, hom_presentation=h2, ext_presentation=e2)
    if (h, e) != (h2, e2):
        raise VerificationFailure("Hom/Ext routes disagree")


def _present_report(rep: Report, pres):
    rep.add(f"map: {pres.phi!r}")
    rep.add(f"status: {pres.status}")
    if pres.cokernel is not None:
        tag = "" if pres.exact else " (stabilized truncation)"
        rep.add(f"cokernel dims: {render_dimvector(pres.cokernel.alpha)}{tag}")
    if pres.pivots:
        rep.add("cancelled pivots: " + ", ".join(f"{v}:{c}" for v, c in pres.pivots))
    rep.data.update(map=map_to_json(pres.phi), status=str(pres.status),
                    cokernel=rep_to_json(pres.cokernel) if pres.cokernel is not None else None)


def cmd_present(args, rep: Report):
    q = _quiver(args)
    r = rep_from_json(load_json(args.rep), q)
    pres = repthy.canonical_presentation(q, r)
    if args.minimize:
        pres = repthy.minimize_presentation(pres)
    _present_report(rep, pres)


def cmd_minimize(args, rep: Report):
    q = _quiver(args)
    phi = map_from_json(load_json(args.map), q)
    small, piv = repthy.minimize_map(phi)
    pres = repthy.presentation_of(small, args.truncation)
    pres.pivots = tuple(piv)
    _present_report(rep, pres)


def cmd_prb(args, rep: Report):
    q = _quiver(args)
    r = rep_from_json(load_json(args.rep), q)
    beta = _dims(args.beta, q)
    p = repthy.p_R_beta(q, r, beta)
    rep.add(f"P_R,beta = {render_poly(p)}")
    rep.data.update(poly=render_poly(p))


def cmd_perp(args, rep: Report):
    q = _quiver(args)
    beta = _dims(args.beta, q)
    if args.map:
        phi = map_from_json(load_json(args.map), q)
        pres = None
    else:
        pres = repthy.minimize_presentation(repthy.canonical_presentation(q, rep_from_json(load_json(args.rep), q)))
        phi = pres.phi
    pt = _point(args.point, q, beta)
    try:
        res = repthy.perp_check(phi, pt, args.cross_validate, pres)
    except AssertionError as exc:
        raise VerificationFailure(str(exc)) from None
    rep.add(f"map: {phi!r}")
    rep.add(f"det R_p(phi) != 0: {'yes' if res.nonvanishing else 'no'}")
    if res.hom is not None:
        rep.add(f"direct: Hom = {res.hom}, Ext = {res.ext}; agreement: ok")
    rep.data.update(nonvanishing=res.nonvanishing, hom=res.hom, ext=res.ext)


def cmd_semistable(args, rep: Report):
    q = _quiver(args)
    beta = _dims(args.beta, q)
    pt = _point(args.point, q, beta)
    res = repthy.semistable_search(q, beta, pt, _bounds(args), args.workers, args.truncation)
    if isinstance(res, repthy.Witness):
        rep.add("WITNESS")
        rep.add(f"map: {res.phi!r}")
        rep.add(f"P = {render_poly(res.poly)}")
        rep.add(f"value at point: {res.value}")
        rep.add(f"status: {res.presentation.status}")
        cok = res.presentation.cokernel
        if cok is not None:
            tag = "" if res.presentation.exact else " (stabilized truncation)"
            rep.add(f"T = cok: dims {render_dimvector(cok.alpha)}{tag}; maps "
                    + "; ".join(f"{a}={[list(map(str, row)) for row in m]}" for a, m in cok.mats.items()))
        rep.data.update(result="witness", map=map_to_json(res.phi), poly=render_poly(res.poly),
                        value=str(res.value))
    else:
        rep.add("UNDETERMINED")
        rep.add(f"inconclusive: no witness within bounds ({res.bounds.describe()}); "
                f"{res.examined} maps examined")
        rep.data.update(result="undetermined", inconclusive=True, examined=res.examined)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsi", description="Semi-invariants of quiver representations.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", required=True, help="quiver JSON file")
    common.add_argument("--json", action="store_true", help="print a JSON mirror instead of text")
    common.add_argument("--output", help="write the report to this file")
    common.add_argument("--seed", type=int, default=0)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--max-len", type=int, default=2)
    search.add_argument("--max-mult", type=int, default=3)
    search.add_argument("--coeffs", default="-1,0,1")
    search.add_argument("--limit", type=int, default=2000)
    search.add_argument("--per-config", type=int, default=200)
    search.add_argument("--workers", type=int, default=None, help="default: QSI_THREADS or all cores")

    def add(name, fn, *parents, help=None):
        p = sub.add_parser(name, parents=[common, *parents], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("det", cmd_det, help="P_{phi,alpha} and its weight")
    p.add_argument("--alpha", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--samples", type=int, default=5)
    p = add("component", cmd_component, help="A-degree component of P_{phi,alpha}")
    p.add_argument("--alpha", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--degree", required=True)
    p = add("trace", cmd_trace, help="trace invariant and its determinant certificate")
    p.add_argument("--alpha", required=True)
    p.add_argument("--cycle", required=True)
    p = add("weight-space", cmd_weight_space, help="oracle basis of a weight space")
    p.add_argument("--alpha", required=True)
    p.add_argument("--degree", required=True)
    p = add("span-check", cmd_span_check, search, help="compare generated span with the oracle")
    p.add_argument("--alpha", required=True)
    p.add_argument("--degree", required=True)
    p.add_argument("--strategy", choices=["A", "B"], default="A")
    p.add_argument("--trace-degree", type=int, default=0)
    p = add("gamma", cmd_gamma, help="enumerate Gamma data and check the determinant identity")
    p.add_argument("--alpha", required=True)
    p.add_argument("--degree", help="enumerate on the polarized quiver for this degree")
    p.add_argument("--show-poly", action="store_true")
    for name, fn in (("polarize", cmd_polarize), ("restitute", cmd_restitute)):
        p = add(name, fn)
        p.add_argument("--alpha", required=True)
        p.add_argument("--degree", required=True)
        p.add_argument("--poly", required=True, help="polynomial in x[arrow,row,col]")
    for name, fn in (("hom", cmd_hom), ("ext", cmd_ext)):
        p = add(name, fn)
        p.add_argument("--rep", required=True, help="source representation JSON")
        p.add_argument("--to", required=True, help="target representation JSON")
    p = add("present", cmd_present, help="canonical presentation of a representation")
    p.add_argument("--rep", required=True)
    p.add_argument("--minimize", action="store_true")
    p = add("minimize", cmd_minimize, help="cancel scalar pivots of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--truncation", type=int, default=6)
    p = add("prb", cmd_prb, help="P_{R,beta}")
    p.add_argument("--rep", required=True)
    p.add_argument("--beta", required=True)
    p = add("perp", cmd_perp, help="determinant test for perpendicularity")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--map")
    g.add_argument("--rep")
    p.add_argument("--beta", required=True)
    p.add_argument("--point", required=True, help="point JSON file or 'origin'")
    p.add_argument("--cross-validate", action="store_true")
    p = add("semistable", cmd_semistable, search, help="search for a semistability witness")
    p.add_argument("--beta", required=True)
    p.add_argument("--point", required=True, help="point JSON file or 'origin'")
    p.add_argument("--truncation", type=int, default=6)
    return parser


def run(argv=None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    rep = Report()
    code = 0
    try:
        args.func(args, rep)
    except VerificationFailure as exc:
        rep.add(f"verification failed: {exc}")
        rep.data["verification_failure"] = str(exc)
        code = 2
    except (ParseError, QuiverError, AmbientError, ValueError, KeyError, OSError) as exc:
        return 1, f"error: {exc}\n"
    out = json.dumps(rep.data, indent=2, sort_keys=True, default=str) + "\n" if args.json else rep.text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
        out = ""
    return code, out


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stderr if code == 1 else sys.stdout
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
