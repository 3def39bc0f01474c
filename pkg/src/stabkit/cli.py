"""Command line front end.

Exit codes: 0 success, 1 mathematical violation or negative verdict,
2 invalid input.  All data outputs are byte-deterministic; metadata goes
into '#' comment lines.  STABKIT_BOUND overrides the default enumeration
bounds.
"""

from __future__ import annotations

import argparse
import ast
import json
import os
import re
import sys
from fractions import Fraction

from .curve import (
    CurveCharge,
    CurveClass,
    NotInOrbit,
    gl_orbit_decompose,
    hn_polygon,
    phase_order_check,
)
from .exact import ExactnessError, frac_str
from .gl import GLTildeElement, act_on_charge, commute_check, compose
from .heart import (
    HeartCharge,
    deformation_test,
    hn_filtration,
    hom_principles_check,
    is_semistable,
    jh_filtration,
    local_finiteness_probe,
    slicing_hom_vanishing,
    tilt_heart_check,
)
from .k3 import (
    AffinePath,
    GuardViolation,
    K3CentralCharge,
    extract_omega_beta,
    heart_image_check,
    normalize_to_exp_form,
    spherical_guard,
    wall_scan,
)
from .lattice import (
    ComplexMukaiVector,
    DeltaBox,
    InputError,
    MukaiVector,
    NSLattice,
    load_lattice,
    matrix_to_images,
    reflection_matrix,
    exp_action_matrix,
    basis_vectors,
)
from .quiver import Quiver, QuiverRep, ResourceBound, load_quiver_config
from . import report


def default_bound(fallback: int = 4) -> int:
    env = os.environ.get("STABKIT_BOUND")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"STABKIT_BOUND must be an integer, got {env!r}")
    return fallback


# ---------------------------------------------------------------------------
# small parsers


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r} ({exc})")


def parse_range(text: str) -> tuple[Fraction, Fraction]:
    if ".." in text:
        a, b = text.split("..", 1)
        return parse_rational(a), parse_rational(b)
    v = parse_rational(text)
    return v, v


_TERM_SPLIT = re.compile(r"(?=[+-])")


def _split_terms(expr: str) -> list[str]:
    out = []
    depth = 0
    cur = ""
    for ch in expr:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip():
            out.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_path_expr(expr: str, rank: int, variables=("t", "u")) -> dict:
    """Parse an affine vector expression like 't*h', 'e1 + t*e2', or
    '1/2*[1,0] - u*h' into {None: const, 't': lin_t, 'u': lin_u}."""
    expr = expr.strip()
    zero = tuple(Fraction(0) for _ in range(rank))
    parts = {None: zero, **{v: zero for v in variables}}
    if expr in ("0", ""):
        return parts
    for term in _split_terms(expr):
        term = term.replace(" ", "")
        sign = Fraction(1)
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        # factor split at '*' outside brackets
        factors = []
        depth = 0
        cur = ""
        for ch in term:
            if ch == "[":
                depth += 1
            if ch == "]":
                depth -= 1
            if ch == "*" and depth == 0:
                factors.append(cur)
                cur = ""
            else:
                cur += ch
        if cur:
            factors.append(cur)
        coef = sign
        var = None
        basis = None
        for f in factors:
            if f in variables:
                if var is not None:
                    raise InputError(f"term {term!r} is not affine")
                var = f
            elif f == "h":
                if rank != 1 and basis is not None:
                    raise InputError("h is shorthand for e1")
                b = [Fraction(0)] * rank
                b[0] = Fraction(1)
                basis = tuple(b)
            elif re.fullmatch(r"e\d+", f):
                k = int(f[1:])
                if not 1 <= k <= rank:
                    raise InputError(f"basis vector {f} out of range")
                b = [Fraction(0)] * rank
                b[k - 1] = Fraction(1)
                basis = tuple(b)
            elif f.startswith("["):
                vals = f[1:-1].split(",")
                if len(vals) != rank:
                    raise InputError(f"vector {f} has wrong length")
                basis = tuple(parse_rational(x) for x in vals)
            else:
                coef *= parse_rational(f.strip("()"))
        if basis is None:
            raise InputError(f"term {term!r} has no basis vector")
        scaled = tuple(coef * x for x in basis)
        parts[var] = tuple(a + b for a, b in zip(parts[var], scaled))
    return parts


def parse_matrix2(text: str):
    rows = [r for r in text.split(";") if r.strip()]
    return tuple(tuple(parse_rational(x) for x in row.split(",")) for row in rows)


def parse_mukai_vector(text: str, rank: int) -> MukaiVector:
    vals = [parse_rational(x) for x in text.split(",")]
    if len(vals) != rank + 2:
        raise InputError(f"expected {rank + 2} coordinates, got {len(vals)}")
    return MukaiVector.from_coords(tuple(vals))


def parse_rep(spec: str, Q: Quiver) -> QuiverRep:
    fields = {}
    for part in spec.split(";"):
        if not part.strip():
            continue
        key, val = part.split("=", 1)
        fields[key.strip()] = ast.literal_eval(val.strip())
    if "dims" not in fields:
        raise InputError("rep spec needs dims=[...]")
    dims = tuple(int(x) for x in fields["dims"])
    mats = fields.get("f", [])
    if len(Q.arrows) == 1 and mats and not (
        mats and isinstance(mats[0], list) and mats[0] and isinstance(mats[0][0], list)
    ):
        mats = [mats]
    if len(mats) != len(Q.arrows):
        raise InputError(
            f"need {len(Q.arrows)} matrices (got {len(mats)}); "
            "for one arrow, f=[[...]] is the matrix itself"
        )
    return QuiverRep(dims, tuple(tuple(tuple(r) for r in m) for m in mats), Q)


def parse_torsion_predicate(spec: str):
    spec = spec.strip()
    if spec == "all":
        return lambda E: True
    if spec == "none":
        return lambda E: E.is_zero()
    m = re.fullmatch(r"d(\d+)=0", spec)
    if m:
        idx = int(m.group(1))
        return lambda E: E.dims[idx] == 0
    raise InputError(
        f"unknown torsion class {spec!r}: use 'all', 'none' or 'd<i>=0'"
    )


def parse_iso(spec: str, lat: NSLattice):
    if spec == "identity":
        return basis_vectors(lat)
    if spec == "minus":
        return [-e for e in basis_vectors(lat)]
    if spec.startswith("reflection:"):
        d = parse_mukai_vector(spec.split(":", 1)[1], lat.rank)
        return matrix_to_images(reflection_matrix(d, lat), lat)
    if spec.startswith("tensor:"):
        vals = [parse_rational(x) for x in spec.split(":", 1)[1].split(",")]
        return matrix_to_images(exp_action_matrix(vals, lat), lat)
    raise InputError(
        f"unknown isometry {spec!r}: use identity, minus, reflection:r,l..,s "
        "or tensor:b1,..,bk"
    )


def parse_bound_pair(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _write(path, content: str):
    if path == "-" or path is None:
        sys.stdout.write(content)
    else:
        with open(path, "w") as fh:
            fh.write(content)


# ---------------------------------------------------------------------------
# k3 commands


def cmd_k3_scan(args) -> int:
    lat = load_lattice(args.lattice)
    b_parts = parse_path_expr(args.B, lat.rank)
    w_parts = parse_path_expr(args.omega, lat.rank)
    t0, t1 = parse_range(args.t)
    bound = args.bound if args.bound is not None else default_bound()
    box = DeltaBox.cube(bound)
    note = f"stabkit k3 scan B=({args.B}) omega=({args.omega}) t={args.t} bound={bound}"
    if args.u is not None:
        u0, u1 = parse_range(args.u)
        if any(x != 0 for x in w_parts["u"]) or any(x != 0 for x in b_parts["t"]):
            raise InputError("two-parameter plots need B affine in u and omega in t")
        B_of_u = AffinePath(b_parts[None], b_parts["u"])
        omega_of_t = AffinePath(w_parts[None], w_parts["t"])
        if args.svg:
            svg = report.chamber_plot_svg(
                lat, B_of_u, omega_of_t, u0, u1, t0, t1, box, args.k_bound
            )
            _write(args.svg, svg)
        else:
            raise InputError("a two-parameter scan is only emitted as SVG")
        return 0
    if any(x != 0 for x in b_parts["u"]) or any(x != 0 for x in w_parts["u"]):
        raise InputError("u appears in the paths but no --u range was given")
    B_path = AffinePath(b_parts[None], b_parts["t"])
    omega_path = AffinePath(w_parts[None], w_parts["t"])
    res = wall_scan(lat, B_path, omega_path, t0, t1, box, args.k_bound)
    _write(args.output, report.walls_csv(res, lat.rank, note))
    if args.json:
        _write(args.json, report.walls_json(res, note))
    if args.svg:
        _write(args.svg, report.scan_ticks_svg(res, t0, t1))
    return 0


def _charge_at(args, lat) -> K3CentralCharge:
    b_parts = parse_path_expr(args.B, lat.rank, ("t",))
    w_parts = parse_path_expr(args.omega, lat.rank, ("t",))
    t = parse_rational(args.t) if args.t is not None else Fraction(0)
    B = tuple(c + t * l for c, l in zip(b_parts[None], b_parts["t"]))
    omega = tuple(c + t * l for c, l in zip(w_parts[None], w_parts["t"]))
    return K3CentralCharge(lat, B, omega)


def cmd_k3_guard(args) -> int:
    lat = load_lattice(args.lattice)
    zc = _charge_at(args, lat)
    bound = args.bound if args.bound is not None else default_bound()
    res = spherical_guard(zc, DeltaBox.cube(bound))
    if res.ok:
        print(f"ok (truncated={str(res.truncated).lower()})")
        return 0
    print(f"violation: delta={res.witness} Z={res.witness_value}")
    return 1


def cmd_k3_heart_check(args) -> int:
    lat = load_lattice(args.lattice)
    zc = _charge_at(args, lat)
    bound = args.bound if args.bound is not None else default_bound()
    try:
        rep = heart_image_check(zc, DeltaBox.cube(bound))
    except GuardViolation as exc:
        print(f"guard violation: {exc}")
        return 1
    if args.json:
        _write(args.json, report.heart_image_json(rep))
    print(f"checked {rep.checked} classes, violations: {len(rep.violations)}")
    return 0 if rep.ok else 1


def cmd_k3_normalize(args) -> int:
    lat = load_lattice(args.lattice)
    om = ComplexMukaiVector(
        parse_mukai_vector(args.re, lat.rank), parse_mukai_vector(args.im, lat.rank)
    )
    try:
        nf = normalize_to_exp_form(om, lat)
    except InputError as exc:
        print(f"not normalizable: {exc}")
        return 1
    print("M =", [[str(x) for x in row] for row in nf.matrix])
    print("B =", [str(x) for x in nf.B])
    print("omega =", [str(x) for x in nf.omega])
    if args.slope_form:
        form = extract_omega_beta(om, lat)
        print(f"scale = {frac_str(form.scale)}  beta = {frac_str(form.beta)}")
    return 0


# ---------------------------------------------------------------------------
# quiver commands


def cmd_quiver_hn(args) -> int:
    Q, zc = load_quiver_config(args.config)
    if zc is None:
        raise InputError("quiver config has no charge")
    E = parse_rep(args.rep, Q)
    hn = hn_filtration(E, zc, Q)
    sys.stdout.write(report.hn_text(hn, zc))
    return 0


def cmd_quiver_jh(args) -> int:
    Q, zc = load_quiver_config(args.config)
    if zc is None:
        raise InputError("quiver config has no charge")
    E = parse_rep(args.rep, Q)
    verdict = is_semistable(E, zc, Q)
    if not verdict.is_semistable():
        print(f"unstable: witness dims {verdict.witness_dims}")
        return 1
    factors = jh_filtration(E, zc, Q)
    for i, cls in enumerate(factors):
        print(f"stable factor {i + 1}: class {cls}")
    return 0


def cmd_quiver_check(args) -> int:
    Q, zc = load_quiver_config(args.config)
    if zc is None:
        raise InputError("quiver config has no charge")
    bound = parse_bound_pair(args.bound) if args.bound else (2,) * Q.n
    if args.suite == "gp":
        rep = hom_principles_check(zc, Q, bound)
        data = {"suite": "gp", "ok": rep.ok, "checked": rep.checked_pairs,
                "failures": [list(map(str, f)) for f in rep.failures]}
    elif args.suite == "slicing":
        checked, failures = slicing_hom_vanishing(zc, Q, bound)
        data = {"suite": "slicing", "ok": not failures, "checked": checked,
                "failures": [list(map(str, f)) for f in failures]}
    elif args.suite == "local-finiteness":
        eta = parse_rational(args.eta) if args.eta else Fraction(1, 2)
        rep = local_finiteness_probe(zc, Q, eta, bound)
        data = {
            "suite": "local-finiteness",
            "ok": rep.ok,
            "rational_charge": rep.rational_charge,
            "chain_bound": rep.chain_bound,
            "slices": [list(s) for s in rep.slices],
        }
    else:
        raise InputError(f"unknown suite {args.suite!r}")
    out = json.dumps(data, indent=2, sort_keys=True) + "\n"
    _write(args.json, out) if args.json else sys.stdout.write(out)
    return 0 if data["ok"] else 1


def cmd_quiver_deform(args) -> int:
    Q, zc = load_quiver_config(args.config)
    if zc is None:
        raise InputError("quiver config has no charge")
    bound = parse_bound_pair(args.bound) if args.bound else (2,) * Q.n
    eps = parse_rational(args.eps)
    if args.rotate is not None:
        wc = zc.rotated(parse_rational(args.rotate))
    elif args.perturb is not None:
        from .exact import RatComplex

        deltas = {}
        for part in args.perturb.split(";"):
            idx, val = part.split(":")
            re_s, im_s = val.split(",")
            deltas[int(idx)] = RatComplex(parse_rational(re_s), parse_rational(im_s))
        new_z = [
            z + deltas.get(i, RatComplex(0, 0)) for i, z in enumerate(zc.z)
        ]
        wc = HeartCharge(new_z, zc.rot)
    else:
        raise InputError("give --rotate Q or --perturb 'i:re,im;...'")
    rep = deformation_test(zc, wc, eps, Q, bound)
    if not rep.applicable:
        print(f"not applicable: {rep.note}")
        return 0
    print(
        f"applicable: distance {float(rep.distance):.6f} "
        f"{'<' if rep.ok else '>='} eps {frac_str(eps)}"
    )
    return 0 if rep.ok else 1


def cmd_quiver_tilt(args) -> int:
    Q, _ = load_quiver_config(args.config)
    bound = parse_bound_pair(args.bound) if args.bound else (2,) * Q.n
    pred = parse_torsion_predicate(args.torsion)
    rep = tilt_heart_check(pred, Q, bound)
    if rep.ok:
        tag = {"identity": " (tilt = original heart)", "shift": " (tilt = shifted heart)"}.get(
            rep.degenerate, ""
        )
        print(f"ok{tag}")
        return 0
    print(f"failures: {rep.failures}")
    return 1


# ---------------------------------------------------------------------------
# curve commands


def cmd_curve_decompose(args) -> int:
    zc = CurveCharge(parse_matrix2(args.m))
    try:
        M = gl_orbit_decompose(zc)
    except NotInOrbit as exc:
        print(f"not in orbit: {exc}")
        return 1
    print("M =", [[frac_str(x) for x in row] for row in M])
    return 0


def cmd_curve_polygon(args) -> int:
    zc = CurveCharge(parse_matrix2(args.m)) if args.m else CurveCharge.standard()
    parts = [CurveClass.parse(p) for p in args.parts.split()]
    poly = hn_polygon(parts, zc)
    _write(args.output, report.polygon_csv(poly, f"stabkit curve polygon {args.parts}"))
    return 0


def cmd_curve_order_check(args) -> int:
    zc = CurveCharge(parse_matrix2(args.m)) if args.m else CurveCharge.standard()
    d0, d1 = parse_range(args.d)
    ok = phase_order_check(zc, range(int(d0), int(d1) + 1))
    print("ok" if ok else "violated")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# group commands


def _element_from(arg: str) -> GLTildeElement:
    if arg.strip().startswith("{"):
        return GLTildeElement.from_json_dict(json.loads(arg))
    with open(arg) as fh:
        return GLTildeElement.from_json_dict(json.load(fh))


def cmd_group_compose(args) -> int:
    g = _element_from(args.g)
    h = _element_from(args.h)
    print(json.dumps(compose(g, h).to_json_dict(), sort_keys=True))
    return 0


def cmd_group_act(args) -> int:
    g = _element_from(args.g)
    if args.curve_m:
        out = act_on_charge(g, CurveCharge(parse_matrix2(args.curve_m)))
        print("m =", [[frac_str(x) for x in row] for row in out.m])
        return 0
    lat = load_lattice(args.lattice)
    om = ComplexMukaiVector(
        parse_mukai_vector(args.re, lat.rank), parse_mukai_vector(args.im, lat.rank)
    )
    out = act_on_charge(g, om)
    print("re =", out.re, " im =", out.im)
    return 0


def cmd_group_commute(args) -> int:
    lat = load_lattice(args.lattice)
    images = parse_iso(args.iso, lat)
    g = _element_from(args.g)
    om = ComplexMukaiVector(
        parse_mukai_vector(args.re, lat.rank), parse_mukai_vector(args.im, lat.rank)
    )
    ok = commute_check(images, g, om, lat)
    print("commute" if ok else "do not commute")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabkit", description=__doc__)
    sub = ap.add_subparsers(dest="group", required=True)

    k3 = sub.add_parser("k3", help="Mukai-lattice stability checks and scans")
    k3s = k3.add_subparsers(dest="command", required=True)

    scan = k3s.add_parser("scan", help="wall scan along a (B, omega) path")
    scan.add_argument("--lattice", required=True)
    scan.add_argument("--B", required=True)
    scan.add_argument("--omega", required=True)
    scan.add_argument("--t", required=True, help="range a/b..c/d")
    scan.add_argument("--u", help="second parameter range (2-parameter plot)")
    scan.add_argument("--bound", type=int)
    scan.add_argument("--k-bound", type=int, default=8)
    scan.add_argument("-o", "--output", default="-")
    scan.add_argument("--json")
    scan.add_argument("--svg")
    scan.set_defaults(func=cmd_k3_scan)

    guard = k3s.add_parser("guard", help="spherical-class positivity guard")
    for a in ("--lattice", "--B", "--omega"):
        guard.add_argument(a, required=True)
    guard.add_argument("--t")
    guard.add_argument("--bound", type=int)
    guard.set_defaults(func=cmd_k3_guard)

    hc = k3s.add_parser("heart-check", help="positivity sweep over a class box")
    for a in ("--lattice", "--B", "--omega"):
        hc.add_argument(a, required=True)
    hc.add_argument("--t")
    hc.add_argument("--bound", type=int)
    hc.add_argument("--json")
    hc.set_defaults(func=cmd_k3_heart_check)

    nz = k3s.add_parser("normalize", help="bring a charge vector to exp form")
    nz.add_argument("--lattice", required=True)
    nz.add_argument("--re", required=True, help="r,l1,..,s")
    nz.add_argument("--im", required=True)
    nz.add_argument("--slope-form", action="store_true")
    nz.set_defaults(func=cmd_k3_normalize)

    qv = sub.add_parser("quiver", help="finite-length heart computations")
    qvs = qv.add_subparsers(dest="command", required=True)

    hn = qvs.add_parser("hn", help="Harder-Narasimhan filtration of a rep")
    hn.add_argument("--config", required=True)
    hn.add_argument("--rep", required=True, help='dims=[..];f=[[..]]')
    hn.set_defaults(func=cmd_quiver_hn)

    jh = qvs.add_parser("jh", help="stable factors of a semistable rep")
    jh.add_argument("--config", required=True)
    jh.add_argument("--rep", required=True)
    jh.set_defaults(func=cmd_quiver_jh)

    check = qvs.add_parser("check", help="exhaustive property sweeps")
    check.add_argument("--config", required=True)
    check.add_argument("--suite", required=True, choices=["gp", "slicing", "local-finiteness"])
    check.add_argument("--bound", help="per-vertex dims, e.g. 2,2")
    check.add_argument("--eta")
    check.add_argument("--json")
    check.set_defaults(func=cmd_quiver_check)

    deform = qvs.add_parser("deform", help="norm/distance deformation check")
    deform.add_argument("--config", required=True)
    deform.add_argument("--eps", required=True)
    deform.add_argument("--bound")
    deform.add_argument("--rotate")
    deform.add_argument("--perturb", help="'i:re,im;j:re,im'")
    deform.set_defaults(func=cmd_quiver_deform)

    tilt = qvs.add_parser("tilt", help="torsion pair and tilt verification")
    tilt.add_argument("--config", required=True)
    tilt.add_argument("--torsion", required=True, help="all | none | d<i>=0")
    tilt.add_argument("--bound")
    tilt.set_defaults(func=cmd_quiver_tilt)

    cv = sub.add_parser("curve", help="rank/degree lattice stability")
    cvs = cv.add_subparsers(dest="command", required=True)

    dec = cvs.add_parser("decompose", help="normalize a charge to -deg + i rk")
    dec.add_argument("--m", required=True, help="rows 'a,b;c,d'")
    dec.set_defaults(func=cmd_curve_decompose)

    poly = cvs.add_parser("polygon", help="HN polygon of class list")
    poly.add_argument("--parts", required=True, help="'r,d r,d ...'")
    poly.add_argument("--m")
    poly.add_argument("-o", "--output", default="-")
    poly.set_defaults(func=cmd_curve_polygon)

    oc = cvs.add_parser("order-check", help="phase window check for line classes")
    oc.add_argument("--m")
    oc.add_argument("--d", required=True, help="range like -10..10")
    oc.set_defaults(func=cmd_curve_order_check)

    gp = sub.add_parser("group", help="universal-cover and isometry actions")
    gps = gp.add_subparsers(dest="command", required=True)

    comp = gps.add_parser("compose")
    comp.add_argument("--g", required=True, help="JSON literal or file")
    comp.add_argument("--h", required=True)
    comp.set_defaults(func=cmd_group_compose)

    act = gps.add_parser("act")
    act.add_argument("--g", required=True)
    act.add_argument("--lattice")
    act.add_argument("--re")
    act.add_argument("--im")
    act.add_argument("--curve-m")
    act.set_defaults(func=cmd_group_act)

    comm = gps.add_parser("commute")
    comm.add_argument("--lattice", required=True)
    comm.add_argument("--iso", required=True)
    comm.add_argument("--g", required=True)
    comm.add_argument("--re", required=True)
    comm.add_argument("--im", required=True)
    comm.set_defaults(func=cmd_group_commute)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ResourceBound, ExactnessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, SyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
