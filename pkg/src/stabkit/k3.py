"""Stability data on K3 numerical classes.

The central charge is Z(v) = <exp(B + i omega), v> for rational classes
B, omega in NS(X) with omega^2 > 0.  This module provides the exact
positivity/discreteness checks for such charges, the classification of
torsion sides for slope-stable classes, the normalization of a general
charge vector to exponential form, and exact wall scans along affine
paths in (B, omega).

Wall parameters are solved from rational quadratics; irrational roots
are kept exactly as quadratic surds, never floated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import PhaseValue, Quad, RatComplex, as_fraction, rational_sqrt
from .lattice import (
    ComplexMukaiVector,
    DeltaBox,
    InputError,
    MukaiVector,
    NSLattice,
    enumerate_delta,
    exp_class,
    mukai_pairing,
    mukai_square,
    point_class,
    positive_plane_check,
    vadd,
    vec,
    vscale,
    vzero,
)


class GuardViolation(InputError):
    """A spherical class with Z in R_{<=0} blocks the requested operation."""


class UndefinedPhase(InputError):
    """Phase requested for 0 or for a value outside H-bar."""


# ---------------------------------------------------------------------------
# the charge


@dataclass(frozen=True)
class K3CentralCharge:
    """Z = <exp(B + i omega), .> with rational B, omega and omega^2 > 0."""

    lat: NSLattice
    B: tuple
    omega: tuple
    Om: ComplexMukaiVector = field(compare=False)

    def __init__(self, lat: NSLattice, B, omega):
        B = tuple(as_fraction(x) for x in B)
        omega = tuple(as_fraction(x) for x in omega)
        if lat.ns_dot(omega, omega) <= 0:
            raise InputError("omega must have positive square")
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "Om", exp_class(B, omega, lat))
        pt = central_charge(self, point_class(lat))
        assert pt.re == -1 and pt.im == 0, "point class must map to -1"

    @property
    def beta(self) -> Fraction:
        return as_fraction(self.lat.ns_dot(self.B, self.omega))


def central_charge(zc: K3CentralCharge, v: MukaiVector) -> RatComplex:
    """Z(v), exactly: Re = B.l - s - r (B^2 - omega^2)/2, Im = omega.l - r (B.omega)."""
    lat = zc.lat
    b2 = lat.ns_dot(zc.B, zc.B)
    w2 = lat.ns_dot(zc.omega, zc.omega)
    re = lat.ns_dot(zc.B, v.l) - v.s - v.r * Fraction(b2 - w2, 1) / 2
    im = lat.ns_dot(zc.omega, v.l) - v.r * lat.ns_dot(zc.B, zc.omega)
    return RatComplex(re, im)


def phase(z: RatComplex) -> PhaseValue:
    """Exact phase token in (0, 1] of z in H-bar; errors outside."""
    if z.is_zero():
        raise UndefinedPhase("zero has no phase")
    if not z.in_upper_closure():
        raise UndefinedPhase(
            f"{z} lies outside H-bar; shift the object before asking for a phase"
        )
    return PhaseValue.of_upper(z)


# ---------------------------------------------------------------------------
# guards and desk checks


@dataclass(frozen=True)
class GuardResult:
    ok: bool
    witness: Optional[MukaiVector] = None
    witness_value: Optional[RatComplex] = None
    truncated: bool = True

    def __bool__(self) -> bool:
        return self.ok


def _guard_candidates(zc: K3CentralCharge, bounds: DeltaBox):
    """Positive-rank (-2)-classes with Im Z = 0, from the exact reduction:
    omega.l = r beta determines the admissible l per rank r, and the
    square condition then solves s (which is therefore not box-limited)."""
    lat = zc.lat
    beta = zc.beta
    import itertools

    l_range = range(-bounds.l_max, bounds.l_max + 1)
    for r in range(1, bounds.r_max + 1):
        for l in itertools.product(l_range, repeat=lat.rank):
            if lat.ns_dot(zc.omega, l) != r * beta:
                continue
            l2 = lat.ns_dot(l, l)
            if (l2 + 2) % (2 * r) != 0:
                continue
            yield MukaiVector(r, l, (l2 + 2) // (2 * r))


def spherical_guard(zc: K3CentralCharge, bounds: DeltaBox) -> GuardResult:
    """Search for a positive-rank spherical class with Z in R_{<=0}.

    The reduction makes the scan complete for rho = 1 with beta = 0
    (the Im-constraint then forces l = 0 and rs = 1); otherwise the
    'ok' answer is box-truncated.
    """
    complete = zc.lat.rank == 1 and zc.beta == 0 and bounds.r_max >= 1
    for delta in _guard_candidates(zc, bounds):
        z = central_charge(zc, delta)
        assert z.im == 0
        if z.re <= 0:
            return GuardResult(False, witness=delta, witness_value=z, truncated=False)
    return GuardResult(True, truncated=not complete)


def discreteness_check(zc: K3CentralCharge, m: int, samples: int = 64) -> bool:
    """True iff B, omega lie in (1/m) NS; then m^2 Z(v) has entries in Z[i],
    which is spot-verified on a random sample of integral classes."""
    if m <= 0:
        raise InputError("m must be positive")
    integral = all((m * x).denominator == 1 for x in zc.B) and all(
        (m * x).denominator == 1 for x in zc.omega
    )
    if not integral:
        return False
    rng = random.Random(20210 + m)
    for _ in range(samples):
        v = MukaiVector(
            rng.randint(-9, 9),
            tuple(rng.randint(-9, 9) for _ in range(zc.lat.rank)),
            rng.randint(-9, 9),
        )
        z = central_charge(zc, v).scale(m * m)
        assert z.re.denominator == 1 and z.im.denominator == 1
    return True


def realpart_identity_check(zc: K3CentralCharge, v: MukaiVector) -> bool:
    """Verify Re Z(v) = (1/2r) ((l^2 - 2rs) + r^2 omega^2 - (l - rB)^2)
    exactly, for r != 0."""
    if v.r == 0:
        raise InputError("identity requires r != 0")
    lat = zc.lat
    lhs = central_charge(zc, v).re
    l_minus_rb = tuple(as_fraction(x) - v.r * b for x, b in zip(v.l, zc.B))
    rhs = (
        mukai_square(v, lat)
        + v.r * v.r * lat.ns_dot(zc.omega, zc.omega)
        - lat.ns_dot(l_minus_rb, l_minus_rb)
    ) / Fraction(2 * v.r)
    return lhs == rhs


def torsion_side(v: MukaiVector, zc: K3CentralCharge) -> str:
    """'T' iff the slope omega.l / r exceeds beta = B.omega, else 'F'.
    Classifies a positive-rank class played by a slope-stable sheaf."""
    if v.r <= 0:
        raise InputError("torsion side is defined for positive rank")
    return "T" if zc.lat.ns_dot(zc.omega, v.l) > v.r * zc.beta else "F"


@dataclass(frozen=True)
class HeartImageReport:
    checked: int
    violations: tuple
    guard: GuardResult

    @property
    def ok(self) -> bool:
        return not self.violations


def heart_image_check(zc: K3CentralCharge, bounds: DeltaBox) -> HeartImageReport:
    """Desk-scale positivity sweep: every numerical class in the box that
    can play an object of the tilted heart must map into H-bar.

    Classes with r > 0 and v^2 >= -2 stand for slope-stable torsion-free
    sheaves: the torsion side decides whether v or the shift -v must land
    in H-bar.  Rank-zero classes split into curve-supported (Im > 0) and
    point-supported (Z in R_{<0}) branches.
    """
    guard = spherical_guard(zc, bounds)
    if not guard.ok:
        raise GuardViolation(
            f"stability function degenerates on {guard.witness} "
            f"(Z = {guard.witness_value})"
        )
    import itertools

    lat = zc.lat
    violations = []
    checked = 0
    l_range = range(-bounds.l_max, bounds.l_max + 1)
    for r in range(-bounds.r_max, bounds.r_max + 1):
        for l in itertools.product(l_range, repeat=lat.rank):
            for s in range(-bounds.s_max, bounds.s_max + 1):
                v = MukaiVector(r, l, s)
                if mukai_square(v, lat) < -2:
                    continue
                z = central_charge(zc, v)
                if r > 0:
                    checked += 1
                    side = torsion_side(v, zc)
                    val = z if side == "T" else -z
                    if not val.in_upper_closure():
                        violations.append((v, side, z))
                elif r == 0 and any(x != 0 for x in l):
                    if lat.ns_dot(zc.omega, l) > 0:
                        checked += 1
                        if not z.im > 0:
                            violations.append((v, "curve", z))
                elif r == 0 and s > 0:
                    checked += 1
                    if not (z.im == 0 and z.re < 0):
                        violations.append((v, "point", z))
    return HeartImageReport(checked, tuple(violations), guard)


# ---------------------------------------------------------------------------
# exponential-form extraction and normalization


@dataclass(frozen=True)
class OmegaBetaForm:
    """Slope data (0, omega, beta) of a point-normalized charge vector."""

    scale: Fraction
    omega: tuple
    beta: Fraction


def extract_omega_beta(Om: ComplexMukaiVector, lat: NSLattice) -> OmegaBetaForm:
    """Rescale Om so the point class maps to -1 and read the imaginary
    part as (0, omega, beta); omega must pass the positivity certificate."""
    # <Om, (0,..,0,1)> = -re.r - i*im.r
    z = RatComplex(-as_fraction(Om.re.r), -as_fraction(Om.im.r))
    if not (z.im == 0 and z.re < 0):
        raise InputError(
            f"point class maps to {z}, not R_<0: charge is not of slope shape"
        )
    scale = as_fraction(Om.re.r)
    omega = tuple(as_fraction(x) / scale for x in Om.im.l)
    beta = as_fraction(Om.im.s) / scale
    cert = lat.ample_certificate(omega)
    if not cert.certified:
        raise InputError(
            f"extracted omega = {omega} fails positivity "
            f"(square {cert.square}, ample-side {cert.ample_ref_side}, "
            f"curves {cert.curve_pairings})"
        )
    return OmegaBetaForm(scale, omega, beta)


@dataclass(frozen=True)
class ExpNormalForm:
    """M (2x2, det > 0, exact entries) with M.(re, im) = exp_class(B, omega).
    Entries are rational whenever the norming square is a perfect square,
    and quadratic surds otherwise."""

    matrix: tuple  # ((m00, m01), (m10, m11))
    B: tuple
    omega: tuple


def normalize_to_exp_form(Om: ComplexMukaiVector, lat: NSLattice) -> ExpNormalForm:
    """The unique positively-oriented change of (re, im) bringing Om to
    exponential form.

    The r-components force the new imaginary part up to scale; the new
    real part is pinned by r = 1 and orthogonality; the scale is then a
    square root fixed by <re', re'> = <im', im'>, with sign chosen so
    det > 0.
    """
    if not positive_plane_check(Om, lat):
        raise InputError("normalize_to_exp_form requires a positive plane")
    re, im = Om.re, Om.im
    r1, r2 = as_fraction(re.r), as_fraction(im.r)
    if r1 == 0 and r2 == 0:
        # impossible for a positive plane: {r = 0} meets it in a line
        raise AssertionError("positive plane orthogonal to the point class")
    c0, d0 = -r2, r1  # kernel of the r-components; scale is absorbed below
    im0 = re.scale(c0) + im.scale(d0)
    p_re_im0 = as_fraction(mukai_pairing(re, im0, lat))
    p_im_im0 = as_fraction(mukai_pairing(im, im0, lat))
    det_sys = r1 * p_im_im0 - r2 * p_re_im0
    if det_sys == 0:
        raise AssertionError("normalization system degenerated on a positive plane")
    a = p_im_im0 / det_sys
    b = -p_re_im0 / det_sys
    re_p = re.scale(a) + im.scale(b)
    re_sq = as_fraction(mukai_pairing(re_p, re_p, lat))
    im0_sq = as_fraction(mukai_pairing(im0, im0, lat))
    ratio = re_sq / im0_sq
    if ratio <= 0:
        raise InputError("normalization produced omega^2 <= 0")
    root = rational_sqrt(ratio)
    lam = Quad(root) if root is not None else Quad.sqrt_of(ratio)
    if (Quad(a * d0 - b * c0) * lam).sign() < 0:
        lam = -lam

    def tidy(x):
        if isinstance(x, Quad) and x.is_rational():
            return x.as_fraction()
        return x

    m = tuple(
        tuple(tidy(x) for x in row) for row in ((Quad(a), Quad(b)), (lam * c0, lam * d0))
    )
    B = tuple(re_p.l)  # rational: re' is a rational combination
    omega = tuple(tidy(lam * x) for x in im0.l)
    # exact verification against the canonical exponential class
    target = exp_class(B, omega, lat)
    got_re = re.scale(m[0][0]) + im.scale(m[0][1])
    got_im = re.scale(m[1][0]) + im.scale(m[1][1])
    assert all(x - y == 0 for x, y in zip(got_re.coords(), target.re.coords()))
    assert all(x - y == 0 for x, y in zip(got_im.coords(), target.im.coords()))
    return ExpNormalForm(m, B, omega)


# ---------------------------------------------------------------------------
# wall scans


TParam = Union[Fraction, Quad]


@dataclass(frozen=True)
class AffinePath:
    """t |-> const + t * lin, with rational vector coefficients."""

    const: tuple
    lin: tuple

    def __init__(self, const, lin=None):
        const = tuple(as_fraction(x) for x in const)
        lin = tuple(as_fraction(x) for x in lin) if lin is not None else vzero(len(const))
        if len(const) != len(lin):
            raise InputError("path coefficient dimensions disagree")
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "lin", lin)

    def at(self, t):
        return vadd(self.const, vscale(t, self.lin))

    @staticmethod
    def constant(v) -> "AffinePath":
        v = vec(v)
        return AffinePath(v, vzero(len(v)))


@dataclass(frozen=True)
class Wall:
    """A wall point on a scan path.

    kind 'A': a positive-rank (-2)-class degenerates (Im Z = 0, Re Z <= 0).
    kind 'C': omega hits a declared curve with integral (B.C) = k; detail
    carries (curve class, k).
    """

    t: TParam
    witness: MukaiVector
    kind: str
    detail: Optional[tuple] = None

    def t_is_rational(self) -> bool:
        return not isinstance(self.t, Quad) or self.t.is_rational()


@dataclass(frozen=True)
class WallScanResult:
    walls: tuple
    truncated: bool
    degenerate_witnesses: tuple = ()
    k_bound: Optional[int] = None
    skipped_k: tuple = ()


class _Poly2:
    """Quadratic polynomial with exact rational coefficients."""

    __slots__ = ("c0", "c1", "c2")

    def __init__(self, c0, c1, c2):
        self.c0, self.c1, self.c2 = as_fraction(c0), as_fraction(c1), as_fraction(c2)

    def __call__(self, t):
        return self.c0 + self.c1 * t + self.c2 * t * t

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0 and self.c2 == 0

    def roots(self) -> list:
        """Exact real roots, as Fractions or Quads."""
        if self.c2 == 0:
            if self.c1 == 0:
                return []
            return [-self.c0 / self.c1]
        disc = self.c1 * self.c1 - 4 * self.c2 * self.c0
        if disc < 0:
            return []
        if disc == 0:
            return [-self.c1 / (2 * self.c2)]
        r = rational_sqrt(disc)
        inv = 1 / (2 * self.c2)
        if r is not None:
            return sorted([(-self.c1 - r) * inv, (-self.c1 + r) * inv])
        sq = Quad.sqrt_of(disc)
        lo = (Quad(-self.c1) - sq) * inv
        hi = (Quad(-self.c1) + sq) * inv
        return sorted([lo, hi], key=float)


def t_compare(a: TParam, b: TParam) -> int:
    """Exact three-way comparison of wall parameters (Fraction or Quad)."""
    qa = a if isinstance(a, Quad) else Quad(a)
    qb = b if isinstance(b, Quad) else Quad(b)
    return qa._cmp(qb)


def _in_range(t, t0: Fraction, t1: Fraction) -> bool:
    if isinstance(t, Quad):
        return (t - t0).sign() >= 0 and (t - t1).sign() <= 0
    return t0 <= t <= t1


def wall_scan(
    lat: NSLattice,
    B_path: AffinePath,
    omega_path: AffinePath,
    t0,
    t1,
    bounds: DeltaBox,
    k_bound: Optional[int] = None,
) -> WallScanResult:
    """Exact wall scan over t in [t0, t1].

    Type A: for each boxed (-2)-class of positive rank, Im Z_t is an
    exact quadratic in t; its isolated roots with Re Z_t <= 0 are walls.
    If Im Z_t vanishes identically, the class stays real along the whole
    path and the walls are the boundary points Re Z_t = 0; a class with
    Z_t identically zero is reported as a degenerate witness.

    Type C: (omega_t . C) = 0 is affine in t; at its root the pairing
    against (0, C, k) vanishes iff k = (B_t . C) is an integer.

    No sampling grid is involved, so the output cannot depend on one.
    """
    t0, t1 = as_fraction(t0), as_fraction(t1)
    if t0 > t1:
        raise InputError("empty parameter range")
    if len(B_path.const) != lat.rank or len(omega_path.const) != lat.rank:
        raise InputError("path dimension disagrees with the lattice rank")
    walls: list[Wall] = []
    degenerate = []

    b0, b1 = B_path.const, B_path.lin
    w0, w1 = omega_path.const, omega_path.lin

    def dot(u, v):
        return as_fraction(lat.ns_dot(u, v))

    deltas = enumerate_delta(lat, bounds)
    for d in deltas:
        if d.r <= 0:
            continue
        r, l, s = d.r, d.l, d.s
        im_poly = _Poly2(
            dot(w0, l) - r * dot(b0, w0),
            dot(w1, l) - r * (dot(b0, w1) + dot(b1, w0)),
            -r * dot(b1, w1),
        )
        re_poly = _Poly2(
            dot(b0, l) - s - r * (dot(b0, b0) - dot(w0, w0)) / 2,
            dot(b1, l) - r * (dot(b0, b1) - dot(w0, w1)),
            -r * (dot(b1, b1) - dot(w1, w1)) / 2,
        )
        if im_poly.is_zero():
            if re_poly.is_zero():
                degenerate.append(d)
                continue
            candidates = re_poly.roots()
            for t in candidates:
                if _in_range(t, t0, t1):
                    walls.append(Wall(t, d, "A"))
        else:
            for t in im_poly.roots():
                if not _in_range(t, t0, t1):
                    continue
                val = re_poly(t)
                nonpositive = val.sign() <= 0 if isinstance(val, Quad) else val <= 0
                if nonpositive:
                    walls.append(Wall(t, d, "A"))

    skipped_k = []
    for C in lat.neg2_curves:
        lin = dot(w1, C)
        const = dot(w0, C)
        if lin == 0:
            if const == 0:
                degenerate.append(MukaiVector(0, C, 0))
            continue
        t_star = -const / lin
        if not _in_range(t_star, t0, t1):
            continue
        bc = dot(b0, C) + t_star * dot(b1, C)
        if bc.denominator != 1:
            continue  # no integral k: not a wall of the perpendicular type
        k = int(bc)
        if k_bound is not None and abs(k) > k_bound:
            skipped_k.append((t_star, tuple(C), k))
            continue
        walls.append(Wall(t_star, MukaiVector(0, C, k), "C", detail=(tuple(C), k)))

    import functools

    def wall_cmp(x: Wall, y: Wall) -> int:
        c = t_compare(x.t, y.t)
        if c:
            return c
        kx = (x.kind, x.witness.coords())
        ky = (y.kind, y.witness.coords())
        return (kx > ky) - (kx < ky)

    seen = set()
    unique = []
    for w in sorted(walls, key=functools.cmp_to_key(wall_cmp)):
        key = (repr(w.t), w.kind, w.witness.coords())
        if key not in seen:
            seen.add(key)
            unique.append(w)
    return WallScanResult(
        walls=tuple(unique),
        truncated=deltas.truncated,
        degenerate_witnesses=tuple(degenerate),
        k_bound=k_bound,
        skipped_k=tuple(skipped_k),
    )
