import math
from fractions import Fraction

import pytest

from stabkit.exact import (
    ExactnessError,
    PhaseValue,
    Quad,
    RatComplex,
    SqrtSum,
    cos_pi,
    cot_pi,
    frac_str,
    rational_sqrt,
    sin2_pi,
    squarefree_split,
    tan_pi,
)

F = Fraction


def test_frac_str():
    assert frac_str(F(3, 6)) == "1/2"
    assert frac_str(F(-4, 2)) == "-2"
    assert frac_str(5) == "5"


def test_squarefree_split():
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(8) == (2, 2)
    assert squarefree_split(36) == (6, 1)
    assert squarefree_split(360) == (6, 10)


def test_rational_sqrt():
    assert rational_sqrt(F(9, 4)) == F(3, 2)
    assert rational_sqrt(F(2)) is None
    assert rational_sqrt(F(0)) == 0


class TestRatComplex:
    def test_arith(self):
        z = RatComplex(1, 2) * RatComplex(3, -1)
        assert (z.re, z.im) == (5, 5)
        assert (RatComplex(1, 1) - RatComplex(0, 1)).im == 0

    def test_upper_closure(self):
        assert RatComplex(-1, 0).in_upper_closure()
        assert RatComplex(0, 1).in_upper_closure()
        assert not RatComplex(1, 0).in_upper_closure()
        assert not RatComplex(0, -1).in_upper_closure()


class TestQuad:
    def test_canonical(self):
        assert Quad(0, 1, 4) == 2
        assert Quad(1, 2, 8) == Quad(1, 4, 2)
        assert Quad.sqrt_of(F(9, 4)) == F(3, 2)

    def test_sign(self):
        assert (Quad(1, 1, 2)).sign() == 1
        assert (Quad(-3, 2, 2)).sign() == -1  # 2*sqrt(2) = 2.83 < 3
        assert (Quad(-2, 2, 2)).sign() == 1
        assert Quad(0).sign() == 0

    def test_arith(self):
        s2 = Quad(0, 1, 2)
        assert s2 * s2 == 2
        assert (1 / (1 + s2)) == s2 - 1  # 1/(1+sqrt2) = sqrt2 - 1
        assert float(s2) == pytest.approx(math.sqrt(2))

    def test_mixed_field_comparison(self):
        assert Quad(0, 1, 2) < Quad(0, 1, 3)
        with pytest.raises(ExactnessError):
            Quad(0, 1, 2) + Quad(0, 1, 3)


def test_trig_tables():
    assert cos_pi(F(1, 3)) == F(1, 2)
    assert cos_pi(F(2, 3)) == F(-1, 2)
    assert cos_pi(F(5, 3)) == F(1, 2)
    assert sin2_pi(F(1, 6)) == F(1, 4)
    assert sin2_pi(F(1, 8)) == (2 - Quad(0, 1, 2)) / 4
    assert sin2_pi(F(1, 2)) == 1
    assert cot_pi(F(1, 4)) == 1
    assert cot_pi(F(3, 4)) == -1
    assert tan_pi(F(1, 4)) == 1
    assert tan_pi(F(-1, 4)) == -1
    # numeric sanity across the table
    for q in (F(1, 12), F(1, 8), F(1, 6), F(1, 3), F(5, 12), F(3, 8)):
        assert float(cot_pi(q)) == pytest.approx(1 / math.tan(math.pi * q))
    with pytest.raises(ExactnessError):
        cot_pi(F(1, 5))


class TestPhaseValue:
    def test_convention_boundaries(self):
        assert PhaseValue.of_upper(RatComplex(-1, 0)) == F(1)
        assert PhaseValue.of_upper(RatComplex(0, 1)) == F(1, 2)
        assert PhaseValue.of_upper(RatComplex(1, 1)) == F(1, 4)
        assert PhaseValue.of_upper(RatComplex(-1, 1)) == F(3, 4)

    def test_of_upper_rejects(self):
        with pytest.raises(ValueError):
            PhaseValue.of_upper(RatComplex(1, 0))
        with pytest.raises(ValueError):
            PhaseValue.of_upper(RatComplex(0, 0))
        with pytest.raises(ValueError):
            PhaseValue.of_upper(RatComplex(0, -1))

    def test_order_is_argument_order(self):
        zs = [RatComplex(3, 1), RatComplex(1, 1), RatComplex(0, 1), RatComplex(-2, 1), RatComplex(-1, 0)]
        phases = [PhaseValue.of_upper(z) for z in zs]
        for a, b in zip(phases, phases[1:]):
            assert a < b

    def test_subtraction_exact(self):
        a = PhaseValue.of_upper(RatComplex(1, 1))
        b = PhaseValue.of_upper(RatComplex(0, 1))
        assert (b - a) == F(1, 4)
        assert (a - b) == F(-1, 4)
        # arctan addition identity: arg(1,3) - arg(2,1) = pi/4
        p = PhaseValue((1, 3))
        q = PhaseValue((2, 1))
        assert (p - q) == F(1, 4)

    def test_shift_and_float(self):
        p = PhaseValue.of_upper(RatComplex(1, 2))
        assert float(p.shift(F(1, 8))) == pytest.approx(float(p) + 0.125)
        assert p.shift(F(1, 8)) > p
        assert abs(p - p) == 0

    def test_irrational_vs_rational_threshold(self):
        p = PhaseValue((2, 1))  # arg/pi ~ 0.1476
        assert p < F(1, 6)
        assert p > F(1, 8)
        assert p < F(1, 4)
        # outside the quadratic table: decided by certified enclosures
        assert p > F(1, 7)
        assert p < F(10, 67)
        assert p < F(14759, 100000)  # value is 0.1475836...
        assert p > F(14758, 100000)

    def test_floor_mod2(self):
        p = PhaseValue((1, 1), F(7, 2))  # 3.75
        assert p.floor() == 3
        phi0, k = p.mod2_split()
        assert k == 1
        assert phi0 == p - F(2)
        n = PhaseValue((1, -1), F(-3, 2))  # -1.75
        assert n.floor() == -2
        phi0, k = n.mod2_split()
        assert k == -1
        assert 0 <= float(phi0) < 2

    def test_json_roundtrip(self):
        p = PhaseValue((3, 2), F(5, 8))
        q = PhaseValue.from_json(p.to_json())
        assert p == q
        r = PhaseValue.rational(F(3, 4))
        assert PhaseValue.from_json(r.to_json()) == r

    def test_order_agrees_with_float_off_ties(self):
        import random

        rng = random.Random(42)
        supported = (F(0), F(1, 2), F(1, 4), F(1, 8), F(1, 6), F(1, 12), F(2))
        vals = []
        for _ in range(300):
            x, y = rng.randint(-5, 5), rng.randint(-5, 5)
            if (x, y) == (0, 0):
                continue
            vals.append(PhaseValue((x, y), rng.choice(supported)))
        for _ in range(600):
            a, b = rng.choice(vals), rng.choice(vals)
            fa, fb = float(a), float(b)
            if abs(fa - fb) < 1e-9:
                continue
            assert (a < b) == (fa < fb)

    def test_subtraction_roundtrip(self):
        import random

        rng = random.Random(43)
        for _ in range(200):
            a = PhaseValue(
                (rng.randint(-5, 5) or 1, rng.randint(-5, 5)), F(rng.randint(-4, 4), 2)
            )
            b = PhaseValue(
                (rng.randint(-5, 5) or 1, rng.randint(-5, 5)), F(rng.randint(-4, 4), 2)
            )
            assert (a - b) + b == a
            assert ((a - b) + (b - a)).sign() == 0


class TestSqrtSum:
    def test_canonical_merge(self):
        a = SqrtSum.sqrt_of(2) + SqrtSum.sqrt_of(8)
        assert a == SqrtSum([(3, 2)])  # sqrt2 + 2 sqrt2
        assert a.as_single_sqrt() == 18

    def test_compare(self):
        two_sqrt2 = SqrtSum.sqrt_of(8)
        assert two_sqrt2 > 2
        assert two_sqrt2 < 3
        assert SqrtSum.sqrt_of(2) + SqrtSum.sqrt_of(3) > SqrtSum.sqrt_of(5)
        assert SqrtSum() == 0

    def test_abs_of(self):
        assert SqrtSum.abs_of(RatComplex(-1, 1)).as_single_sqrt() == 2
        assert float(SqrtSum.abs_of(RatComplex(3, 4))) == pytest.approx(5.0)
