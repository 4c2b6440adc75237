import itertools
import random
from fractions import Fraction

import pytest

from superjack.coeffring import ALPHA, ONE
from superjack.spart import enumerate_all_m, parse_spart
from superjack.superpoly import (DivisionFailure, NotSymmetric,
                                 SuperPolynomial, divide_xdiff,
                                 divided_difference, ferm_power, from_mbasis,
                                 monomial_msym, omega_alpha, p_label,
                                 pair_decompose, pair_recompose, power_sum,
                                 prescribed_part, scalar_product_p,
                                 terms_to_json, to_mbasis, to_pbasis,
                                 unique_arrangements)


def x(i, N, p=1):
    return SuperPolynomial.x(i, N, p)


def t(i, N):
    return SuperPolynomial.theta(i, N)


def test_theta_sign_rules():
    N = 3
    assert t(1, N) * t(2, N) == -(t(2, N) * t(1, N))
    assert (t(1, N) * t(1, N)).is_zero()
    f, g = t(1, N) * x(2, N), t(2, N) * x(1, N)
    assert (f * g + g * f).is_zero()


def test_mul_associative_supercommutative():
    N = 3
    rng = random.Random(7)
    polys = []
    for _ in range(4):
        f = SuperPolynomial(N)
        for _ in range(3):
            T = tuple(sorted(rng.sample(range(1, N + 1), rng.randint(0, 2))))
            e = tuple(rng.randint(0, 2) for _ in range(N))
            f._iadd_term((T, e), rng.randint(-3, 3))
        polys.append(f)
    for f, g, h in itertools.permutations(polys, 3):
        assert (f * g) * h == f * (g * h)
    # theta-homogeneous pieces super-commute
    f = t(1, N) * x(1, N) + t(2, N) * x(2, N)
    g = t(3, N)
    assert f * g == -(g * f)
    b = x(1, N) + x(2, N, 2)
    assert b * f == f * b


def test_K_sigma_actions():
    N = 4
    f = t(1, N) * x(1, N)
    assert f.act_Ksigma([2, 1, 3, 4]) == t(2, N) * x(2, N)
    tt = t(1, N) * t(2, N)
    assert tt.act_Ksigma([2, 1, 3, 4]) == -tt
    pt = ferm_power(2, N)
    for sigma in itertools.permutations(range(1, N + 1)):
        assert pt.act_Ksigma(list(sigma)) == pt


def test_monomial_display_example():
    N = 4
    mL = monomial_msym(parse_spart("1,0;1,1"), N)
    expected = SuperPolynomial(N)
    for i, j in itertools.combinations(range(1, 5), 2):
        rest = [k for k in range(1, 5) if k not in (i, j)]
        expected += (t(i, N) * t(j, N) * (x(i, N) - x(j, N))
                     * x(rest[0], N) * x(rest[1], N))
    assert mL == expected
    assert mL.is_symmetric()


def test_monomial_edge_cases():
    assert monomial_msym(parse_spart(";1"), 3) == power_sum(1, 3)
    assert monomial_msym(parse_spart("0;"), 3) == ferm_power(0, 3)


def test_monomials_fixed_by_generators():
    for n in range(4):
        for L in enumerate_all_m(n, 3):
            assert monomial_msym(L, 3).is_symmetric()


def test_to_mbasis_roundtrip():
    N = 3
    combos = {parse_spart(";2"): Fraction(3, 2), parse_spart("1;1"): Fraction(-1)}
    f = from_mbasis(combos, N)
    # the second label has different degree, so build separately
    g = from_mbasis({parse_spart(";2"): Fraction(3, 2)}, N)
    assert to_mbasis(g) == {parse_spart(";2"): Fraction(3, 2)}
    mL = monomial_msym(parse_spart("1,0;1"), N)
    assert to_mbasis(mL) == {parse_spart("1,0;1"): 1}


def test_to_mbasis_p1_squared():
    p1 = power_sum(1, 2)
    assert to_mbasis(p1 * p1) == {parse_spart(";2"): 1, parse_spart(";1,1"): 2}


def test_to_mbasis_rejects_nonsymmetric():
    with pytest.raises(NotSymmetric):
        to_mbasis(x(1, 2))


def test_pt0_p1_expansion_brute_force():
    N = 3
    f = ferm_power(0, N) * power_sum(1, N)
    coeffs = to_mbasis(f)
    rebuilt = from_mbasis(coeffs, N)
    assert rebuilt == f
    assert coeffs == {parse_spart("1;"): 1, parse_spart("0;1"): 1}


def test_power_sum_orders():
    N = 2
    assert ferm_power(0, N) == t(1, N) + t(2, N)
    pt0, pt1 = ferm_power(0, N), ferm_power(1, N)
    assert p_label(parse_spart("1,0;"), N) == pt1 * pt0 == -(pt0 * pt1)
    assert p_label(parse_spart("0;1"), N) == pt0 * power_sum(1, N)


def test_scalar_product_values():
    a = ALPHA
    assert scalar_product_p(parse_spart("0;1"), parse_spart("0;1"), a) == a * a
    assert scalar_product_p(parse_spart(";2"), parse_spart(";2"), a) == 2 * a
    assert scalar_product_p(parse_spart(";2"), parse_spart(";1,1"), a) == 0
    assert scalar_product_p(parse_spart("1,0;"), parse_spart("1,0;"), a) == -(a * a)


def test_omega_scalars_and_composition():
    a = ALPHA
    N = 3
    assert omega_alpha(power_sum(2, N), a) == power_sum(2, N).scale(-a)
    assert omega_alpha(ferm_power(0, N), a) == ferm_power(0, N).scale(a)
    g = power_sum(2, N) + power_sum(1, N) * power_sum(1, N)
    assert omega_alpha(omega_alpha(g, a), ONE / a) == g


def test_specialize_merge():
    p1 = power_sum(1, 2)
    merged = p1.merge_x((2,), 1)
    assert merged == x(1, 2).scale(2)


def test_subs_x_polynomial_image():
    # x1 -> x3 + x4 inside x1^2 x2
    N = 4
    f = x(1, N, 2) * x(2, N)
    g = f.subs_x({1: x(3, N) + x(4, N)})
    expected = (x(3, N) + x(4, N)) * (x(3, N) + x(4, N)) * x(2, N)
    assert g == expected


def test_theta_coefficient_and_restrict():
    N = 4
    mL = monomial_msym(parse_spart("1,0;1,1"), N)
    co = mL.theta_coefficient((1, 2))
    assert co == (x(1, N) - x(2, N)) * x(3, N) * x(4, N)
    body, slope = t(4, 4).restrict_last()
    assert body.is_zero()
    assert slope == SuperPolynomial.one(3)
    body2, slope2 = (t(1, 4) * t(4, 4)).restrict_last()
    assert slope2 == -t(1, 3)  # moving the derivative past theta_1


def test_divided_difference():
    assert divided_difference(x(1, 2), 1, 2) == SuperPolynomial.one(2)
    assert divided_difference(x(1, 2, 2), 1, 2) == x(1, 2) + x(2, 2)
    f = x(1, 3, 3) * x(2, 3)
    g = divided_difference(f, 1, 2)
    assert (x(1, 3) - x(2, 3)) * g == f - f.swap_K(1, 2)
    # the diagonal-swap variant keeps theta terms polynomial
    h = t(1, 2) * x(1, 2, 2) + t(2, 2) * x(2, 2, 2)
    dd = divided_difference(h, 1, 2, super_swap=True)
    assert (x(1, 2) - x(2, 2)) * dd == h - h.act_Ksigma([2, 1])


def test_divide_xdiff_failure():
    with pytest.raises(DivisionFailure):
        divide_xdiff(x(1, 2) + x(2, 2), 1, 2)


def test_prescribed_part():
    assert prescribed_part(ferm_power(0, 1), 1) == SuperPolynomial.one(1)
    m10 = monomial_msym(parse_spart("1,0;"), 2)
    assert prescribed_part(m10, 2) == SuperPolynomial.one(2)
    with pytest.raises(DivisionFailure):
        prescribed_part(t(1, 2) * t(2, 2) * x(1, 2), 2)


def test_exterior_derivative_squares_to_zero():
    N = 4
    def q(f):
        out = SuperPolynomial(f.N)
        for i in range(1, f.N + 1):
            out += f.diff_x(i).mul_theta(i)
        return out
    def qt(f):
        out = SuperPolynomial(f.N)
        for i in range(1, f.N + 1):
            out += f.diff_x(i).mul_x(i).mul_theta(i)
        return out
    rng = random.Random(11)
    for _ in range(5):
        f = SuperPolynomial(N)
        for _ in range(4):
            T = tuple(sorted(rng.sample(range(1, N + 1), rng.randint(0, 2))))
            e = tuple(rng.randint(0, 2) for _ in range(N))
            f._iadd_term((T, e), rng.randint(-2, 2))
        assert q(q(f)).is_zero()
        assert qt(qt(f)).is_zero()


def test_pair_decompose_roundtrip():
    N = 4
    h = (t(1, N) * t(3, N) * x(2, N) + t(2, N) * x(1, N) * x(3, N)
         + SuperPolynomial.one(N) + t(1, N) * t(2, N) * t(3, N) * x(4, N))
    A, B, C, D = pair_decompose(h, 1, 3)
    for part in (A, B, C, D):
        assert all(1 not in T and 3 not in T for T, _ in part.terms)
    assert pair_recompose(A, B, C, D, 1, 3) == h


def test_unique_arrangements():
    arrs = list(unique_arrangements([1, 1, 2]))
    assert len(arrs) == 3
    assert len(set(arrs)) == 3


def test_to_pbasis_faithful():
    N = 4
    f = monomial_msym(parse_spart("1;1"), N)
    coeffs = to_pbasis(f)
    rebuilt = SuperPolynomial(N)
    for P, c in coeffs.items():
        rebuilt += p_label(P, N).scale(c)
    assert rebuilt == f
    with pytest.raises(ValueError):
        to_pbasis(monomial_msym(parse_spart("1;1"), 2))  # N too small


def test_json_terms_deterministic():
    f = monomial_msym(parse_spart("1;1"), 3)
    assert terms_to_json(f) == terms_to_json(f.copy())
    item = terms_to_json(f)[0]
    assert set(item) == {"thetas", "exps", "coeff"}
