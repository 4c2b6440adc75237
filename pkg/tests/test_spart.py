import itertools

import pytest

from superjack.coeffring import ALPHA, AlphaPolynomial, AlphaRational
from superjack.spart import (SuperPartition, add_circle_moves,
                             almost_admissible_variants, arm, bosonic_cells,
                             cells, circle_to_square_moves, conjugate,
                             d_eta, d_eta_product, dominance_leq,
                             enumerate_admissible, enumerate_all_m,
                             enumerate_sparts, epsilon_u, eta_bar, f_stat,
                             is_admissible, leg, lower_hook, parse_spart,
                             remove_circle_moves, square_to_circle_moves,
                             star_pair, tilde_composition, to_overpartition,
                             upper_hook)


def test_star_pair_display_example():
    L = parse_spart("5,3,1,0;4,3")
    circ, star = star_pair(L, 7)
    assert circ == (6, 4, 4, 3, 2, 1, 0)
    assert star == (5, 4, 3, 3, 1, 0, 0)


def test_star_pair_edge_cases():
    assert star_pair(parse_spart(";"), 3) == ((0, 0, 0), (0, 0, 0))
    assert star_pair(parse_spart("0;"), 1) == ((1,), (0,))
    with pytest.raises(ValueError):
        star_pair(parse_spart("1,0;"), 1)


def test_parse_both_grammars():
    L = parse_spart("(5o,4,3o,3,1o,0o,0)")
    assert L == parse_spart("5,3,1,0;4,3")
    assert parse_spart(L.circled_str()) == L
    assert parse_spart(";") == SuperPartition((), ())


def test_invalid_labels_rejected():
    with pytest.raises(ValueError):
        SuperPartition((1, 1), ())
    with pytest.raises(ValueError):
        SuperPartition((), (1, 2))
    with pytest.raises(ValueError):
        SuperPartition((), (1, 0))


def test_conjugate_display_example():
    L = parse_spart("5,3,1,0;4,3")
    assert L.circled == (6, 4, 4, 3, 2, 1)
    C = conjugate(L)
    assert C.circled == (6, 5, 4, 3, 1, 1)
    assert C.star == (5, 4, 4, 2, 1, 0)  # conjugate gains a circled zero row
    assert conjugate(parse_spart(";")) == parse_spart(";")


def test_conjugate_involutive_exhaustive():
    for n in range(7):
        for L in enumerate_all_m(n, 6):
            assert conjugate(conjugate(L)) == L


def test_strip_property_of_enumerated_labels():
    # circled/starred always differ by a simultaneous horizontal+vertical strip
    for n in range(7):
        for L in enumerate_all_m(n, 6):
            circ, star = star_pair(L, max(L.length, 1))
            assert all(c - s in (0, 1) for c, s in zip(circ, star))
            ccol = [sum(1 for p in circ if p > j) for j in range(8)]
            scol = [sum(1 for p in star if p > j) for j in range(8)]
            assert all(c - s in (0, 1) for c, s in zip(ccol, scol))


def test_dominance_examples():
    assert dominance_leq(parse_spart("1,0;1"), parse_spart("2,0;"))
    # different fermionic degrees are never comparable
    assert not dominance_leq(parse_spart("0;3"), parse_spart("2,1;"))
    assert not dominance_leq(parse_spart("2,1;"), parse_spart("0;3"))
    L = parse_spart("2,0;1")
    assert dominance_leq(L, L)


def test_dominance_conjugation_antitone():
    for n in range(5):
        labels = enumerate_all_m(n, 5)
        for A, B in itertools.product(labels, labels):
            assert dominance_leq(A, B) == dominance_leq(conjugate(B), conjugate(A))


def test_admissible_paper_examples():
    assert is_admissible(parse_spart("(7o,7,5,4o,2o,1o,0)"), 2, 3, 7)
    assert is_admissible(parse_spart("(8,4o,3,1o,0o)"), 1, 2, 5)
    assert is_admissible(parse_spart(";4,2"), 1, 2, 3)
    assert not is_admissible(parse_spart(";3"), 1, 2, 3)
    with pytest.raises(ValueError):
        is_admissible(parse_spart(";4,2"), 1, 3, 3)  # gcd(k+1, r-1) = 2
    assert is_admissible(parse_spart(";4,1"), 1, 3, 2, allow_noncoprime=True)


def test_admissible_m0_reduction():
    # for labels without circles the condition is the plain partition one
    lam = (4, 2, 0)
    L = parse_spart(";4,2")
    for (k, r, N) in [(1, 2, 3), (2, 3, 3), (2, 2, 3)]:
        direct = all(lam[i] - lam[i + k] >= r for i in range(len(lam) - k))
        assert is_admissible(L, k, r, N) == direct


def test_lemma_star_circ_admissible():
    # admissibility of a label forces (k+1, r)-admissibility of both shapes
    for k, r in ((1, 2), (2, 3)):
        for n in range(9):
            for L in enumerate_all_m(n, 4):
                if not is_admissible(L, k, r, 4):
                    continue
                circ, star = star_pair(L, 4)
                for i in range(4 - (k + 1)):
                    assert star[i] - star[i + k + 1] >= r
                    assert circ[i] - circ[i + k + 1] >= r


def test_enumerate_counts_and_order():
    E = enumerate_sparts(3, 2, 3)
    assert [str(L) for L in E] == ["3,0;", "2,1;", "2,0;1", "1,0;2"]
    assert enumerate_sparts(0, 0, 3) == (SuperPartition((), ()),)
    keys = [L.sort_key() for L in E]
    assert keys == sorted(keys, reverse=True)


def test_enumerate_admissible_appendix_count():
    adm = enumerate_admissible(1, 2, 3, 3)
    by_degree = {}
    for L in adm:
        by_degree.setdefault(L.degree(), []).append(L)
    # the unique lowest-degree admissible label has fermionic degree 2
    assert by_degree[(3, 2)] == [parse_spart("2,1;")]
    assert (3, 1) not in by_degree


def test_overpartition_map():
    L = SuperPartition((3, 1, 0), (2, 1))
    assert to_overpartition(L) == [(4, True), (2, False), (2, True),
                                   (1, False), (1, True)]
    assert to_overpartition(parse_spart(";")) == []


def test_overpartition_restriction_condition():
    # admissible labels at r=2 map onto gap-restricted overpartitions
    for k in (1, 2):
        for n in range(7):
            for L in enumerate_all_m(n, 4):
                if not is_admissible(L, k, 2, 4):
                    continue
                ov = to_overpartition(L)
                padded = ov + [(0, False)] * 4
                for i in range(4 - k):
                    hi, (lo, overlined) = padded[i][0], padded[i + k]
                    assert hi - lo >= (1 if overlined else 2)


def test_arm_leg_example():
    lam = (8, 5, 5, 3, 1)
    assert arm(lam, (3, 2)) == 3
    assert leg(lam, (3, 2)) == 1


def test_hooks_single_cell():
    L = parse_spart(";1")
    assert upper_hook(L, (1, 1)) == AlphaPolynomial((0, 1))
    assert lower_hook(L, (1, 1)) == AlphaPolynomial((1,))
    with pytest.raises(ValueError):
        upper_hook(L, (2, 1))


def test_surgery_moves_match_brute_force():
    L = parse_spart("1;2")
    adds = {mv.result for mv in add_circle_moves(L)}
    assert adds == {parse_spart("2,1;"), parse_spart("1,0;2")}
    rems = {mv.result for mv in remove_circle_moves(L)}
    assert rems == {parse_spart(";2,1")}
    sq2c = {mv.result for mv in square_to_circle_moves(L)}
    assert sq2c == set()  # value-1 circle already present
    c2sq = {mv.result for mv in circle_to_square_moves(L)}
    assert c2sq == {parse_spart(";2,2")}


def test_surgery_marked_cells_consistent():
    # marked cell coordinates identify the one differing diagram cell
    for n in range(5):
        for L in enumerate_all_m(n, 4):
            for mv in add_circle_moves(L, 6):
                om = mv.result
                i, j = mv.cell
                circ, star = star_pair(L, 6)
                circ2, star2 = star_pair(om, 6)
                assert star2 == star
                assert circ2[i - 1] == circ[i - 1] + 1 == j
            for mv in square_to_circle_moves(L):
                om = mv.result
                i, j = mv.cell
                circ, star = star_pair(L, 6)
                circ2, star2 = star_pair(om, 6)
                assert circ2 == circ
                assert star2[i - 1] == star[i - 1] - 1 == j - 1


def test_almost_admissible_variants():
    variants = almost_admissible_variants(parse_spart("0;"), 1, 2, 1)
    assert parse_spart(";") in variants
    variants2 = almost_admissible_variants(parse_spart(";4,2"), 1, 2, 3)
    assert parse_spart("4;2") in variants2


def test_eigen_scalars():
    assert epsilon_u((), 2, ALPHA) == [AlphaRational(0), AlphaRational(-1),
                                       AlphaRational(1)]
    from superjack.spart import e_star_poly, e_tilde_poly
    assert e_star_poly(parse_spart(";1")).is_zero()
    assert e_tilde_poly(parse_spart("0;")).is_zero()


def test_tilde_composition():
    L = parse_spart("3,1,0;5,3,3")
    assert tilde_composition(L, 8) == (0, 1, 3, 0, 0, 3, 3, 5)


def test_eta_bar_zero_composition():
    assert eta_bar((0, 0), ALPHA) == [AlphaRational(0), AlphaRational(-1)]


def test_d_eta_product_factorization():
    # frozen oracle: the hook product over a staircase-ish composition equals
    # the bosonic lower hooks times first-column and fermionic-block factors
    for s, N in [("3,1,0;5,3,3", 8), ("1,0;2", 4), ("2;4,1", 5), (";3,2", 3)]:
        L = parse_spart(s)
        eta = tilde_composition(L, N)
        m = L.m
        lhs = AlphaRational(d_eta_product(eta))
        pb = AlphaPolynomial.const(1)
        for c in bosonic_cells(L):
            pb = pb * lower_hook(L, c)
        pc = AlphaPolynomial.const(1)
        for i in range(N - len(L.sym) + 1, N + 1):
            pc = pc * d_eta(eta, (i, 1))
        pf = AlphaPolynomial.const(1)
        for j in range(1, m + 1):
            for i in range(j + 1, m + 1):
                pf = pf * d_eta(eta, (i, eta[j - 1] + 1))
        rhs = (AlphaRational(pb) * AlphaRational(pc) * AlphaRational(pf)
               / f_stat(L.sym))
        assert lhs == rhs, s


def test_eigen_data_bundle():
    from superjack.spart import eigen_data
    data = eigen_data(parse_spart("1,0;"), 3, ALPHA)
    assert not data["e_star"]  # b-statistics of (1,0) and its conjugate vanish
    assert data["e_tilde"] == AlphaRational(AlphaPolynomial((-1, 1)))
    assert len(data["epsilon_star"]) == 4
    assert len(data["eta_bar"]) == 3
    # degree-(0|1) label: both eigenvalues vanish
    data0 = eigen_data(parse_spart("0;"), 2, ALPHA)
    assert not data0["e_star"] and not data0["e_tilde"]
