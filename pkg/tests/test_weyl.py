"""Root systems, the reflection action, and the invariant average."""

import random
from fractions import Fraction

import pytest

from mdsforge import d4
from mdsforge.rings import MultiPoly, ParamPoly, PP_ONE, RationalFunction, rat_equal
from mdsforge.weyl import (ActionEvaluator, act_reflection, build_root_system,
                           cg_average_symbolic, check_limiting_condition,
                           cocycle_symbolic, eps_point, sigma_point,
                           value_at_origin, verify_against_explicit)


@pytest.mark.parametrize("name,order,roots", [
    ("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("D4", 192, 12)])
def test_group_orders_and_roots(name, order, roots):
    rs = build_root_system(name)
    assert rs.order == order
    assert len(rs.positive_roots) == roots


def test_unsupported_type_rejected():
    with pytest.raises(ValueError):
        build_root_system("B2")


def test_substitution_rules():
    rs = build_root_system("D4")
    q = Fraction(4)
    sq = Fraction(2)
    z = (Fraction(1, 3), Fraction(2, 5), Fraction(-1, 4), Fraction(1, 7))
    zs = sigma_point(rs, 4, z, q, sq)
    assert zs[3] == 1 / (q * z[3])
    for j in (0, 1, 2):  # all outer nodes adjacent to the centre
        assert zs[j] == sq * z[3] * z[j]
    zs1 = sigma_point(rs, 1, z, q, sq)
    assert zs1[1] == z[1]  # non-adjacent outer nodes untouched
    ze = eps_point(rs, 4, z)
    assert ze == (-z[0], -z[1], -z[2], z[3])


def test_eps_sigma_relations_pointwise():
    rs = build_root_system("D4")
    q, sq = Fraction(9, 4), Fraction(3, 2)
    z = (Fraction(2, 3), Fraction(1, 5), Fraction(-3, 4), Fraction(1, 2))
    assert eps_point(rs, 1, eps_point(rs, 1, z)) == z
    assert (eps_point(rs, 1, eps_point(rs, 4, z))
            == eps_point(rs, 4, eps_point(rs, 1, z)))
    # adjacent pair: sigma_i eps_j = eps_i eps_j sigma_i
    lhs = sigma_point(rs, 1, eps_point(rs, 4, z), q, sq)
    rhs = eps_point(rs, 1, eps_point(rs, 4, sigma_point(rs, 1, z, q, sq)))
    assert lhs == rhs
    # non-adjacent pair commutes plainly
    lhs = sigma_point(rs, 1, eps_point(rs, 2, z), q, sq)
    rhs = eps_point(rs, 2, sigma_point(rs, 1, z, q, sq))
    assert lhs == rhs


def test_cocycle_generator_value_and_relation():
    rs = build_root_system("D4")
    ev = ActionEvaluator(rs, Fraction(3, 2))
    z = (Fraction(1, 3), Fraction(2, 5), Fraction(-1, 4), Fraction(1, 7))
    for i in range(1, 5):
        assert ev.cocycle((i,), z) == -ev.q * z[i - 1] ** 2
    rng = random.Random(3)
    words = [w for w, _ in rs.elements if 0 < len(w) <= 4]
    for _ in range(12):
        w1, w2 = rng.choice(words), rng.choice(words)
        zz = z
        for letter in reversed(w2):
            zz = sigma_point(rs, letter, zz, ev.q, ev.sqrtq)
        assert ev.cocycle(w1 + w2, z) == ev.cocycle(w1, zz) * ev.cocycle(w2, z)


def test_braid_relations_give_group_action():
    rs = build_root_system("D4")
    rng = random.Random(17)

    def base(z):
        den = 1 - z[0] * z[3]
        if den == 0:
            raise ZeroDivisionError
        return (1 + z[1]) / den

    for (i, j, r) in ((1, 2, 2), (1, 4, 3), (2, 4, 3), (3, 4, 3)):
        ev = ActionEvaluator(rs, Fraction(5, 2), base=base)
        checked = 0
        while checked < 4:
            z = tuple(Fraction(rng.randint(-9, 9) or 1, rng.randint(2, 11))
                      for _ in range(4))
            try:
                got = ev.value((i, j) * r, z)
                want = base(z)
            except ZeroDivisionError:
                continue
            assert got == want
            checked += 1


def test_reflection_is_involution_on_constants():
    rs = build_root_system("A1")
    one = RationalFunction.const(1, 1)
    back = act_reflection(act_reflection(one, rs, 1), rs, 1)
    assert back.equals_exact(one)


def test_a1_average_closed_form():
    rs = build_root_system("A1")
    avg = cg_average_symbolic(rs)
    target = RationalFunction(
        MultiPoly.const(1, 1),
        [MultiPoly.const(1, 1) - MultiPoly.monomial(1, (1,), PP_ONE)])
    assert avg.equals_exact(target)
    assert value_at_origin(avg).is_one()


def test_a2_average_properties():
    rs = build_root_system("A2")
    avg = cg_average_symbolic(rs)
    assert value_at_origin(avg).is_one()
    for i in (1, 2):
        eq, _ = rat_equal(act_reflection(avg, rs, i), avg, "randomized",
                          trials=6, seed=40 + i)
        assert eq
        assert check_limiting_condition(avg, rs, i)


def test_limiting_condition_negative_case():
    rs = build_root_system("D4")
    one = MultiPoly.const(4, 1)
    zi = MultiPoly.monomial(4, (1, 0, 0, 0), PP_ONE)
    bad = RationalFunction(one, [one - zi, one - zi])  # 1/(1-z1)^2
    assert not check_limiting_condition(bad, rs, 1)


def test_explicit_function_is_invariant():
    rs = build_root_system("D4")
    f = d4.explicit_f()
    assert value_at_origin(f).is_one()
    for i in (1, 2, 3, 4):
        assert check_limiting_condition(f, rs, i)
    for i in (2, 4):
        eq, witness = rat_equal(act_reflection(f, rs, i), f, "randomized",
                                trials=8, seed=100 + i)
        assert eq, witness


def test_average_matches_explicit_at_points():
    rs = build_root_system("D4")
    f = d4.explicit_f()
    ev = ActionEvaluator(rs, Fraction(3, 2))
    z = (Fraction(1, 3), Fraction(2, 5), Fraction(-1, 4), Fraction(1, 7))
    assert ev.average(z) == f.eval(z, Fraction(3, 2))


def test_mutation_is_detected():
    rs = build_root_system("D4")
    f = d4.explicit_f()
    mutated = RationalFunction(
        f.num + MultiPoly.monomial(4, (3, 3, 3, 3), ParamPoly.q_power(7)), f.den)
    ev = ActionEvaluator(rs, Fraction(2))
    z = (Fraction(1, 3), Fraction(2, 5), Fraction(-1, 4), Fraction(1, 7))
    assert ev.average(z) != mutated.eval(z, Fraction(2))


def test_symbolic_cocycle_matches_pointwise():
    rs = build_root_system("A2")
    word = (1, 2, 1)
    j_sym = cocycle_symbolic(rs, word)
    ev = ActionEvaluator(rs, Fraction(7, 3))
    rng = random.Random(5)
    for _ in range(5):
        z = (Fraction(rng.randint(1, 9), 10), Fraction(rng.randint(1, 9), 11))
        assert j_sym.eval(z, Fraction(7, 3)) == ev.cocycle(word, z)


def test_randomized_certification_small():
    rep = verify_against_explicit(trials=4, seed=7)
    assert rep["equal"]
    assert rep["denominator_factor_count"] == 12
