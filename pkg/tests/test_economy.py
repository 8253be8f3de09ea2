import random
from fractions import Fraction

import pytest

from dynmatch.economy import (
    Economy,
    build_economy,
    first_match_date,
    is_individually_rational,
    payoff,
)
from dynmatch.errors import NotAvailable, UnknownAgent
from dynmatch.matching import DynamicMatching, empty_matching, enumerate_matchings

from corpus import random_economy


def two_period_pair():
    return build_economy(
        2,
        [(("a1",), ("b1",)), ((), ("b2",))],
        {"a1": Fraction(1, 2), "b1": Fraction(3, 4), "b2": Fraction(3, 4)},
        {
            ("a1", "b1"): Fraction(4),
            ("a1", "b2"): Fraction(10),
            ("b1", "a1"): Fraction(1),
            ("b2", "a1"): Fraction(2),
        },
    )


def test_first_match_date_never_matched_returns_horizon():
    e = two_period_pair()
    assert first_match_date(e, empty_matching(2), "a1", 1) == 2


def test_first_match_date_is_first_period_with_partner():
    e = two_period_pair()
    late = DynamicMatching.from_formed([[], [("a1", "b2")]])
    assert first_match_date(e, late, "a1", 1) == 2
    early = DynamicMatching.from_formed([[("a1", "b1")], []])
    assert first_match_date(e, early, "a1", 1) == 1


def test_payoff_discounts_by_delay():
    e = two_period_pair()
    late = DynamicMatching.from_formed([[], [("a1", "b2")]])
    assert payoff(e, late, "a1", 1) == Fraction(5)  # (1/2) * 10
    assert payoff(e, late, "b2", 2) == Fraction(2)


def test_payoff_zero_when_never_matched():
    e = two_period_pair()
    assert payoff(e, empty_matching(2), "a1", 1) == 0


def test_payoff_requires_availability():
    e = two_period_pair()
    early = DynamicMatching.from_formed([[("a1", "b1")], []])
    with pytest.raises(NotAvailable):
        payoff(e, early, "a1", 2)  # matched in period 1 already
    with pytest.raises(NotAvailable):
        payoff(e, empty_matching(2), "b2", 1)  # arrives in period 2
    with pytest.raises(UnknownAgent):
        payoff(e, empty_matching(2), "zz", 1)


def test_unlisted_partner_has_negative_utility():
    e = build_economy(
        1,
        [(("a1",), ("b1",))],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(5)},
    )
    assert e.utility("b1", "a1") == Fraction(-1)
    assert e.utility("a1", "a1") == 0


def test_individual_rationality():
    e = two_period_pair()
    assert is_individually_rational(e, empty_matching(2))
    assert is_individually_rational(
        e, DynamicMatching.from_formed([[("a1", "b1")], []])
    )
    bad = build_economy(
        1,
        [(("a1",), ("b1",))],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(5)},
    )
    paired = DynamicMatching.from_formed([[("a1", "b1")]])
    assert not is_individually_rational(bad, paired)  # b1 never listed a1


def test_duplicate_arrival_rejected():
    with pytest.raises(ValueError):
        build_economy(
            2,
            [(("a1",), ()), (("a1",), ())],
            {"a1": Fraction(1)},
            {},
        )


def test_discounting_is_the_only_time_dependence():
    rng = random.Random(5)
    for _ in range(20):
        e = random_economy(rng, max_per_side=2, max_periods=2)
        for m in enumerate_matchings(e):
            for k in e.members():
                t0 = e.arrival_period(k)
                date = first_match_date(e, m, k, t0)
                expected = e.delta(k) ** (date - t0) * e.utility(
                    k, m.final_partner(k)
                )
                if m.final_partner(k) == k:
                    expected = Fraction(0)
                assert payoff(e, m, k, t0) == expected


def test_delta_one_removes_delay_sensitivity():
    e = build_economy(
        2,
        [(("a1",), ("b1",)), ((), ())],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(3), ("b1", "a1"): Fraction(2)},
    )
    now = DynamicMatching.from_formed([[("a1", "b1")], []])
    later = DynamicMatching.from_formed([[], [("a1", "b1")]])
    assert payoff(e, now, "a1", 1) == payoff(e, later, "a1", 1) == Fraction(3)


def test_delta_zero_makes_delay_worthless():
    e = build_economy(
        2,
        [(("a1",), ("b1",)), ((), ())],
        {"a1": Fraction(0), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(3), ("b1", "a1"): Fraction(2)},
    )
    later = DynamicMatching.from_formed([[], [("a1", "b1")]])
    assert payoff(e, later, "a1", 1) == 0


def test_economy_key_ignores_declaration_order():
    e1 = build_economy(
        1,
        [(("a1", "a2"), ("b1",))],
        {"a1": Fraction(1), "a2": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(1)},
    )
    e2 = Economy(1, ((("a2", "a1"), ("b1",)),), e1.profile)
    assert e1.key == e2.key
