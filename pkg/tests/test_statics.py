import random
from fractions import Fraction

import pytest

from dynmatch.economy import build_economy
from dynmatch.errors import LoneWolfViolation, TiesPresent
from dynmatch.matching import DynamicMatching, initial_history
from dynmatch.statics import (
    NEG_INF,
    POS_INF,
    assert_lone_wolf,
    checked_stable_set,
    conjecture_threshold,
    deferred_acceptance,
    induced_one_period_economy,
    is_stable,
    stability_among_matched,
    stable_set,
    static_economy,
    value_ge,
    value_gt,
)

from corpus import random_static_economy


def tiny(utils, thresholds=None):
    a = sorted({x for x, _ in utils if x.startswith("a")})
    b = sorted({x for x, _ in utils if x.startswith("b")})
    deltas = {n: Fraction(1, 2) for n in a + b}
    e = build_economy(1, [(a, b)], deltas, {k: Fraction(v) for k, v in utils.items()})
    return static_economy(e, a, b, thresholds)


def test_sentinel_ordering():
    assert value_gt(Fraction(0), NEG_INF)
    assert value_gt(POS_INF, Fraction(10**9))
    assert value_ge(NEG_INF, NEG_INF)
    assert not value_ge(NEG_INF, Fraction(-100))


def test_empty_economy_has_only_the_empty_matching():
    e = build_economy(1, [((), ())], {}, {})
    e1 = static_economy(e, (), ())
    assert stable_set(e1) == ((),)


def test_mutually_acceptable_pair_must_match():
    e1 = tiny({("a1", "b1"): 2, ("b1", "a1"): 3})
    assert stable_set(e1) == (((("a1", "b1")),),)


def test_mutually_unacceptable_pair_stays_single():
    e1 = tiny({("a1", "b1"): -2, ("b1", "a1"): -3})
    assert stable_set(e1) == ((),)


def test_da_agrees_with_exhaustive_stable_set():
    rng = random.Random(21)
    for _ in range(60):
        e = random_static_economy(rng, max_per_side=4)
        a, b = e.arrivals[0]
        e1 = static_economy(e, a, b)
        stable = stable_set(e1)
        assert deferred_acceptance(e1, "A") in stable
        assert deferred_acceptance(e1, "B") in stable


def test_da_rejects_ties():
    e1 = tiny(
        {
            ("a1", "b1"): 2,
            ("a1", "b2"): 2,
            ("b1", "a1"): 1,
            ("b2", "a1"): 1,
        }
    )
    with pytest.raises(TiesPresent):
        deferred_acceptance(e1, "A")


def test_da_empty_economy():
    e = build_economy(1, [((), ())], {}, {})
    assert deferred_acceptance(static_economy(e, (), ()), "A") == ()


def test_lone_wolf_assertion_fires_on_manufactured_violation():
    e1 = tiny({("a1", "b1"): 1, ("b1", "a1"): 1})
    with pytest.raises(LoneWolfViolation):
        assert_lone_wolf(e1, [(), (("a1", "b1"),)])


def test_lone_wolf_holds_on_random_strict_economies():
    rng = random.Random(22)
    for _ in range(60):
        e = random_static_economy(rng, max_per_side=4)
        a, b = e.arrivals[0]
        checked_stable_set(static_economy(e, a, b))


def test_thresholds_prune_partners():
    # With a threshold above u(a1,b1), the pair can no longer form.
    e1 = tiny({("a1", "b1"): 2, ("b1", "a1"): 3}, {"a1": Fraction(5)})
    assert stable_set(e1) == ((),)


def test_raising_a_threshold_only_breaks_stability_through_that_agent():
    # Blocking comparisons for matched agents never touch thresholds, so a
    # matching that stops being stable after one agent's threshold rises
    # must fail on that agent's own individual-rationality check.
    rng = random.Random(23)
    from dynmatch.matching import period_matchings

    for _ in range(40):
        e = random_static_economy(rng, max_per_side=3)
        a, b = e.arrivals[0]
        plain = static_economy(e, a, b)
        agent = rng.choice(a + b)
        bumped = static_economy(e, a, b, {agent: Fraction(rng.randint(0, 3))})
        for pairs in period_matchings(a, b):
            if is_stable(plain, pairs) and not is_stable(bumped, pairs):
                partner = next(
                    (y if x == agent else x) for x, y in pairs if agent in (x, y)
                )
                assert not bumped.acceptable(agent, partner)


def test_conjecture_threshold_is_worst_case_payoff():
    e = build_economy(
        2,
        [(("a1",), ("b1",)), ((), ("b2",))],
        {"a1": Fraction(1, 2), "b1": Fraction(1), "b2": Fraction(1)},
        {
            ("a1", "b1"): Fraction(4),
            ("a1", "b2"): Fraction(10),
            ("b1", "a1"): Fraction(1),
            ("b2", "a1"): Fraction(1),
        },
    )
    h0 = initial_history(e)
    stay_single = DynamicMatching.from_formed([[], []])
    match_late = DynamicMatching.from_formed([[], [("a1", "b2")]])
    thr = conjecture_threshold(e, h0, "a1", [stay_single, match_late])
    assert thr == Fraction(0)
    thr = conjecture_threshold(e, h0, "a1", [match_late])
    assert thr == Fraction(5)


def test_empty_conjecture_policies():
    e = build_economy(
        1,
        [(("a1",), ("b1",))],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(1), ("b1", "a1"): Fraction(1)},
    )
    h0 = initial_history(e)
    assert conjecture_threshold(e, h0, "a1", [], "vacuous") is NEG_INF
    assert conjecture_threshold(e, h0, "a1", [], "strict") is POS_INF
    with pytest.raises(ValueError):
        conjecture_threshold(e, h0, "a1", [], "bogus")


def test_induced_economy_with_singleton_idle_conjectures_is_plain_ir():
    e = build_economy(
        1,
        [(("a1",), ("b1",))],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(2), ("b1", "a1"): Fraction(3)},
    )
    h0 = initial_history(e)
    idle = DynamicMatching.from_formed([[]])
    e1 = induced_one_period_economy(e, h0, {"a1": [idle], "b1": [idle]})
    assert e1.threshold("a1") == 0
    assert e1.threshold("b1") == 0
    assert stable_set(e1) == (((("a1", "b1")),),)


def test_stability_among_matched_ignores_outside_agents():
    # a2 strictly prefers b1 and is idle, but only matched agents count.
    e = build_economy(
        1,
        [(("a1", "a2"), ("b1",))],
        {n: Fraction(1) for n in ("a1", "a2", "b1")},
        {
            ("a1", "b1"): Fraction(1),
            ("a2", "b1"): Fraction(5),
            ("b1", "a1"): Fraction(1),
            ("b1", "a2"): Fraction(5),
        },
    )
    assert stability_among_matched(e, (("a1", "b1"),), {})
    assert stability_among_matched(e, (), {})


def test_stability_among_matched_enforces_thresholds():
    e = build_economy(
        1,
        [(("a1",), ("b1",))],
        {"a1": Fraction(1), "b1": Fraction(1)},
        {("a1", "b1"): Fraction(2), ("b1", "a1"): Fraction(2)},
    )
    assert stability_among_matched(e, (("a1", "b1"),), {"a1": Fraction(1)})
    assert not stability_among_matched(e, (("a1", "b1"),), {"a1": Fraction(3)})
