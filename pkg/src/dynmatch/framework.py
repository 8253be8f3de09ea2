"""Conjecture families, solution verification, candidates, and consistency.

A conjecture family answers "which full matchings does agent k deem possible
if k stays unmatched this period".  Families are defined at period 1 of an
arbitrary economy; queries at later histories reduce to the continuation
economy, which also gives memoization for free (payoffs depend only on
partner and delay, so two histories with the same continuation agree).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .economy import Economy, payoff
from .errors import EmptyContinuationSolutions, NotACandidate, NotAvailable
from .matching import (
    DEFAULT_MAX_MATCHINGS,
    DynamicMatching,
    History,
    available_agents,
    continuation_economy,
    enumerate_matchings,
    initial_history,
    lift,
    period_matchings,
    restrict,
)
from .statics import (
    StaticEconomy,
    Threshold,
    checked_stable_set,
    conjecture_threshold,
    induced_one_period_economy,
    value_ge,
)

INDIVIDUAL_A = "IndividualA"
INDIVIDUAL_B = "IndividualB"
PAIR = "Pair"


@dataclass(frozen=True)
class BlockWitness:
    """A replayable record of why a matching fails at some period.

    For individual kinds, ``payoffs`` is (attained value, conjecture
    threshold); for pair kinds it is (u(a,b), U_t(a,m), v(a,b), V_t(b,m)).
    """

    kind: str
    period: int
    agents: tuple[str, ...]
    payoffs: tuple

    def __bool__(self) -> bool:
        return False


class ConjectureFamily:
    """Base class: deterministic rule (economy, history, agent) -> matchings.

    Subclasses implement :meth:`_root_conjectures` for an agent available in
    period 1 of a (continuation) economy; results are cached per canonical
    economy key and lifted back onto the caller's history.
    """

    name = "?"

    def __init__(self, max_matchings: int = DEFAULT_MAX_MATCHINGS):
        self.max_matchings = max_matchings
        self._cache: dict = {}

    def conjecture_set(
        self, economy: Economy, h: History, k: str
    ) -> tuple[DynamicMatching, ...]:
        cont = continuation_economy(economy, h)
        a1, b1 = cont.arrivals[0]
        if k not in a1 and k not in b1:
            raise NotAvailable(f"{k} is not available at period {h.t}")
        key = (cont.key, k)
        if key not in self._cache:
            self._cache[key] = tuple(self._root_conjectures(cont, k))
        if h.t == 1:
            return self._cache[key]
        return tuple(lift(economy, h, c) for c in self._cache[key])

    def _root_conjectures(
        self, economy: Economy, k: str
    ) -> Iterable[DynamicMatching]:
        raise NotImplementedError


class StableFamily(ConjectureFamily):
    """Myopic conjectures: the single matching in which nobody ever pairs up.

    Thresholds are therefore 0 everywhere, so solutions are exactly the
    matchings that are individually rational and blocking-free period by
    period.  For one-period economies this is the stable set.
    """

    name = "stable"

    def _root_conjectures(self, economy, k):
        return (DynamicMatching(((),) * economy.horizon),)


class ConceptEngine:
    """A named concept: one conjecture family plus a memoized solution map."""

    def __init__(
        self,
        family: ConjectureFamily,
        empty_policy: str = "vacuous",
        max_matchings: int = DEFAULT_MAX_MATCHINGS,
    ):
        self.family = family
        self.name = family.name
        self.empty_policy = empty_policy
        self.max_matchings = max_matchings
        self._solutions: dict = {}

    def solution_set(self, economy: Economy) -> tuple[DynamicMatching, ...]:
        key = economy.key
        if key not in self._solutions:
            self._solutions[key] = phi_solution_set(
                economy, self.family, self.empty_policy, self.max_matchings
            )
        return self._solutions[key]


class AgreeFamily(ConjectureFamily):
    """Conjectures constrained only in the continuation: the agent believes
    the market produces some solution from next period onward, with no
    restriction on what happens now."""

    name = "agree"

    def __init__(
        self,
        empty_policy: str = "vacuous",
        max_matchings: int = DEFAULT_MAX_MATCHINGS,
    ):
        super().__init__(max_matchings)
        self.engine = ConceptEngine(self, empty_policy, max_matchings)

    def _root_conjectures(self, economy, k):
        base = enumerate_matchings(
            economy, unmatched_now=[k], max_matchings=self.max_matchings
        )
        if economy.horizon <= 1:
            return base
        out = []
        for mbar in base:
            h1 = History(economy, mbar.prefix(2))
            accepted = set(self.engine.solution_set(continuation_economy(economy, h1)))
            if restrict(economy, mbar, h1) in accepted:
                out.append(mbar)
        return out


def agree_conjectures(
    economy: Economy, h: History, k: str, family: Optional[AgreeFamily] = None
) -> tuple[DynamicMatching, ...]:
    return (family or AgreeFamily()).conjecture_set(economy, h, k)


def family_thresholds(
    economy: Economy,
    h: History,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
) -> dict[str, Threshold]:
    avail_a, avail_b = available_agents(economy, h)
    return {
        k: conjecture_threshold(
            economy, h, k, family.conjecture_set(economy, h, k), empty_policy
        )
        for k in (*avail_a, *avail_b)
    }


def induced_economy_at(
    economy: Economy,
    h: History,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
) -> StaticEconomy:
    avail_a, avail_b = available_agents(economy, h)
    conjectured = {
        k: family.conjecture_set(economy, h, k) for k in (*avail_a, *avail_b)
    }
    return induced_one_period_economy(economy, h, conjectured, empty_policy)


def period_witness(
    economy: Economy,
    m: DynamicMatching,
    t: int,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
) -> Optional[BlockWitness]:
    """First violation of the period-t solution conditions, or None.

    Scan order is deterministic: individual objections before pair blocks,
    agents in declaration order.
    """
    h = History(economy, m.prefix(t))
    avail_a, avail_b = available_agents(economy, h)
    for kind, names in ((INDIVIDUAL_A, avail_a), (INDIVIDUAL_B, avail_b)):
        for k in names:
            thr = conjecture_threshold(
                economy, h, k, family.conjecture_set(economy, h, k), empty_policy
            )
            val = payoff(economy, m, k, t)
            if not value_ge(val, thr):
                return BlockWitness(kind, t, (k,), (val, thr))
    for a in avail_a:
        ua = payoff(economy, m, a, t)
        for b in avail_b:
            if economy.utility(a, b) > ua:
                vb = payoff(economy, m, b, t)
                if economy.utility(b, a) > vb:
                    return BlockWitness(
                        PAIR,
                        t,
                        (a, b),
                        (economy.utility(a, b), ua, economy.utility(b, a), vb),
                    )
    return None


def is_phi_solution(
    economy: Economy,
    m: DynamicMatching,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
):
    """True, or the first BlockWitness in (period, kind, agent) order."""
    for t in range(1, economy.horizon + 1):
        witness = period_witness(economy, m, t, family, empty_policy)
        if witness is not None:
            return witness
    return True


def _canonical(matchings: Iterable[DynamicMatching]) -> tuple[DynamicMatching, ...]:
    return tuple(sorted(set(matchings), key=lambda m: m.periods))


def phi_solution_set(
    economy: Economy,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
    max_matchings: int = DEFAULT_MAX_MATCHINGS,
) -> tuple[DynamicMatching, ...]:
    """Exhaustive filter of all matchings by the solution conditions."""
    return _canonical(
        m
        for m in enumerate_matchings(economy, max_matchings=max_matchings)
        if is_phi_solution(economy, m, family, empty_policy) is True
    )


def recursive_solution_set(
    economy: Economy,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
    max_matchings: int = DEFAULT_MAX_MATCHINGS,
    _cache: Optional[dict] = None,
) -> tuple[DynamicMatching, ...]:
    """Same set, computed by period-1 conditions plus solved continuations.

    An independent route to :func:`phi_solution_set`, used as an oracle:
    instead of filtering full matchings, it stitches each feasible first
    period onto the recursively solved continuation economy.
    """
    if _cache is None:
        _cache = {}
    key = economy.key
    if key in _cache:
        return _cache[key]
    if economy.horizon == 0:
        result = (DynamicMatching(()),)
    else:
        out = []
        a1, b1 = economy.arrivals[0]
        for p1 in period_matchings(a1, b1):
            prefix = DynamicMatching((p1,))
            if economy.horizon == 1:
                stitched = [prefix]
            else:
                h1 = History(economy, prefix)
                e2 = continuation_economy(economy, h1)
                stitched = [
                    lift(economy, h1, cont)
                    for cont in recursive_solution_set(
                        e2, family, empty_policy, max_matchings, _cache
                    )
                ]
            for m in stitched:
                if period_witness(economy, m, 1, family, empty_policy) is None:
                    out.append(m)
        result = _canonical(out)
    _cache[key] = result
    return result


_stable_cache: dict = {}


def stable_set_checked(e1: StaticEconomy):
    """Memoized exhaustive stable set with the same-unmatched-set assertion."""
    if e1 not in _stable_cache:
        _stable_cache[e1] = checked_stable_set(e1)
    return _stable_cache[e1]


def candidate_set(
    economy: Economy,
    conjectured: Mapping[str, Iterable[DynamicMatching]],
    continuation_solutions: Callable[[Economy], Iterable[DynamicMatching]],
    empty_policy: str = "vacuous",
) -> tuple[DynamicMatching, ...]:
    """Stable first periods of the induced economy, stitched to solved
    continuations.  ``conjectured`` maps each period-1 agent to the matchings
    backing their reservation value."""
    if economy.horizon == 0:
        return (DynamicMatching(()),)
    h0 = initial_history(economy)
    e1 = induced_one_period_economy(economy, h0, conjectured, empty_policy)
    out = []
    for m1 in stable_set_checked(e1):
        prefix = DynamicMatching((m1,))
        if economy.horizon == 1:
            out.append(prefix)
            continue
        h1 = History(economy, prefix)
        e2 = continuation_economy(economy, h1)
        sols = tuple(continuation_solutions(e2))
        if not sols:
            raise EmptyContinuationSolutions(
                f"no continuation solutions after first period {m1}"
            )
        out.extend(lift(economy, h1, cont) for cont in sols)
    return _canonical(out)


def candidate_set_for_family(
    economy: Economy,
    family: ConjectureFamily,
    engine: ConceptEngine,
    empty_policy: str = "vacuous",
) -> tuple[DynamicMatching, ...]:
    h0 = initial_history(economy)
    avail_a, avail_b = available_agents(economy, h0)
    conjectured = {
        k: family.conjecture_set(economy, h0, k) for k in (*avail_a, *avail_b)
    }
    return candidate_set(economy, conjectured, engine.solution_set, empty_policy)


def candidate_matchings(
    economy: Economy,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
    max_matchings: int = DEFAULT_MAX_MATCHINGS,
) -> tuple[DynamicMatching, ...]:
    """Matchings whose newly formed pairs are stable in the induced economy
    of every period — the non-recursive candidate set."""
    out = []
    for m in enumerate_matchings(economy, max_matchings=max_matchings):
        if all(
            m.formed_at(t)
            in stable_set_checked(
                induced_economy_at(economy, History(economy, m.prefix(t)), family, empty_policy)
            )
            for t in range(1, economy.horizon + 1)
        ):
            out.append(m)
    return _canonical(out)


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Pass/fail plus every (period, agent[, matching]) where an unmatched
    agent's own conjecture set omits the matching under test."""

    passed: bool
    failures: tuple

    def __bool__(self) -> bool:
        return self.passed


def _unmatched_available(economy: Economy, m: DynamicMatching, t: int):
    h = History(economy, m.prefix(t))
    avail_a, avail_b = available_agents(economy, h)
    for k in (*avail_a, *avail_b):
        if m.partner(k, t) == k:
            yield h, k


def consistency_failures(
    economy: Economy, m_star: DynamicMatching, family: ConjectureFamily
) -> tuple[tuple[int, str], ...]:
    failures = []
    for t in range(1, economy.horizon + 1):
        for h, k in _unmatched_available(economy, m_star, t):
            if m_star not in family.conjecture_set(economy, h, k):
                failures.append((t, k))
    return tuple(failures)


def check_consistency(
    economy: Economy,
    m_star: DynamicMatching,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
    max_matchings: int = DEFAULT_MAX_MATCHINGS,
) -> ConsistencyVerdict:
    """Does every agent the candidate leaves unmatched conjecture it?"""
    if m_star not in candidate_matchings(economy, family, empty_policy, max_matchings):
        raise NotACandidate("matching is not in the candidate set")
    failures = consistency_failures(economy, m_star, family)
    return ConsistencyVerdict(not failures, failures)


def check_generalized_consistency(
    economy: Economy,
    family: ConjectureFamily,
    empty_policy: str = "vacuous",
    max_matchings: int = DEFAULT_MAX_MATCHINGS,
) -> ConsistencyVerdict:
    """The same requirement quantified over every solution, not candidates."""
    failures = []
    for m in phi_solution_set(economy, family, empty_policy, max_matchings):
        for t in range(1, economy.horizon + 1):
            for h, k in _unmatched_available(economy, m, t):
                if m not in family.conjecture_set(economy, h, k):
                    failures.append((m, t, k))
    return ConsistencyVerdict(not failures, tuple(failures))
