"""The named solution concepts and the solver facade.

Each concept is a conjecture family paired with a memoized engine:

- ``stable``: myopic conjectures (nobody matches again), i.e. per-period
  individual rationality plus no blocking pair.
- ``agree``: conjectures constrained only to have solution continuations.
- ``re``: rational expectations — an agent's conjectures are the solutions
  of the economy in which that agent's own arrival is deferred one period.
- ``ds``: dynamic stability — conjectured first periods are stable among
  those who match (plain individual rationality), continuations recursively
  dynamically stable.
- ``cvr-ds``: dynamic stability with reservation values raised to each
  agent's own worst-conjecture continuation value, computed as a decreasing
  fixed point.
- ``sds``: sophisticated dynamic stability — deferred-arrival conjectures
  monotonically expanded with candidates that leave the owner unmatched,
  until the set is consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .economy import Economy
from .errors import DynmatchError, EmptyFixedPoint
from .framework import (
    AgreeFamily,
    BlockWitness,
    ConceptEngine,
    ConjectureFamily,
    StableFamily,
    _canonical,
    candidate_matchings,
    candidate_set,
    consistency_failures,
    is_phi_solution,
)
from .matching import (
    DEFAULT_MAX_MATCHINGS,
    DynamicMatching,
    History,
    continuation_economy,
    defer_arrivals,
    enumerate_matchings,
    initial_history,
    restrict,
)
from .statics import conjecture_threshold, stability_among_matched

CONCEPT_NAMES = ("stable", "agree", "re", "ds", "cvr-ds", "sds")


class REFamily(ConjectureFamily):
    """Conjectures of k = solutions of the economy where k arrives a period
    late (with a one-period horizon, where k is absent altogether)."""

    name = "re"

    def __init__(self, empty_policy="vacuous", max_matchings=DEFAULT_MAX_MATCHINGS):
        super().__init__(max_matchings)
        self.engine = ConceptEngine(self, empty_policy, max_matchings)

    def _root_conjectures(self, economy, k):
        # A matching of the deferred economy is literally a matching of the
        # base economy with k unmatched in period 1, and vice versa.
        return self.engine.solution_set(defer_arrivals(economy, [k]))


class DSFamily(ConjectureFamily):
    """First period stable among those who match (thresholds 0),
    continuation recursively in the solution set."""

    name = "ds"

    def __init__(self, empty_policy="vacuous", max_matchings=DEFAULT_MAX_MATCHINGS):
        super().__init__(max_matchings)
        self.engine = ConceptEngine(self, empty_policy, max_matchings)

    def _root_conjectures(self, economy, k):
        out = []
        for mbar in enumerate_matchings(
            economy, unmatched_now=[k], max_matchings=self.max_matchings
        ):
            if not stability_among_matched(economy, mbar.pairs_at(1), {}):
                continue
            if economy.horizon >= 2:
                h1 = History(economy, mbar.prefix(2))
                sols = set(
                    self.engine.solution_set(continuation_economy(economy, h1))
                )
                if restrict(economy, mbar, h1) not in sols:
                    continue
            out.append(mbar)
        return out


class CVRFamily(ConjectureFamily):
    """Like ``ds`` but with thresholds equal to each matched agent's own
    worst-conjecture continuation value; computed as the limit of a
    decreasing iteration over all period-1 agents simultaneously."""

    name = "cvr-ds"

    def __init__(self, empty_policy="vacuous", max_matchings=DEFAULT_MAX_MATCHINGS):
        super().__init__(max_matchings)
        self.empty_policy = empty_policy
        self.engine = ConceptEngine(self, empty_policy, max_matchings)
        self._fp_cache: dict = {}

    def _root_conjectures(self, economy, k):
        return self.fixed_point(economy)[0][k]

    def iterates(self, economy: Economy) -> tuple[dict, ...]:
        return self.fixed_point(economy)[1]

    def fixed_point(self, economy: Economy):
        key = economy.key
        if key in self._fp_cache:
            return self._fp_cache[key]
        a1, b1 = economy.arrivals[0]
        avail = (*a1, *b1)
        h0 = initial_history(economy)

        base: dict[str, tuple[DynamicMatching, ...]] = {}
        for k in avail:
            members = enumerate_matchings(
                economy, unmatched_now=[k], max_matchings=self.max_matchings
            )
            if economy.horizon >= 2:
                kept = []
                for mbar in members:
                    h1 = History(economy, mbar.prefix(2))
                    sols = set(
                        self.engine.solution_set(continuation_economy(economy, h1))
                    )
                    if restrict(economy, mbar, h1) in sols:
                        kept.append(mbar)
                members = tuple(kept)
            base[k] = _canonical(members)

        def refine(current):
            thr = {
                j: conjecture_threshold(
                    economy, h0, j, current[j], self.empty_policy
                )
                for j in avail
            }
            return {
                k: tuple(
                    mbar
                    for mbar in current[k]
                    if stability_among_matched(economy, mbar.pairs_at(1), thr)
                )
                for k in avail
            }

        trace = [base]
        current = base
        while True:
            nxt = refine(current)
            if nxt == current:
                break
            trace.append(nxt)
            current = nxt

        for k in avail:
            if not current[k]:
                raise EmptyFixedPoint(
                    f"conjecture iteration for {k} converged to the empty set"
                )
        # One-shot identity check: filtering the full base by the limit's own
        # thresholds must reproduce the limit exactly.
        thr = {
            j: conjecture_threshold(economy, h0, j, current[j], self.empty_policy)
            for j in avail
        }
        for k in avail:
            recomputed = tuple(
                mbar
                for mbar in base[k]
                if stability_among_matched(economy, mbar.pairs_at(1), thr)
            )
            if recomputed != current[k]:
                raise DynmatchError(
                    f"threshold fixed-point identity violated for {k}"
                )

        result = (current, tuple(trace))
        self._fp_cache[key] = result
        return result


class SDSFamily(ConjectureFamily):
    """Deferred-arrival conjectures expanded, round by round, with the
    candidates (stable induced first period + solved continuation) that
    leave the owner unmatched; stops at the set-inclusion fixed point."""

    name = "sds"

    def __init__(self, empty_policy="vacuous", max_matchings=DEFAULT_MAX_MATCHINGS):
        super().__init__(max_matchings)
        self.empty_policy = empty_policy
        self.engine = ConceptEngine(self, empty_policy, max_matchings)
        self._fp_cache: dict = {}

    def _root_conjectures(self, economy, k):
        return self.fixed_point(economy)[0][k]

    def iterates(self, economy: Economy) -> tuple[dict, ...]:
        return self.fixed_point(economy)[1]

    def fixed_point(self, economy: Economy):
        key = economy.key
        if key in self._fp_cache:
            return self._fp_cache[key]
        a1, b1 = economy.arrivals[0]
        avail = (*a1, *b1)

        current = {
            k: _canonical(self.engine.solution_set(defer_arrivals(economy, [k])))
            for k in avail
        }
        trace = [current]
        while True:
            # One Jacobi round: candidates built from the previous iterate
            # for every agent at once.
            candidates = candidate_set(
                economy, current, self.engine.solution_set, self.empty_policy
            )
            nxt = {
                k: _canonical(
                    current[k]
                    + tuple(m for m in candidates if m.partner(k, 1) == k)
                )
                for k in avail
            }
            if nxt == current:
                break
            trace.append(nxt)
            current = nxt

        result = (current, tuple(trace))
        self._fp_cache[key] = result
        return result


@dataclass(frozen=True)
class SolveReport:
    """Everything one solver run established about an economy and concept."""

    concept: str
    empty_policy: str
    max_matchings: int
    solutions: tuple[DynamicMatching, ...]
    candidates: tuple[DynamicMatching, ...]
    # per candidate: (matching, consistency passed, (period, agent) failures)
    consistency: tuple[tuple[DynamicMatching, bool, tuple], ...]
    # per candidate outside the solution set: its first blocking witness
    witnesses: tuple[tuple[DynamicMatching, BlockWitness], ...]


class Solver:
    """One engine per concept over a shared configuration; all caches live
    for the solver's lifetime, so repeated queries on one economy are cheap."""

    def __init__(self, empty_policy="vacuous", max_matchings=DEFAULT_MAX_MATCHINGS):
        self.empty_policy = empty_policy
        self.max_matchings = max_matchings
        stable = StableFamily(max_matchings)
        stable_engine = ConceptEngine(stable, empty_policy, max_matchings)
        self._engines = {
            "stable": stable_engine,
            "agree": AgreeFamily(empty_policy, max_matchings).engine,
            "re": REFamily(empty_policy, max_matchings).engine,
            "ds": DSFamily(empty_policy, max_matchings).engine,
            "cvr-ds": CVRFamily(empty_policy, max_matchings).engine,
            "sds": SDSFamily(empty_policy, max_matchings).engine,
        }

    def engine(self, concept: str) -> ConceptEngine:
        try:
            return self._engines[concept]
        except KeyError:
            raise ValueError(
                f"unknown concept {concept!r}; expected one of {CONCEPT_NAMES}"
            ) from None

    def family(self, concept: str) -> ConjectureFamily:
        return self.engine(concept).family

    def solution_set(self, concept: str, economy: Economy):
        return self.engine(concept).solution_set(economy)

    def conjectures(self, concept: str, economy: Economy, h: History, k: str):
        return self.family(concept).conjecture_set(economy, h, k)

    def solve(self, concept: str, economy: Economy) -> SolveReport:
        engine = self.engine(concept)
        family = engine.family
        solutions = engine.solution_set(economy)
        candidates = candidate_matchings(
            economy, family, self.empty_policy, self.max_matchings
        )
        consistency = tuple(
            (c, not fails, fails)
            for c in candidates
            for fails in (consistency_failures(economy, c, family),)
        )
        solved = set(solutions)
        witnesses = []
        for c in candidates:
            if c not in solved:
                w = is_phi_solution(economy, c, family, self.empty_policy)
                if w is not True:
                    witnesses.append((c, w))
        return SolveReport(
            concept=concept,
            empty_policy=self.empty_policy,
            max_matchings=self.max_matchings,
            solutions=solutions,
            candidates=candidates,
            consistency=consistency,
            witnesses=tuple(witnesses),
        )
