"""Economies, agents, arrivals, and discounted payoffs.

All utilities and discount factors are exact rationals; the solver never
touches floating point, so set membership defined by strict or weak
inequalities is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import NotAvailable, UnknownAgent

if TYPE_CHECKING:  # pragma: no cover
    from .matching import DynamicMatching

SIDE_A = "A"
SIDE_B = "B"

# Partners an agent never listed are unacceptable by convention: strictly
# below the payoff of remaining single, above nothing that is listed.
UNLISTED_UTILITY = Fraction(-1)


@dataclass(frozen=True, order=True)
class AgentId:
    side: str
    name: str

    def __post_init__(self):
        if self.side not in (SIDE_A, SIDE_B):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")
        if not self.name:
            raise ValueError("agent name must be nonempty")


@dataclass(frozen=True)
class PreferenceProfile:
    """Per-agent discount factors and partner utilities.

    ``utilities`` maps (owner, partner) name pairs to exact rationals; the
    payoff of remaining single is normalized to 0 and never stored.
    Partners without an entry get :data:`UNLISTED_UTILITY`.
    """

    deltas: tuple[tuple[str, Fraction], ...]
    utilities: tuple[tuple[tuple[str, str], Fraction], ...]
    _delta_map: Mapping[str, Fraction] = field(
        init=False, repr=False, compare=False, default=None
    )
    _util_map: Mapping[tuple[str, str], Fraction] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        for name, d in self.deltas:
            if not (0 <= d <= 1):
                raise ValueError(f"discount factor of {name} must lie in [0,1]")
        object.__setattr__(self, "_delta_map", dict(self.deltas))
        object.__setattr__(self, "_util_map", dict(self.utilities))

    @staticmethod
    def build(
        deltas: Mapping[str, Fraction],
        utilities: Mapping[tuple[str, str], Fraction],
    ) -> "PreferenceProfile":
        return PreferenceProfile(
            deltas=tuple(sorted(deltas.items())),
            utilities=tuple(sorted(utilities.items())),
        )

    def delta(self, name: str) -> Fraction:
        try:
            return self._delta_map[name]
        except KeyError:
            raise UnknownAgent(name) from None

    def utility(self, owner: str, partner: str) -> Fraction:
        if owner == partner:
            return Fraction(0)
        return self._util_map.get((owner, partner), UNLISTED_UTILITY)


@dataclass(frozen=True)
class Economy:
    """A finite-horizon arrival schedule plus a preference profile.

    ``arrivals[t-1]`` is the pair of name tuples (side A, side B) entering in
    period t, listed in declaration order.  Continuation and deferred
    economies share the root profile; the arrival schedule alone determines
    who exists.
    """

    horizon: int
    arrivals: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    profile: PreferenceProfile

    def __post_init__(self):
        if self.horizon < 0 or len(self.arrivals) != self.horizon:
            raise ValueError("arrival schedule length must equal the horizon")
        seen: set[str] = set()
        for a_names, b_names in self.arrivals:
            for name in (*a_names, *b_names):
                if name in seen:
                    raise ValueError(f"agent {name} arrives more than once")
                seen.add(name)

    @property
    def key(self) -> tuple:
        """Canonical memoization key; sorted so declaration order is ignored."""
        return (
            self.horizon,
            tuple(
                (tuple(sorted(a)), tuple(sorted(b))) for a, b in self.arrivals
            ),
            self.profile,
        )

    def side_a(self) -> tuple[str, ...]:
        return tuple(n for a, _ in self.arrivals for n in a)

    def side_b(self) -> tuple[str, ...]:
        return tuple(n for _, b in self.arrivals for n in b)

    def members(self) -> tuple[str, ...]:
        return tuple(n for a, b in self.arrivals for n in (*a, *b))

    def side_of(self, name: str) -> str:
        if name in self._side_map():
            return self._side_map()[name]
        raise UnknownAgent(name)

    def _side_map(self) -> dict[str, str]:
        cache = getattr(self, "_sides", None)
        if cache is None:
            cache = {}
            for a_names, b_names in self.arrivals:
                for n in a_names:
                    cache[n] = SIDE_A
                for n in b_names:
                    cache[n] = SIDE_B
            object.__setattr__(self, "_sides", cache)
        return cache

    def agent(self, name: str) -> AgentId:
        return AgentId(self.side_of(name), name)

    def arrival_period(self, name: str) -> int:
        for t, (a_names, b_names) in enumerate(self.arrivals, start=1):
            if name in a_names or name in b_names:
                return t
        raise UnknownAgent(name)

    def arrived_by(self, t: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Cumulative arrivals through period t, in declaration order."""
        a_acc: list[str] = []
        b_acc: list[str] = []
        for a_names, b_names in self.arrivals[:t]:
            a_acc.extend(a_names)
            b_acc.extend(b_names)
        return tuple(a_acc), tuple(b_acc)

    def utility(self, owner: str, partner: str) -> Fraction:
        """Static utility of ``owner`` for ``partner`` (0 for self)."""
        self.side_of(owner)
        if owner != partner:
            side_o = self.side_of(owner)
            side_p = self.side_of(partner)
            if side_o == side_p:
                raise ValueError(f"{owner} and {partner} are on the same side")
        return self.profile.utility(owner, partner)

    def delta(self, name: str) -> Fraction:
        self.side_of(name)
        return self.profile.delta(name)


def build_economy(
    horizon: int,
    arrivals: Iterable[tuple[Iterable[str], Iterable[str]]],
    deltas: Mapping[str, Fraction],
    utilities: Mapping[tuple[str, str], Fraction],
) -> Economy:
    """Convenience constructor used by tests and the DSL."""
    schedule = tuple((tuple(a), tuple(b)) for a, b in arrivals)
    return Economy(horizon, schedule, PreferenceProfile.build(deltas, utilities))


def first_match_date(
    economy: Economy, m: "DynamicMatching", k: str, t: int
) -> int:
    """First period s >= t at which k is matched under m; horizon if never."""
    _require_available(economy, m, k, t)
    for s in range(t, economy.horizon + 1):
        if m.partner(k, s) != k:
            return s
    return economy.horizon


def payoff(economy: Economy, m: "DynamicMatching", k: str, t: int) -> Fraction:
    """Exact discounted payoff of agent k from matching m, seen from period t."""
    date = first_match_date(economy, m, k, t)
    partner = m.final_partner(k)
    util = economy.utility(k, partner)
    if util == 0:
        return Fraction(0)
    return economy.delta(k) ** (date - t) * util


def is_individually_rational(economy: Economy, m: "DynamicMatching") -> bool:
    """No agent ends up with a partner worse than staying single."""
    return all(
        economy.utility(k, m.final_partner(k)) >= 0 for k in economy.members()
    )


def _require_available(economy: Economy, m: "DynamicMatching", k: str, t: int):
    economy.side_of(k)  # raises UnknownAgent
    if economy.arrival_period(k) > t:
        raise NotAvailable(f"{k} has not arrived by period {t}")
    if t > 1 and m.partner(k, t - 1) != k:
        raise NotAvailable(f"{k} is already matched before period {t}")
