"""Line-oriented textual economy format (``.econ``) and its ordinal oracle.

Grammar (one statement per line, ``#`` starts a comment)::

    periods: <T>
    agent <name> side <A|B> arrives <t> delta <p/q>
    prefs <name>: <partner>=<p/q> <partner>=<p/q> ...
    ordinal <name>: (<partner>,<delay>) (<partner>,<delay>) ...

Cardinal utilities are the source of truth.  Ordinal blocks are assertions:
each block claims a strictly decreasing ranking of discounted utilities
``delta^delay * u(owner, partner)``, checked by :func:`validate_ordinal`.
Partners missing from a prefs line are unacceptable (utility -1).  Rationals
are written ``p/q`` or as integers; no decimal literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .economy import Economy, PreferenceProfile
from .errors import (
    ArrivalOutOfRange,
    BadRational,
    DslSyntaxError,
    DuplicateAgent,
    OrdinalViolation,
    UnknownPartner,
)

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _parse_rational(token: str, line: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise BadRational(f"expected an integer or p/q rational, got {token!r}", line)
    return Fraction(token)


@dataclass(frozen=True)
class AgentDecl:
    name: str
    side: str
    arrives: int
    delta: Fraction


@dataclass(frozen=True)
class EconomyDocument:
    """Parsed form of one ``.econ`` file, already canonically ordered."""

    horizon: int
    agents: tuple[AgentDecl, ...]
    prefs: tuple[tuple[str, tuple[tuple[str, Fraction], ...]], ...]
    ordinals: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]

    def to_economy(self) -> Economy:
        arrivals = []
        for t in range(1, self.horizon + 1):
            a_t = tuple(d.name for d in self.agents if d.side == "A" and d.arrives == t)
            b_t = tuple(d.name for d in self.agents if d.side == "B" and d.arrives == t)
            arrivals.append((a_t, b_t))
        deltas = {d.name: d.delta for d in self.agents}
        utilities = {
            (owner, partner): value
            for owner, entries in self.prefs
            for partner, value in entries
        }
        return Economy(
            self.horizon, tuple(arrivals), PreferenceProfile.build(deltas, utilities)
        )


def parse(text: str) -> EconomyDocument:
    horizon = None
    agents: list[AgentDecl] = []
    sides: dict[str, str] = {}
    prefs: dict[str, tuple[tuple[str, Fraction], ...]] = {}
    ordinals: dict[str, tuple[tuple[str, int], ...]] = {}
    pref_owners: list[str] = []
    ordinal_owners: list[str] = []
    pending: list[tuple[int, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if horizon is None:
            mt = re.match(r"^periods:\s*(\d+)$", line)
            if not mt:
                raise DslSyntaxError("first statement must be 'periods: <T>'", lineno)
            horizon = int(mt.group(1))
            if horizon < 1:
                raise DslSyntaxError("periods must be at least 1", lineno)
            continue
        if line.startswith("agent "):
            mt = re.match(
                r"^agent\s+(\S+)\s+side\s+(\S+)\s+arrives\s+(\d+)\s+delta\s+(\S+)$",
                line,
            )
            if not mt:
                raise DslSyntaxError(
                    "expected 'agent <name> side <A|B> arrives <t> delta <p/q>'",
                    lineno,
                )
            name, side, arrives, delta = mt.groups()
            if not _NAME.match(name):
                raise DslSyntaxError(f"bad agent name {name!r}", lineno)
            if side not in ("A", "B"):
                raise DslSyntaxError(f"side must be A or B, got {side!r}", lineno)
            if name in sides:
                raise DuplicateAgent(f"agent {name} declared twice", lineno)
            t = int(arrives)
            if not 1 <= t <= horizon:
                raise ArrivalOutOfRange(
                    f"agent {name} arrives at {t}, outside 1..{horizon}", lineno
                )
            agents.append(AgentDecl(name, side, t, _parse_rational(delta, lineno)))
            sides[name] = side
        elif line.startswith("prefs ") or line.startswith("ordinal "):
            pending.append((lineno, line))
        else:
            raise DslSyntaxError(f"unrecognized statement {line!r}", lineno)

    if horizon is None:
        raise DslSyntaxError("missing 'periods:' header", 1)

    def check_partner(owner: str, partner: str, lineno: int):
        if partner not in sides:
            raise UnknownPartner(f"{partner} is not a declared agent", lineno)
        if sides[partner] == sides[owner]:
            raise UnknownPartner(
                f"{partner} is on {owner}'s own side", lineno
            )

    for lineno, line in pending:
        if line.startswith("prefs "):
            mt = re.match(r"^prefs\s+(\S+?):\s*(.*)$", line)
            if not mt:
                raise DslSyntaxError("expected 'prefs <name>: <partner>=<p/q> ...'", lineno)
            owner, body = mt.groups()
            if owner not in sides:
                raise UnknownPartner(f"{owner} is not a declared agent", lineno)
            if owner in prefs:
                raise DuplicateAgent(f"prefs for {owner} given twice", lineno)
            entries = []
            seen = set()
            for token in body.split():
                me = re.match(r"^(\S+)=(\S+)$", token)
                if not me:
                    raise DslSyntaxError(f"bad preference entry {token!r}", lineno)
                partner, value = me.groups()
                check_partner(owner, partner, lineno)
                if partner in seen:
                    raise DuplicateAgent(
                        f"{partner} listed twice in prefs of {owner}", lineno
                    )
                seen.add(partner)
                entries.append((partner, _parse_rational(value, lineno)))
            # Canonical order: utility descending, then partner name.
            entries.sort(key=lambda e: (-e[1], e[0]))
            prefs[owner] = tuple(entries)
            pref_owners.append(owner)
        else:
            mt = re.match(r"^ordinal\s+(\S+?):\s*(.*)$", line)
            if not mt:
                raise DslSyntaxError(
                    "expected 'ordinal <name>: (<partner>,<d>) ...'", lineno
                )
            owner, body = mt.groups()
            if owner not in sides:
                raise UnknownPartner(f"{owner} is not a declared agent", lineno)
            if owner in ordinals:
                raise DuplicateAgent(f"ordinal block for {owner} given twice", lineno)
            entries = []
            for token in body.split():
                me = re.match(r"^\((\S+?),(\d+)\)$", token)
                if not me:
                    raise DslSyntaxError(f"bad ordinal entry {token!r}", lineno)
                partner, delay = me.groups()
                check_partner(owner, partner, lineno)
                entries.append((partner, int(delay)))
            ordinals[owner] = tuple(entries)
            ordinal_owners.append(owner)

    order = {d.name: i for i, d in enumerate(agents)}
    return EconomyDocument(
        horizon=horizon,
        agents=tuple(agents),
        prefs=tuple((o, prefs[o]) for o in sorted(pref_owners, key=order.get)),
        ordinals=tuple((o, ordinals[o]) for o in sorted(ordinal_owners, key=order.get)),
    )


def serialize(doc: EconomyDocument) -> str:
    lines = [f"periods: {doc.horizon}"]
    for d in doc.agents:
        lines.append(
            f"agent {d.name} side {d.side} arrives {d.arrives} delta {d.delta}"
        )
    for owner, entries in doc.prefs:
        body = " ".join(f"{p}={v}" for p, v in entries)
        lines.append(f"prefs {owner}: {body}")
    for owner, entries in doc.ordinals:
        body = " ".join(f"({p},{d})" for p, d in entries)
        lines.append(f"ordinal {owner}: {body}")
    return "\n".join(lines) + "\n"


def canonical_text(text: str) -> str:
    return serialize(parse(text))


def validate_ordinal(economy: Economy, doc: EconomyDocument) -> None:
    """Assert each ordinal block's strictly decreasing discounted utilities."""
    for owner, entries in doc.ordinals:
        delta = economy.delta(owner)
        for (p1, d1), (p2, d2) in zip(entries, entries[1:]):
            lhs = delta**d1 * economy.utility(owner, p1)
            rhs = delta**d2 * economy.utility(owner, p2)
            if not lhs > rhs:
                raise OrdinalViolation(owner, (p1, d1), (p2, d2), lhs, rhs)


def load(path) -> EconomyDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
