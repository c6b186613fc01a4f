"""Receptiveness of one team: are willing senders ever left hanging?

At every reachable team state, any group of components that is locally ready
to send an action the specification expects to be received forms a
receptiveness requirement. The team complies with a requirement if it can
let exactly that group send to at least one receiver right away; it complies
weakly if the rest of the team can first do some finite warm-up that does
not involve the group, after which the send goes through. A team is
receptive when every requirement is met, in the strict or the weak sense.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .automata import Lts, state_key
from .errors import ResourceLimitError, SpecificationError
from .synctypes import SyncTypeSpec
from .system import DEFAULT_PARTICIPANT_LIMIT, System, SystemTransition

STRICT = "strict"
WEAK = "weak"

COMPLIANT = "compliant"
WEAKLY_COMPLIANT = "weakly-compliant"
VIOLATED = "violated"


@dataclass(frozen=True)
class Requirement:
    """A group of ready senders and the action they want received, at a state."""

    state: tuple
    senders: frozenset[str]
    action: str

    def sort_key(self):
        return (state_key(self.state), self.action, tuple(sorted(self.senders)))

    def __str__(self) -> str:
        group = ",".join(sorted(self.senders))
        st = "(" + ",".join(self.state) + ")"
        return f"rcp({{{group}}}, {self.action}) @ {st}"


@dataclass(frozen=True)
class ComplianceVerdict:
    """How one requirement fared; the witness is a path ending in the send."""

    requirement: Requirement
    status: str
    witness: tuple[SystemTransition, ...] | None


@dataclass(frozen=True)
class ReceptivenessReport:
    mode: str
    entries: tuple[ComplianceVerdict, ...]
    warnings: tuple[str, ...]

    @property
    def holds(self) -> bool:
        if self.mode == STRICT:
            return all(e.status == COMPLIANT for e in self.entries)
        return all(e.status != VIOLATED for e in self.entries)

    @property
    def violations(self) -> tuple[ComplianceVerdict, ...]:
        if self.mode == STRICT:
            return tuple(e for e in self.entries if e.status != COMPLIANT)
        return tuple(e for e in self.entries if e.status == VIOLATED)


def _check_mode(mode: str) -> None:
    if mode not in (STRICT, WEAK):
        raise SpecificationError(f"unknown receptiveness mode {mode!r}")


def derive_requirements(
    team: Lts,
    spec: SyncTypeSpec,
    sys: System,
    max_group: int = DEFAULT_PARTICIPANT_LIMIT,
) -> tuple[Requirement, ...]:
    """All requirements at the team's reachable states.

    A group qualifies when each member outputs the action and is locally
    ready for it, the group size fits the action's sender interval, and the
    receiver interval does not admit zero receivers (otherwise nobody owes
    the group a reception).
    """
    out: list[Requirement] = []
    for q in sorted(team.reachable(), key=state_key):
        for action in sorted(sys.actions):
            st = spec.for_action(action)
            if st.receivers.contains(0):
                continue
            ready = [
                name
                for idx, name in enumerate(sys.names)
                if action in sys.components[name].outputs
                and sys.components[name].enabled(q[idx], action)
            ]
            if len(ready) > max_group:
                raise ResourceLimitError(
                    f"{len(ready)} ready senders for {action!r}, above the bound {max_group}"
                )
            for size in range(1, len(ready) + 1):
                if not st.senders.contains(size):
                    continue
                for group in itertools.combinations(ready, size):
                    out.append(Requirement(q, frozenset(group), action))
    out.sort(key=Requirement.sort_key)
    return tuple(out)


def _immediate_witness(team: Lts, state, req: Requirement) -> SystemTransition | None:
    for t in team.successors_from(state):
        label = t[1]
        if label.action == req.action and label.senders == req.senders and label.receivers:
            return t
    return None


def check_compliance(team: Lts, req: Requirement) -> ComplianceVerdict:
    """Can exactly this group send right now, with someone receiving?"""
    witness = _immediate_witness(team, req.state, req)
    if witness is None:
        return ComplianceVerdict(req, VIOLATED, None)
    return ComplianceVerdict(req, COMPLIANT, (witness,))


def check_weak_compliance(team: Lts, req: Requirement) -> ComplianceVerdict:
    """Breadth-first search for a group-free warm-up after which the send works.

    Returns the shortest witness path; a requirement met immediately counts
    as compliant with an empty warm-up.
    """
    parents: dict = {req.state: None}
    queue = deque((req.state,))
    while queue:
        state = queue.popleft()
        witness = _immediate_witness(team, state, req)
        if witness is not None:
            path = [witness]
            cursor = state
            while parents[cursor] is not None:
                step = parents[cursor]
                path.append(step)
                cursor = step[0]
            path.reverse()
            status = COMPLIANT if len(path) == 1 else WEAKLY_COMPLIANT
            return ComplianceVerdict(req, status, tuple(path))
        for t in team.successors_from(state):
            if t[1].participants() & req.senders:
                continue
            if t[2] not in parents:
                parents[t[2]] = t
                queue.append(t[2])
    return ComplianceVerdict(req, VIOLATED, None)


def check_receptiveness(
    team: Lts,
    spec: SyncTypeSpec,
    sys: System,
    mode: str = STRICT,
    max_group: int = DEFAULT_PARTICIPANT_LIMIT,
) -> ReceptivenessReport:
    """Verdict over all requirements, in strict or weak mode."""
    _check_mode(mode)
    warnings_: list[str] = []
    if not team.initial:
        warnings_.append("team has no initial states; receptiveness holds vacuously")
    entries = []
    for req in derive_requirements(team, spec, sys, max_group):
        verdict = check_compliance(team, req)
        if verdict.status == VIOLATED:
            verdict = check_weak_compliance(team, req)
        entries.append(verdict)
    return ReceptivenessReport(mode, tuple(entries), tuple(warnings_))
