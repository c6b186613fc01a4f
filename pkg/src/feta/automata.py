"""Transition-system core: plain and featured automata.

An `Lts` is a labelled transition system: states, initial states, an action
alphabet and a set of (source, label, target) triples. An `Fts` attaches a
feature space, a feature model and a guard (feature expression) to every
transition; projecting it onto a product keeps exactly the transitions whose
guard the product satisfies, over the unchanged state set.

Component automata split the alphabet into inputs and outputs. Composite
automata built in `system` and `team` reuse these classes with tuple states
and structured labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .errors import InvalidProductError, SpecificationError
from .features import FeatureExpr, FeatureSpace, Product, evaluate, variables


def state_key(state):
    """Sort key usable for both plain state names and composite state tuples."""
    return state if isinstance(state, tuple) else (state,)


def label_key(label):
    """Sort key usable for both action names and structured labels."""
    sort = getattr(label, "sort_key", None)
    return sort() if callable(sort) else (label, (), ())


def transition_key(transition):
    src, label, dst = transition
    return (state_key(src), label_key(label), state_key(dst))


def label_action(label) -> str:
    """The action name of a transition label (the label itself for components)."""
    return getattr(label, "action", label)


@dataclass(eq=False)
class Lts:
    """A labelled transition system over hashable states and labels."""

    states: tuple
    initial: frozenset
    actions: frozenset
    transitions: tuple

    def __post_init__(self) -> None:
        states = tuple(sorted(set(self.states), key=state_key))
        self.states = states
        self.initial = frozenset(self.initial)
        self.actions = frozenset(self.actions)
        self.transitions = tuple(sorted(set(self.transitions), key=transition_key))
        known = set(states)
        if not self.initial <= known:
            raise SpecificationError(f"initial states {sorted(self.initial - known, key=state_key)} not declared")
        for src, label, dst in self.transitions:
            if src not in known or dst not in known:
                raise SpecificationError(f"transition {src} -> {dst} uses undeclared states")
            if label_action(label) not in self.actions:
                raise SpecificationError(f"transition uses undeclared action {label_action(label)!r}")

    @cached_property
    def _adjacency(self) -> dict:
        out: dict = {q: [] for q in self.states}
        for t in self.transitions:
            out[t[0]].append(t)
        return out

    def successors_from(self, state) -> tuple:
        """Transitions leaving the state, in deterministic order."""
        try:
            return tuple(self._adjacency[state])
        except KeyError:
            raise SpecificationError(f"unknown state {state!r}") from None

    def enabled(self, state, label) -> bool:
        """Whether some transition from the state carries the label.

        For component automata the label is the action name; a name outside
        the alphabet is simply not enabled.
        """
        if state not in self._adjacency:
            raise SpecificationError(f"unknown state {state!r}")
        return any(t[1] == label for t in self._adjacency[state])

    def reachable(self) -> frozenset:
        """States reachable from the initial states."""
        seen = set(self.initial)
        frontier = sorted(self.initial, key=state_key)
        while frontier:
            nxt = []
            for q in frontier:
                for _, _, dst in self._adjacency[q]:
                    if dst not in seen:
                        seen.add(dst)
                        nxt.append(dst)
            frontier = sorted(set(nxt), key=state_key)
        return frozenset(seen)


@dataclass(eq=False)
class Component(Lts):
    """A component automaton: an LTS whose alphabet is split into inputs and outputs."""

    inputs: frozenset
    outputs: frozenset

    def __post_init__(self) -> None:
        super().__post_init__()
        self.inputs = frozenset(self.inputs)
        self.outputs = frozenset(self.outputs)
        overlap = self.inputs & self.outputs
        if overlap:
            raise SpecificationError(f"actions {sorted(overlap)} declared both input and output")
        if self.inputs | self.outputs != self.actions:
            raise SpecificationError("alphabet must equal inputs plus outputs")


@dataclass(eq=False)
class Fts(Lts):
    """A featured LTS: every transition carries a feature-expression guard."""

    space: FeatureSpace
    feature_model: FeatureExpr
    guards: Mapping

    def __post_init__(self) -> None:
        super().__post_init__()
        self.guards = dict(self.guards)
        missing = set(self.transitions) - set(self.guards)
        if missing:
            raise SpecificationError(f"{len(missing)} transitions have no guard")
        for t, g in self.guards.items():
            unknown = variables(g) - set(self.space.names)
            if unknown:
                raise SpecificationError(
                    f"guard of {t!r} references undeclared features {sorted(unknown)}"
                )

    def guard(self, transition) -> FeatureExpr:
        return self.guards[transition]

    def _check_product(self, product: Product) -> None:
        if product.space != self.space:
            raise InvalidProductError(f"product {product} is over a different feature space")
        if not evaluate(self.feature_model, product):
            raise InvalidProductError(f"product {product} does not satisfy the feature model")

    def realisable(self, transition, product: Product) -> bool:
        """Whether the product satisfies the transition's guard."""
        return evaluate(self.guards[transition], product)

    def _projected_parts(self, product: Product):
        self._check_product(product)
        kept = tuple(t for t in self.transitions if evaluate(self.guards[t], product))
        return self.states, self.initial, self.actions, kept

    def project(self, product: Product) -> Lts:
        """The behaviour of one valid product: same states, guarded transitions kept."""
        return Lts(*self._projected_parts(product))


@dataclass(eq=False)
class FeaturedComponent(Fts):
    """A featured component automaton: a featured LTS with an input/output split."""

    inputs: frozenset
    outputs: frozenset

    def __post_init__(self) -> None:
        super().__post_init__()
        self.inputs = frozenset(self.inputs)
        self.outputs = frozenset(self.outputs)
        overlap = self.inputs & self.outputs
        if overlap:
            raise SpecificationError(f"actions {sorted(overlap)} declared both input and output")
        if self.inputs | self.outputs != self.actions:
            raise SpecificationError("alphabet must equal inputs plus outputs")

    def project(self, product: Product) -> Component:
        states, initial, actions, kept = self._projected_parts(product)
        return Component(states, initial, actions, kept, self.inputs, self.outputs)
