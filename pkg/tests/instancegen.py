"""Seeded random featured systems and specifications for the property suites.

Instances are kept deliberately small (up to 3 components, 3 states each,
3 actions, 3 features) so that whole-family checks against every product
stay cheap. Every instance is closed by construction and its specification
is total thanks to a final catch-all rule.
"""

from __future__ import annotations

import dataclasses
import random
import warnings

from feta import (
    TRUE,
    And,
    FeaturedComponent,
    FeaturedSyncSpec,
    FeaturedSystem,
    FeatureExpr,
    FeatureSpace,
    Interval,
    Not,
    Or,
    SyncRule,
    SyncType,
    Var,
    valid_products,
)


def random_guard(rng: random.Random, names) -> FeatureExpr:
    roll = rng.random()
    if roll < 0.35:
        return TRUE
    first = Var(rng.choice(names))
    if roll < 0.6:
        return first
    if roll < 0.75:
        return Not(first)
    second = Var(rng.choice(names))
    if rng.random() < 0.5:
        second = Not(second)
    shape = And if rng.random() < 0.5 else Or
    return shape((first, second))


def random_model(rng: random.Random, space: FeatureSpace) -> FeatureExpr:
    if rng.random() < 0.4:
        return TRUE
    model = random_guard(rng, space.names)
    if not valid_products(model, space):
        return TRUE
    return model


def random_sync_type(rng: random.Random) -> SyncType:
    send_lo = 1 if rng.random() < 0.7 else 2
    send_hi = rng.choice([send_lo, send_lo + 1, None])
    recv_lo = rng.randint(0, 1)
    recv_hi = rng.choice([max(recv_lo, 1), recv_lo + 1, None])
    return SyncType(Interval(send_lo, send_hi), Interval(recv_lo, recv_hi))


def random_instance(seed: int) -> tuple[FeaturedSystem, FeaturedSyncSpec]:
    rng = random.Random(seed)
    space = FeatureSpace.of(*[f"f{i + 1}" for i in range(rng.randint(1, 3))])
    model = random_model(rng, space)
    actions = [f"a{i + 1}" for i in range(rng.randint(1, 3))]
    count = rng.randint(2, 3)
    names = tuple(f"C{i + 1}" for i in range(count))

    # Every action gets one fixed sender and one distinct receiver so the
    # system is closed; the remaining components take a random role or none.
    direction: dict[tuple[int, str], str | None] = {}
    for action in actions:
        sender = rng.randrange(count)
        receiver = rng.choice([i for i in range(count) if i != sender])
        for i in range(count):
            if i == sender:
                direction[(i, action)] = "out"
            elif i == receiver:
                direction[(i, action)] = "in"
            else:
                direction[(i, action)] = rng.choice([None, "in", "out"])

    components = {}
    for i, name in enumerate(names):
        states = tuple(f"s{k}" for k in range(rng.randint(1, 3)))
        alphabet = [a for a in actions if direction[(i, a)]]
        transitions: dict = {}
        for src in states:
            for _ in range(rng.randint(1, 2)):
                if not alphabet:
                    break
                action = rng.choice(alphabet)
                dst = rng.choice(states)
                transitions[(src, action, dst)] = random_guard(rng, space.names)
        components[name] = FeaturedComponent(
            states=states,
            initial=frozenset({states[0]}),
            actions=frozenset(alphabet),
            transitions=tuple(transitions),
            space=space,
            feature_model=model,
            guards=transitions,
            inputs=frozenset(a for a in alphabet if direction[(i, a)] == "in"),
            outputs=frozenset(a for a in alphabet if direction[(i, a)] == "out"),
        )

    fsys = FeaturedSystem(names, components, space, model)
    rules = []
    for _ in range(rng.randint(0, 2)):
        chosen = frozenset(rng.sample(actions, rng.randint(1, len(actions))))
        rules.append(SyncRule(random_guard(rng, space.names), chosen, random_sync_type(rng)))
    rules.append(SyncRule(TRUE, None, random_sync_type(rng)))
    fspec = FeaturedSyncSpec(tuple(rules), frozenset(actions), space, model)
    return fsys, fspec


def instances(count: int, first_seed: int = 1000):
    for offset in range(count):
        yield first_seed + offset, random_instance(first_seed + offset)


@dataclasses.dataclass
class BatteryResults:
    """Outcome of running every cross-check over the random instances.

    Each failure list holds (seed, detail) pairs; an empty list means the
    property held on every instance. All satisfiability queries go through
    one cross-checking backend, so a disagreement between the enumerative
    and the SAT backend raises instead of being recorded.
    """

    instances: int = 0
    requirements: int = 0
    queries: int = 0
    projection_failures: list = dataclasses.field(default_factory=list)
    requirement_projection_failures: list = dataclasses.field(default_factory=list)
    unfolding_failures: list = dataclasses.field(default_factory=list)
    family_strict_failures: list = dataclasses.field(default_factory=list)
    family_weak_failures: list = dataclasses.field(default_factory=list)
    guard_model_failures: list = dataclasses.field(default_factory=list)
    reachability_failures: list = dataclasses.field(default_factory=list)
    monotonicity_failures: list = dataclasses.field(default_factory=list)


def run_battery(count: int = 200, first_seed: int = 1000) -> BatteryResults:
    from feta import (
        OpenSystemWarning,
        build_featured_team,
        build_team,
        check_compliance,
        check_projection_commutes,
        check_weak_compliance,
        crosscheck_compliance_unfolding,
        crosscheck_family_vs_products,
        crosscheck_requirement_projection,
        derive_family_requirements,
        derive_requirements,
        entails,
        reachable_products,
    )
    from feta.features import CrossCheckBackend
    from feta.receptiveness import COMPLIANT, VIOLATED

    backend = CrossCheckBackend()
    results = BatteryResults()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OpenSystemWarning)
        for seed, (fsys, fspec) in instances(count, first_seed):
            results.instances += 1
            team = build_featured_team(fsys, fspec)
            products = valid_products(fsys.feature_model, fsys.space)
            for product in products:
                if not check_projection_commutes(fsys, fspec, product, team).ok:
                    results.projection_failures.append((seed, product))
            for agreement in crosscheck_requirement_projection(fsys, fspec, team, backend):
                if not agreement.ok:
                    results.requirement_projection_failures.append((seed, agreement.product))
            freqs = derive_family_requirements(team, fsys, fspec, backend)
            results.requirements += len(freqs)
            for freq in freqs:
                if not crosscheck_compliance_unfolding(team, freq, backend):
                    results.unfolding_failures.append((seed, freq))
            if not crosscheck_family_vs_products(fsys, fspec, "strict", team, backend).ok:
                results.family_strict_failures.append((seed,))
            if not crosscheck_family_vs_products(fsys, fspec, "weak", team, backend).ok:
                results.family_weak_failures.append((seed,))
            for t in team.transitions:
                if not entails(team.guards[t], team.feature_model, team.space, backend):
                    results.guard_model_failures.append((seed, t))
            for state in team.states:
                symbolic = set(reachable_products(team, state))
                direct = {p for p in products if state in team.project(p).reachable()}
                if symbolic != direct:
                    results.reachability_failures.append((seed, state))
            for product in products:
                sys_p = fsys.project(product)
                spec_p = fspec.project(product)
                team_p = build_team(sys_p, spec_p)
                for req in derive_requirements(team_p, spec_p, sys_p):
                    strict = check_compliance(team_p, req).status
                    weak = check_weak_compliance(team_p, req).status
                    if strict == COMPLIANT and weak == VIOLATED:
                        results.monotonicity_failures.append((seed, req))
    results.queries = backend.queries
    return results
