"""Family-level receptiveness, decided once over the featured team.

A family requirement pairs a sender group and action at a team state with an
application condition: the products in which the group is locally ready (its
guards can fire), the specification expects the send to be received, and the
state is actually reachable. The featured team complies when, within the
condition, some suitably guarded team transition lets the group send; it
complies weakly when every product satisfying the condition has a group-free
warm-up leading to such a send. Deciding this once on the featured team must
agree with checking each valid product's own team separately; the crosscheck
functions at the bottom compare the two routes.
"""

from __future__ import annotations

import itertools
import warnings as _warnings
import weakref
from dataclasses import dataclass

from .automata import Fts, Lts, state_key
from .errors import ResourceLimitError, SpecificationError
from .features import (
    And,
    FeatureExpr,
    Product,
    conj,
    disj,
    entails,
    evaluate,
    format_expr,
    is_satisfiable,
    product_set_expr,
    valid_products,
)
from .receptiveness import (
    STRICT,
    VIOLATED,
    WEAK,
    Requirement,
    check_receptiveness,
    check_weak_compliance,
    derive_requirements,
)
from .synctypes import FeaturedSyncSpec
from .system import DEFAULT_PARTICIPANT_LIMIT, FeaturedSystem
from .team import OpenSystemWarning, build_team

FEATURED_COMPLIANT = "featured-compliant"
FEATURED_WEAKLY_COMPLIANT = "featured-weakly-compliant"

_projection_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class FamilyRequirement:
    """A sender group, action and state with their application condition."""

    state: tuple
    senders: frozenset[str]
    action: str
    condition: FeatureExpr
    enabling: FeatureExpr
    sync_condition: FeatureExpr
    reach_condition: FeatureExpr

    def sort_key(self):
        return (state_key(self.state), self.action, tuple(sorted(self.senders)))

    def __str__(self) -> str:
        group = ",".join(sorted(self.senders))
        st = "(" + ",".join(self.state) + ")"
        return f"[{format_expr(self.condition)}] rcp({{{group}}}, {self.action}) @ {st}"


@dataclass(frozen=True)
class FamilyVerdict:
    """How one family requirement fared across the whole family."""

    requirement: FamilyRequirement
    status: str
    evidence: FeatureExpr | None
    witnesses: tuple
    violation_product: Product | None


@dataclass(frozen=True)
class FamilyReport:
    mode: str
    entries: tuple[FamilyVerdict, ...]
    warnings: tuple[str, ...]

    @property
    def holds(self) -> bool:
        if self.mode == STRICT:
            return all(e.status == FEATURED_COMPLIANT for e in self.entries)
        return all(e.status != VIOLATED for e in self.entries)

    @property
    def violations(self) -> tuple[FamilyVerdict, ...]:
        if self.mode == STRICT:
            return tuple(e for e in self.entries if e.status != FEATURED_COMPLIANT)
        return tuple(e for e in self.entries if e.status == VIOLATED)


def _projections(feta: Fts) -> dict[Product, Lts]:
    """Per-product projections of the featured team, cached on the team."""
    cache = _projection_cache.setdefault(feta, {})
    for product in valid_products(feta.feature_model, feta.space):
        if product not in cache:
            cache[product] = feta.project(product)
    return cache


def reachable_products(feta: Fts, state) -> tuple[Product, ...]:
    """Valid products under which the state is reachable in the featured team."""
    return tuple(
        p for p, proj in sorted(_projections(feta).items(), key=lambda kv: kv[0].sort_key())
        if state in proj.reachable()
    )


def senders_guard(
    fsys: FeaturedSystem, group: frozenset[str], action: str, state: tuple
) -> FeatureExpr:
    """Products in which every group member can locally fire the action."""
    parts = []
    for idx, name in enumerate(fsys.names):
        if name not in group:
            continue
        comp = fsys.components[name]
        local = state[idx]
        options = [
            comp.guards[t]
            for t in comp.successors_from(local)
            if t[1] == action
        ]
        parts.append(disj(options))
    return conj(parts)


def products_for_group(
    fspec: FeaturedSyncSpec, group: frozenset[str], action: str
) -> tuple[Product, ...]:
    """Valid products whose type lets this group send and forbids zero receivers."""
    out = []
    for product in valid_products(fspec.feature_model, fspec.space):
        st = fspec.lookup(product, action)
        if st.senders.contains(len(group)) and not st.receivers.contains(0):
            out.append(product)
    return tuple(out)


def derive_family_requirements(
    feta: Fts,
    fsys: FeaturedSystem,
    fspec: FeaturedSyncSpec,
    backend=None,
    max_group: int = DEFAULT_PARTICIPANT_LIMIT,
) -> tuple[FamilyRequirement, ...]:
    """All family requirements with a satisfiable application condition.

    Groups are drawn from components that output the action and are locally
    ready for it ignoring guards; readiness of the guards, fit with the
    synchronisation types and reachability of the state each contribute one
    conjunct of the condition. States no valid product can reach yield
    nothing.
    """
    out: list[FamilyRequirement] = []
    for q in feta.states:
        reach = reachable_products(feta, q)
        if not reach:
            continue
        reach_condition = product_set_expr(reach, feta.space)
        for action in sorted(fsys.actions):
            ready = [
                name
                for idx, name in enumerate(fsys.names)
                if action in fsys.components[name].outputs
                and fsys.components[name].enabled(q[idx], action)
            ]
            if len(ready) > max_group:
                raise ResourceLimitError(
                    f"{len(ready)} ready senders for {action!r}, above the bound {max_group}"
                )
            for size in range(1, len(ready) + 1):
                for names in itertools.combinations(ready, size):
                    group = frozenset(names)
                    enabling = senders_guard(fsys, group, action, q)
                    sync_condition = product_set_expr(
                        products_for_group(fspec, group, action), feta.space
                    )
                    condition = And((enabling, sync_condition, reach_condition))
                    if not is_satisfiable(condition, feta.space, backend):
                        continue
                    out.append(
                        FamilyRequirement(
                            q, group, action, condition,
                            enabling, sync_condition, reach_condition,
                        )
                    )
    out.sort(key=FamilyRequirement.sort_key)
    return tuple(out)


def _send_candidates(feta: Fts, freq: FamilyRequirement):
    return [
        t
        for t in feta.successors_from(freq.state)
        if t[1].action == freq.action
        and t[1].senders == freq.senders
        and t[1].receivers
    ]


def _condition_products(feta: Fts, freq: FamilyRequirement) -> list[Product]:
    return [
        p
        for p in valid_products(feta.feature_model, feta.space)
        if evaluate(freq.condition, p)
    ]


def check_family_compliance(feta: Fts, freq: FamilyRequirement, backend=None) -> FamilyVerdict:
    """Does the condition entail that some guarded send of the group fires?

    The evidence is the disjunction of the candidate transitions' guards; on
    violation, a concrete product satisfying the condition but none of the
    guards is reported.
    """
    candidates = _send_candidates(feta, freq)
    evidence = disj(feta.guards[t] for t in candidates)
    if entails(freq.condition, evidence, feta.space, backend):
        return FamilyVerdict(freq, FEATURED_COMPLIANT, evidence, tuple(candidates), None)
    culprit = next(
        (
            p
            for p in _condition_products(feta, freq)
            if not any(evaluate(feta.guards[t], p) for t in candidates)
        ),
        None,
    )
    return FamilyVerdict(freq, VIOLATED, evidence, (), culprit)


def check_family_weak_compliance(
    feta: Fts, freq: FamilyRequirement, backend=None
) -> FamilyVerdict:
    """Per product satisfying the condition: warm up without the group, then send.

    Each product is decided on its own projection of the featured team; the
    verdict carries one witness path per product and, on failure, the first
    product with no witness. The evidence disjoins the guard conjunctions of
    the witness paths.
    """
    projections = _projections(feta)
    witnesses = []
    evidence_parts = []
    for product in _condition_products(feta, freq):
        req = Requirement(freq.state, freq.senders, freq.action)
        verdict = check_weak_compliance(projections[product], req)
        if verdict.status == VIOLATED:
            return FamilyVerdict(freq, VIOLATED, None, tuple(witnesses), product)
        witnesses.append((product, verdict.witness))
        evidence_parts.append(conj(feta.guards[t] for t in verdict.witness))
    return FamilyVerdict(
        freq, FEATURED_WEAKLY_COMPLIANT, disj(evidence_parts), tuple(witnesses), None
    )


def check_family_receptiveness(
    feta: Fts,
    fsys: FeaturedSystem,
    fspec: FeaturedSyncSpec,
    mode: str = STRICT,
    backend=None,
    max_group: int = DEFAULT_PARTICIPANT_LIMIT,
) -> FamilyReport:
    """Verdict over all family requirements, in strict or weak mode."""
    if mode not in (STRICT, WEAK):
        raise SpecificationError(f"unknown receptiveness mode {mode!r}")
    warnings_: list[str] = []
    if not valid_products(feta.feature_model, feta.space):
        warnings_.append("the feature model has no valid products; receptiveness holds vacuously")
    entries = []
    for freq in derive_family_requirements(feta, fsys, fspec, backend, max_group):
        verdict = check_family_compliance(feta, freq, backend)
        if verdict.status == VIOLATED and mode == WEAK:
            verdict = check_family_weak_compliance(feta, freq, backend)
        entries.append(verdict)
    return FamilyReport(mode, tuple(entries), tuple(warnings_))


# --- cross-checks between the family route and the per-product route -------


@dataclass(frozen=True)
class ProjectionAgreement:
    """Per product: requirements read off the family versus derived directly."""

    product: Product
    only_in_family: tuple
    only_in_product: tuple

    @property
    def ok(self) -> bool:
        return not (self.only_in_family or self.only_in_product)


def crosscheck_requirement_projection(
    fsys: FeaturedSystem,
    fspec: FeaturedSyncSpec,
    feta: Fts,
    backend=None,
) -> tuple[ProjectionAgreement, ...]:
    """For every valid product, the family requirements whose condition the
    product satisfies must be exactly the product's own requirements."""
    freqs = derive_family_requirements(feta, fsys, fspec, backend)
    out = []
    for product in valid_products(fsys.feature_model, fsys.space):
        family_side = {
            (f.state, f.senders, f.action)
            for f in freqs
            if evaluate(f.condition, product)
        }
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore", OpenSystemWarning)
            sys_p = fsys.project(product)
            spec_p = fspec.project(product)
            team_p = build_team(sys_p, spec_p)
        product_side = {
            (r.state, r.senders, r.action)
            for r in derive_requirements(team_p, spec_p, sys_p)
        }
        out.append(
            ProjectionAgreement(
                product,
                tuple(sorted(family_side - product_side, key=str)),
                tuple(sorted(product_side - family_side, key=str)),
            )
        )
    return tuple(out)


def crosscheck_compliance_unfolding(
    feta: Fts, freq: FamilyRequirement, backend=None
) -> bool:
    """The symbolic compliance answer must match product-by-product unfolding."""
    symbolic = check_family_compliance(feta, freq, backend).status == FEATURED_COMPLIANT
    candidates = _send_candidates(feta, freq)
    unfolded = all(
        any(evaluate(feta.guards[t], p) for t in candidates)
        for p in _condition_products(feta, freq)
    )
    return symbolic == unfolded


@dataclass(frozen=True)
class FamilyProductsAgreement:
    """Family verdict versus the conjunction of per-product verdicts."""

    mode: str
    family_holds: bool
    product_verdicts: tuple[tuple[Product, bool], ...]

    @property
    def products_hold(self) -> bool:
        return all(holds for _, holds in self.product_verdicts)

    @property
    def ok(self) -> bool:
        return self.family_holds == self.products_hold


def crosscheck_family_vs_products(
    fsys: FeaturedSystem,
    fspec: FeaturedSyncSpec,
    mode: str,
    feta: Fts,
    backend=None,
) -> FamilyProductsAgreement:
    """Family receptiveness must equal receptiveness of every product's team."""
    family = check_family_receptiveness(feta, fsys, fspec, mode, backend)
    verdicts = []
    for product in valid_products(fsys.feature_model, fsys.space):
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore", OpenSystemWarning)
            sys_p = fsys.project(product)
            spec_p = fspec.project(product)
            team_p = build_team(sys_p, spec_p)
        verdicts.append(
            (product, check_receptiveness(team_p, spec_p, sys_p, mode).holds)
        )
    return FamilyProductsAgreement(mode, family.holds, tuple(verdicts))
