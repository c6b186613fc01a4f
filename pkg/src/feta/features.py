"""Feature expressions, products and satisfiability.

A feature space is a finite set of feature names. A product is a subset of
those names: the features switched on in one variant. Feature expressions are
propositional formulas over the feature names and are evaluated against a
product by reading each name as "this feature is selected". The feature model
of a family is itself a feature expression; the products satisfying it are the
valid products of the family.

Expressions are kept structurally as built. Nothing here rewrites or
normalises a stored expression; `simplified` produces a cheaper-to-read
equivalent for display only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BackendDisagreement, ResourceLimitError, SpecificationError

# Number of products an enumeration is allowed to touch before aborting.
DEFAULT_PRODUCT_LIMIT = 1 << 16

# Feature spaces up to this size are decided by enumeration unless a backend
# is forced; larger spaces fall back to the SAT backend.
ENUMERATION_CUTOFF = 16


@dataclass(frozen=True)
class FeatureSpace:
    """The finite universe of feature names, in declaration order."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise SpecificationError(f"duplicate feature names in {self.names}")

    @classmethod
    def of(cls, *names: str) -> FeatureSpace:
        return cls(tuple(names))

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def sorted_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.names))


@dataclass(frozen=True)
class Product:
    """A subset of the feature space: one variant of the family."""

    selected: frozenset[str]
    space: FeatureSpace

    def __post_init__(self) -> None:
        extra = self.selected - set(self.space.names)
        if extra:
            raise SpecificationError(f"product selects unknown features {sorted(extra)}")

    @classmethod
    def of(cls, space: FeatureSpace, *names: str) -> Product:
        return cls(frozenset(names), space)

    def __contains__(self, name: object) -> bool:
        return name in self.selected

    def __iter__(self):
        return iter(sorted(self.selected))

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self.selected))

    def sort_key(self) -> tuple[str, ...]:
        return self.names()

    def __str__(self) -> str:
        return "{" + ",".join(self.names()) + "}"


class FeatureExpr:
    """Base class of the expression nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __and__(self, other: FeatureExpr) -> FeatureExpr:
        return And((self, other))

    def __or__(self, other: FeatureExpr) -> FeatureExpr:
        return Or((self, other))

    def __invert__(self) -> FeatureExpr:
        return Not(self)

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True)
class Const(FeatureExpr):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Var(FeatureExpr):
    name: str


@dataclass(frozen=True)
class Not(FeatureExpr):
    operand: FeatureExpr


@dataclass(frozen=True)
class And(FeatureExpr):
    operands: tuple[FeatureExpr, ...]


@dataclass(frozen=True)
class Or(FeatureExpr):
    operands: tuple[FeatureExpr, ...]


@dataclass(frozen=True)
class Implies(FeatureExpr):
    antecedent: FeatureExpr
    consequent: FeatureExpr


@dataclass(frozen=True)
class Iff(FeatureExpr):
    left: FeatureExpr
    right: FeatureExpr


@dataclass(frozen=True)
class Xor(FeatureExpr):
    left: FeatureExpr
    right: FeatureExpr


def conj(operands) -> FeatureExpr:
    """Conjunction of a sequence; the empty conjunction is true."""
    ops = tuple(operands)
    if not ops:
        return TRUE
    if len(ops) == 1:
        return ops[0]
    return And(ops)


def disj(operands) -> FeatureExpr:
    """Disjunction of a sequence; the empty disjunction is false."""
    ops = tuple(operands)
    if not ops:
        return FALSE
    if len(ops) == 1:
        return ops[0]
    return Or(ops)


@lru_cache(maxsize=None)
def variables(expr: FeatureExpr) -> frozenset[str]:
    """The feature names occurring in the expression."""
    match expr:
        case Const():
            return frozenset()
        case Var(name):
            return frozenset((name,))
        case Not(operand):
            return variables(operand)
        case And(operands) | Or(operands):
            out: frozenset[str] = frozenset()
            for op in operands:
                out |= variables(op)
            return out
        case Implies(a, b) | Iff(a, b) | Xor(a, b):
            return variables(a) | variables(b)
    raise SpecificationError(f"not a feature expression: {expr!r}")


def _holds(expr: FeatureExpr, selected) -> bool:
    match expr:
        case Const(value):
            return value
        case Var(name):
            return name in selected
        case Not(operand):
            return not _holds(operand, selected)
        case And(operands):
            return all(_holds(op, selected) for op in operands)
        case Or(operands):
            return any(_holds(op, selected) for op in operands)
        case Implies(a, b):
            return (not _holds(a, selected)) or _holds(b, selected)
        case Iff(a, b):
            return _holds(a, selected) == _holds(b, selected)
        case Xor(a, b):
            return _holds(a, selected) != _holds(b, selected)
    raise SpecificationError(f"not a feature expression: {expr!r}")


def _check_vars(expr: FeatureExpr, space: FeatureSpace) -> None:
    unknown = variables(expr) - set(space.names)
    if unknown:
        raise SpecificationError(f"expression references undeclared features {sorted(unknown)}")


def evaluate(expr: FeatureExpr, product: Product) -> bool:
    """Whether the product satisfies the expression."""
    _check_vars(expr, product.space)
    return _holds(expr, product.selected)


def all_products(space: FeatureSpace, limit: int = DEFAULT_PRODUCT_LIMIT) -> tuple[Product, ...]:
    """Every subset of the space, ordered lexicographically by feature names."""
    if 2 ** len(space) > limit:
        raise ResourceLimitError(
            f"feature space of {len(space)} features exceeds the product bound {limit}"
        )
    names = space.sorted_names()
    subsets = [
        tuple(n for n, keep in zip(names, mask) if keep)
        for mask in itertools.product((False, True), repeat=len(names))
    ]
    subsets.sort()
    return tuple(Product(frozenset(s), space) for s in subsets)


@lru_cache(maxsize=None)
def valid_products(
    feature_model: FeatureExpr, space: FeatureSpace, limit: int = DEFAULT_PRODUCT_LIMIT
) -> tuple[Product, ...]:
    """The products satisfying the feature model, in lexicographic order."""
    _check_vars(feature_model, space)
    return tuple(
        p for p in all_products(space, limit) if _holds(feature_model, p.selected)
    )


def product_expr(product: Product) -> FeatureExpr:
    """The expression satisfied by exactly this product of its space."""
    pos = [Var(n) for n in sorted(product.selected)]
    neg = [Not(Var(n)) for n in sorted(set(product.space.names) - product.selected)]
    return conj(pos + neg)


def product_set_expr(products, space: FeatureSpace) -> FeatureExpr:
    """The expression satisfied by exactly the given set of products."""
    chosen = sorted(products, key=Product.sort_key)
    for p in chosen:
        if p.space != space:
            raise SpecificationError("product set mixes feature spaces")
    return disj(product_expr(p) for p in chosen)


# --- satisfiability backends ---------------------------------------------


class EnumerationBackend:
    """Reference decision procedure: try every assignment of the occurring features."""

    name = "enumerative"

    def satisfiable(self, expr: FeatureExpr, space: FeatureSpace) -> bool:
        _check_vars(expr, space)
        vs = sorted(variables(expr))
        for mask in itertools.product((False, True), repeat=len(vs)):
            selected = {v for v, keep in zip(vs, mask) if keep}
            if _holds(expr, selected):
                return True
        return False


class DpllBackend:
    """Tseitin encoding into CNF followed by a plain DPLL search."""

    name = "sat"

    def satisfiable(self, expr: FeatureExpr, space: FeatureSpace) -> bool:
        _check_vars(expr, space)
        clauses, root = _to_clauses(expr)
        return _dpll(clauses + [[root]])


class CrossCheckBackend:
    """Runs both backends and fails loudly if they ever disagree."""

    name = "crosscheck"

    def __init__(self) -> None:
        self._enum = EnumerationBackend()
        self._sat = DpllBackend()
        self.queries = 0

    def satisfiable(self, expr: FeatureExpr, space: FeatureSpace) -> bool:
        a = self._enum.satisfiable(expr, space)
        b = self._sat.satisfiable(expr, space)
        self.queries += 1
        if a != b:
            raise BackendDisagreement(
                f"enumerative says {a}, sat says {b} for {format_expr(expr)}"
            )
        return a


_BACKENDS = {"enumerative": EnumerationBackend, "sat": DpllBackend, "crosscheck": CrossCheckBackend}


def resolve_backend(name: str | None, space: FeatureSpace):
    """Pick a backend by name, or by space size when no name is given."""
    if name is None:
        return EnumerationBackend() if len(space) <= ENUMERATION_CUTOFF else DpllBackend()
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise SpecificationError(f"unknown backend {name!r}") from None


def is_satisfiable(expr: FeatureExpr, space: FeatureSpace, backend=None) -> bool:
    """Whether some product of the space (valid or not) satisfies the expression."""
    backend = backend or resolve_backend(None, space)
    return backend.satisfiable(expr, space)


def entails(lhs: FeatureExpr, rhs: FeatureExpr, space: FeatureSpace, backend=None) -> bool:
    """Whether every product satisfying lhs also satisfies rhs."""
    return not is_satisfiable(And((lhs, Not(rhs))), space, backend)


def equivalent(lhs: FeatureExpr, rhs: FeatureExpr, space: FeatureSpace, backend=None) -> bool:
    """Whether the two expressions are satisfied by exactly the same products."""
    return entails(lhs, rhs, space, backend) and entails(rhs, lhs, space, backend)


# --- CNF conversion and DPLL ----------------------------------------------


def _to_clauses(expr: FeatureExpr):
    """Tseitin transform. Returns (clauses, literal equisatisfiable with expr)."""
    ids: dict[str, int] = {}
    clauses: list[list[int]] = []
    counter = itertools.count(1)
    cache: dict[FeatureExpr, int] = {}

    def fresh() -> int:
        return next(counter)

    def var_id(name: str) -> int:
        if name not in ids:
            ids[name] = fresh()
        return ids[name]

    def encode(node: FeatureExpr) -> int:
        if node in cache:
            return cache[node]
        match node:
            case Const(value):
                v = fresh()
                clauses.append([v] if value else [-v])
                lit = v
            case Var(name):
                lit = var_id(name)
            case Not(operand):
                lit = -encode(operand)
            case And(operands):
                parts = [encode(op) for op in operands]
                v = fresh()
                for p in parts:
                    clauses.append([-v, p])
                clauses.append([v] + [-p for p in parts])
                lit = v
            case Or(operands):
                parts = [encode(op) for op in operands]
                v = fresh()
                for p in parts:
                    clauses.append([v, -p])
                clauses.append([-v] + parts)
                lit = v
            case Implies(ant, con):
                a, b = encode(ant), encode(con)
                v = fresh()
                clauses.extend([[-v, -a, b], [v, a], [v, -b]])
                lit = v
            case Iff(left, right):
                a, b = encode(left), encode(right)
                v = fresh()
                clauses.extend([[-v, -a, b], [-v, a, -b], [v, a, b], [v, -a, -b]])
                lit = v
            case Xor(left, right):
                a, b = encode(left), encode(right)
                v = fresh()
                clauses.extend([[-v, a, b], [-v, -a, -b], [v, -a, b], [v, a, -b]])
                lit = v
            case _:
                raise SpecificationError(f"not a feature expression: {node!r}")
        cache[node] = lit
        return lit

    root = encode(expr)
    return clauses, root


def _dpll(clauses: list[list[int]]) -> bool:
    clauses = [list(c) for c in clauses]

    def simplify(cs: list[list[int]], lit: int) -> list[list[int]] | None:
        out = []
        for c in cs:
            if lit in c:
                continue
            reduced = [x for x in c if x != -lit]
            if not reduced:
                return None
            out.append(reduced)
        return out

    def solve(cs: list[list[int]]) -> bool:
        while True:
            unit = next((c[0] for c in cs if len(c) == 1), None)
            if unit is None:
                break
            cs = simplify(cs, unit)
            if cs is None:
                return False
        if not cs:
            return True
        pivot = cs[0][0]
        for choice in (pivot, -pivot):
            reduced = simplify(cs, choice)
            if reduced is not None and solve(reduced):
                return True
        return False

    return solve(clauses)


# --- rendering -------------------------------------------------------------

# Binding strength of each connective, loosest first.
_LEVEL_IFF, _LEVEL_IMPLIES, _LEVEL_OR, _LEVEL_XOR, _LEVEL_AND, _LEVEL_NOT, _LEVEL_ATOM = range(7)


def _level(expr: FeatureExpr) -> int:
    match expr:
        case Const() | Var():
            return _LEVEL_ATOM
        case Not():
            return _LEVEL_NOT
        case And():
            return _LEVEL_AND
        case Xor():
            return _LEVEL_XOR
        case Or():
            return _LEVEL_OR
        case Implies():
            return _LEVEL_IMPLIES
        case Iff():
            return _LEVEL_IFF
    raise SpecificationError(f"not a feature expression: {expr!r}")


def format_expr(expr: FeatureExpr) -> str:
    """Surface syntax of an expression with minimal parentheses."""

    def wrap(child: FeatureExpr, minimum: int) -> str:
        text = format_expr(child)
        return f"({text})" if _level(child) < minimum else text

    match expr:
        case Const(value):
            return "true" if value else "false"
        case Var(name):
            return name
        case Not(operand):
            return "!" + wrap(operand, _LEVEL_NOT)
        case And(operands):
            return " && ".join(wrap(op, _LEVEL_AND) for op in operands)
        case Or(operands):
            return " || ".join(wrap(op, _LEVEL_OR) for op in operands)
        case Xor(left, right):
            # xor chains associate to the left
            return f"{wrap(left, _LEVEL_XOR)} xor {wrap(right, _LEVEL_XOR + 1)}"
        case Implies(ant, con):
            # implication associates to the right
            return f"{wrap(ant, _LEVEL_IMPLIES + 1)} -> {wrap(con, _LEVEL_IMPLIES)}"
        case Iff(left, right):
            return f"{wrap(left, _LEVEL_IFF)} <-> {wrap(right, _LEVEL_IFF + 1)}"
    raise SpecificationError(f"not a feature expression: {expr!r}")


def simplified(expr: FeatureExpr) -> FeatureExpr:
    """A lighter equivalent for display: folds constants, flattens, dedups.

    Not a normal form. Semantic questions go through the backends instead.
    """
    match expr:
        case Const() | Var():
            return expr
        case Not(operand):
            inner = simplified(operand)
            if isinstance(inner, Const):
                return FALSE if inner.value else TRUE
            if isinstance(inner, Not):
                return inner.operand
            return Not(inner)
        case And(operands) | Or(operands):
            is_and = isinstance(expr, And)
            absorbing, neutral = (FALSE, TRUE) if is_and else (TRUE, FALSE)
            kind = And if is_and else Or
            flat: list[FeatureExpr] = []
            for op in operands:
                s = simplified(op)
                if isinstance(s, kind):
                    flat.extend(s.operands)
                else:
                    flat.append(s)
            kept: list[FeatureExpr] = []
            for s in flat:
                if s == absorbing:
                    return absorbing
                if s == neutral or s in kept:
                    continue
                kept.append(s)
            return conj(kept) if is_and else disj(kept)
        case Implies(ant, con):
            a, b = simplified(ant), simplified(con)
            if a == FALSE or b == TRUE:
                return TRUE
            if a == TRUE:
                return b
            if b == FALSE:
                return simplified(Not(a))
            return Implies(a, b)
        case Iff(left, right):
            a, b = simplified(left), simplified(right)
            if a == TRUE:
                return b
            if b == TRUE:
                return a
            if a == FALSE:
                return simplified(Not(b))
            if b == FALSE:
                return simplified(Not(a))
            if a == b:
                return TRUE
            return Iff(a, b)
        case Xor(left, right):
            a, b = simplified(left), simplified(right)
            if a == FALSE:
                return b
            if b == FALSE:
                return a
            if a == TRUE:
                return simplified(Not(b))
            if b == TRUE:
                return simplified(Not(a))
            if a == b:
                return FALSE
            return Xor(a, b)
    raise SpecificationError(f"not a feature expression: {expr!r}")
