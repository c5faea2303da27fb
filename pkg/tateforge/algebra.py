"""
Graded-commutative F_2 algebras presented by generators.

Monomials are exponent tuples aligned with the generator list. Elements are F_2 sums
of monomials stored as frozensets, so adding a monomial twice cancels it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from tateforge.config import settings
from tateforge.exceptions import CapTooLarge, OutOfCap
from tateforge.f2linalg import BitMatrix
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event

logger = get_logger(__name__)

Monomial = Tuple[int, ...]


class GeneratorKind(str, Enum):
    POLYNOMIAL = "polynomial"
    EXTERIOR = "exterior"
    TRUNCATED = "truncated_polynomial"


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    kind: GeneratorKind = GeneratorKind.POLYNOMIAL
    height: Optional[int] = None

    def __post_init__(self):
        if self.degree == 0:
            raise ValueError(f"generator {self.name} has degree 0")
        if self.kind == GeneratorKind.TRUNCATED and (self.height is None or self.height < 2):
            raise ValueError(f"truncated generator {self.name} needs height >= 2")

    @property
    def max_exponent(self) -> Optional[int]:
        if self.kind == GeneratorKind.EXTERIOR:
            return 1
        if self.kind == GeneratorKind.TRUNCATED:
            return self.height - 1
        return None


def poly(name: str, degree: int) -> GeneratorSpec:
    return GeneratorSpec(name, degree, GeneratorKind.POLYNOMIAL)


def ext(name: str, degree: int) -> GeneratorSpec:
    return GeneratorSpec(name, degree, GeneratorKind.EXTERIOR)


@dataclass(frozen=True)
class Element:
    terms: FrozenSet[Monomial] = frozenset()
    truncated: bool = False

    @classmethod
    def of(cls, *monomials: Monomial) -> "Element":
        acc: set = set()
        for mono in monomials:
            acc ^= {tuple(mono)}
        return cls(frozenset(acc))

    def __add__(self, other: "Element") -> "Element":
        return Element(self.terms ^ other.terms, self.truncated or other.truncated)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms, reverse=True))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


ZERO = Element()


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    generators: Tuple[GeneratorSpec, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {self.name}")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def has(self, name: str) -> bool:
        return any(g.name == name for g in self.generators)

    def unit(self) -> Monomial:
        return (0,) * self.rank

    def one(self) -> Element:
        return Element.of(self.unit())

    def gen(self, name: str, power: int = 1) -> Monomial:
        exps = [0] * self.rank
        exps[self.index(name)] = power
        return self.normalize(tuple(exps))

    def monomial(self, **powers: int) -> Monomial:
        exps = [0] * self.rank
        for name, power in powers.items():
            exps[self.index(name)] = power
        return tuple(exps)

    def element(self, *monomials: Monomial) -> Element:
        return Element.of(*[m for m in monomials if m is not None])

    def degree(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def normalize(self, mono: Monomial) -> Optional[Monomial]:
        """Apply exterior and truncation relations; None means the monomial vanishes."""
        for e, g in zip(mono, self.generators):
            limit = g.max_exponent
            if e < 0 or (limit is not None and e > limit):
                return None
        return mono

    def mono_mul(self, a: Monomial, b: Monomial) -> Optional[Monomial]:
        return self.normalize(tuple(x + y for x, y in zip(a, b)))

    def mono_pow(self, a: Monomial, k: int) -> Optional[Monomial]:
        return self.normalize(tuple(x * k for x in a))

    def format(self, x) -> str:
        if isinstance(x, tuple):
            parts = []
            for e, g in zip(x, self.generators):
                if e == 1:
                    parts.append(g.name)
                elif e > 1:
                    parts.append(f"{g.name}^{e}")
            return "*".join(parts) or "1"
        if x.is_zero():
            return "0"
        return " + ".join(self.format(m) for m in x)


def multiply(x: Element, y: Element, a: AlgebraSpec, max_degree: Optional[int] = None) -> Element:
    """F_2 product; terms above max_degree are dropped and the result is flagged truncated."""
    acc: set = set()
    dropped = False
    for m1 in x.terms:
        for m2 in y.terms:
            m = a.mono_mul(m1, m2)
            if m is None:
                continue
            if max_degree is not None and a.degree(m) > max_degree:
                dropped = True
                continue
            acc ^= {m}
    return Element(frozenset(acc), x.truncated or y.truncated or dropped)


def scale(x: Element, mono: Monomial, a: AlgebraSpec) -> Element:
    """Multiply an element by a single monomial."""
    acc: set = set()
    for m in x.terms:
        prod = a.mono_mul(m, mono)
        if prod is not None:
            acc ^= {prod}
    return Element(frozenset(acc), x.truncated)


@dataclass(frozen=True)
class DerivationSpec:
    """A derivation given by its values on generators; all images share one degree shift."""

    name: str
    images: Tuple[Element, ...]
    shift: int

    @classmethod
    def build(cls, name: str, a: AlgebraSpec, shift: int, images: Dict[str, Element]) -> "DerivationSpec":
        values = []
        for g in a.generators:
            image = images.get(g.name, ZERO)
            for mono in image.terms:
                if a.degree(mono) != g.degree + shift:
                    raise ValueError(
                        f"{name}({g.name}) has a term of degree {a.degree(mono)}, expected {g.degree + shift}"
                    )
            values.append(image)
        return cls(name, tuple(values), shift)


def apply_derivation(D: DerivationSpec, x: Element, a: AlgebraSpec) -> Element:
    """Leibniz extension over F_2: D(g^e) = e·g^(e-1)·D(g)."""
    acc = ZERO
    for mono in x.terms:
        for i, e in enumerate(mono):
            if e % 2 == 0 or D.images[i].is_zero():
                continue
            rest = list(mono)
            rest[i] -= 1
            acc = acc + scale(D.images[i], tuple(rest), a)
    return acc


@dataclass(frozen=True, eq=False)
class GradedBasis:
    algebra: AlgebraSpec
    max_degree: int
    by_degree: Tuple[Tuple[Monomial, ...], ...]
    _index: Tuple[Dict[Monomial, int], ...] = field(repr=False, default=())

    def __post_init__(self):
        if not self._index:
            object.__setattr__(
                self, "_index", tuple({m: i for i, m in enumerate(ms)} for ms in self.by_degree)
            )

    def in_range(self, d: int) -> bool:
        return 0 <= d <= self.max_degree

    def monomials(self, d: int) -> Tuple[Monomial, ...]:
        if d < 0:
            return ()
        if d > self.max_degree:
            raise OutOfCap(f"degree {d} above cap {self.max_degree}", {"algebra": self.algebra.name})
        return self.by_degree[d]

    def dim(self, d: int) -> int:
        return len(self.monomials(d))

    def index_of(self, mono: Monomial) -> int:
        return self._index[self.algebra.degree(mono)][mono]

    def dims(self) -> List[int]:
        return [len(ms) for ms in self.by_degree]

    def vector(self, x: Element, d: int) -> List[int]:
        """Indices (with cancellation already applied) of x's degree-d terms."""
        index = self._index[d] if 0 <= d <= self.max_degree else {}
        return sorted(index[m] for m in x.terms if m in index)


def enumerate_basis(a: AlgebraSpec, max_degree: int) -> GradedBasis:
    """All monomials of degree 0..max_degree, graded-lex by generator index within a degree."""
    if any(g.degree <= 0 for g in a.generators):
        raise ValueError(f"{a.name}: basis enumeration needs positive generator degrees")
    buckets: List[List[Monomial]] = [[] for _ in range(max_degree + 1)]

    def walk(i: int, prefix: List[int], deg: int):
        if i == a.rank:
            buckets[deg].append(tuple(prefix))
            return
        g = a.generators[i]
        e = 0
        limit = g.max_exponent
        while deg + e * g.degree <= max_degree and (limit is None or e <= limit):
            prefix.append(e)
            walk(i + 1, prefix, deg + e * g.degree)
            prefix.pop()
            e += 1

    walk(0, [], 0)
    for d, ms in enumerate(buckets):
        if len(ms) > settings.max_basis_size:
            raise CapTooLarge(
                f"{a.name} has {len(ms)} monomials in degree {d}",
                {"algebra": a.name, "degree": d, "limit": settings.max_basis_size},
            )
        ms.sort(reverse=True)
    log_computation_event(
        ComputationEvents.BASIS_ENUMERATED, algebra=a.name, max_degree=max_degree, total=sum(map(len, buckets))
    )
    return GradedBasis(a, max_degree, tuple(tuple(ms) for ms in buckets))


def operator_matrix(
    fn: Callable[[Monomial], Element],
    basis: GradedBasis,
    d: int,
    shift: int,
    target: Optional[GradedBasis] = None,
) -> BitMatrix:
    """Matrix of a linear operator from degree d to degree d + shift (rows = target)."""
    target = target or basis
    if d > basis.max_degree or d + shift > target.max_degree:
        raise OutOfCap(
            f"degrees {d} -> {d + shift} leave the cap",
            {"source_cap": basis.max_degree, "target_cap": target.max_degree},
        )
    sources = basis.monomials(d)
    rows = target.dim(d + shift) if d + shift >= 0 else 0
    if rows == 0:
        return BitMatrix.zeros(0, len(sources))
    return BitMatrix.from_columns(rows, (target.vector(fn(m), d + shift) for m in sources))


def derivation_matrix(D: DerivationSpec, d: int, basis: GradedBasis) -> BitMatrix:
    a = basis.algebra
    return operator_matrix(lambda m: apply_derivation(D, Element.of(m), a), basis, d, D.shift)
