"""
Dual Steenrod algebra, the comodule catalog, Milnor-primitive actions, σ, φ_n and J_n.

Coactions are left coactions ν: M → A_* ⊗ M. A tensor element is an F_2 sum of
(left, right) monomial pairs, the left side in A_* and the right side in the
comodule's algebra.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Protocol, Sequence, Set, Tuple

from tateforge.algebra import (
    ZERO,
    AlgebraSpec,
    DerivationSpec,
    Element,
    GeneratorSpec,
    GradedBasis,
    Monomial,
    apply_derivation,
    enumerate_basis,
    ext,
    operator_matrix,
    poly,
)
from tateforge.exceptions import UnsupportedId, UnsupportedModel
from tateforge.f2linalg import BitMatrix, SubspaceBasis, kernel_basis, unit_vector
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event, log_performance

logger = get_logger(__name__)

Pair = Tuple[Monomial, Monomial]


def xi_degree(k: int) -> int:
    return 2 ** k - 1


def q_degree(m: int) -> int:
    """|Q_m| = 2^(m+1) - 1; Q_m lowers degree by this much."""
    return 2 ** (m + 1) - 1


def xi_count(N: int) -> int:
    """Largest k with |ξ̄_k| <= N."""
    k = 0
    while xi_degree(k + 1) <= N:
        k += 1
    return k


def dual_steenrod_algebra(K: int) -> AlgebraSpec:
    return AlgebraSpec(f"A_*[{K}]", tuple(poly(f"xi{k}", xi_degree(k)) for k in range(1, K + 1)))


# ---------------------------------------------------------------------------
# Tensor elements of A_* ⊗ M

@dataclass(frozen=True)
class TensorElement:
    terms: FrozenSet[Pair] = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[Pair]) -> "TensorElement":
        acc: set = set()
        for p in pairs:
            acc ^= {p}
        return cls(frozenset(acc))

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.terms ^ other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def right_factors_at(self, left: Monomial) -> Element:
        acc: set = set()
        for l, r in self.terms:
            if l == left:
                acc ^= {r}
        return Element(frozenset(acc))

    def restrict_left(self, allowed: Optional[Set[Monomial]]) -> "TensorElement":
        if allowed is None:
            return self
        return TensorElement(frozenset(p for p in self.terms if p[0] in allowed))


def tensor_multiply(
    x: TensorElement,
    y: TensorElement,
    left: AlgebraSpec,
    right: AlgebraSpec,
    allowed_left: Optional[Set[Monomial]] = None,
) -> TensorElement:
    acc: set = set()
    for l1, r1 in x.terms:
        for l2, r2 in y.terms:
            l = left.mono_mul(l1, l2)
            if l is None or (allowed_left is not None and l not in allowed_left):
                continue
            r = right.mono_mul(r1, r2)
            if r is None:
                continue
            acc ^= {(l, r)}
    return TensorElement(frozenset(acc))


def coproduct_xi(k: int, N: int) -> TensorElement:
    """ψ(ξ̄_k) = Σ_{i+j=k} ξ̄_i ⊗ ξ̄_j^(2^i) in A_* ⊗ A_*, with ξ̄_0 = 1."""
    A = dual_steenrod_algebra(max(k, xi_count(N)))
    pairs = []
    for i in range(k + 1):
        j = k - i
        l = A.gen(f"xi{i}") if i else A.unit()
        r = A.gen(f"xi{j}", 2 ** i) if j else A.unit()
        if A.degree(l) + A.degree(r) <= max(N, xi_degree(k)):
            pairs.append((l, r))
    return TensorElement.of(pairs)


# ---------------------------------------------------------------------------
# Space ids

class SpaceKind(str, Enum):
    SPHERE = "sphere"
    DUAL_STEENROD = "a"
    HZ = "hz"
    Y = "y"
    Z = "z"
    ZMODVN = "zmodv"
    THH_Y = "thhy"
    THH_HF2 = "thhhf2"
    TP_MODEL = "tp"
    TCMINUS_MODEL = "tcminus"


@dataclass(frozen=True)
class SpaceId:
    kind: SpaceKind
    n: Optional[int] = None
    i: Optional[int] = None

    def __post_init__(self):
        needs_n = {SpaceKind.Y, SpaceKind.Z, SpaceKind.ZMODVN, SpaceKind.THH_Y, SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL}
        if self.kind in needs_n and self.n is None:
            raise UnsupportedId(f"{self.kind.value} needs n")
        if self.kind in {SpaceKind.Z, SpaceKind.ZMODVN, SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL} and self.n < 1:
            raise UnsupportedId(f"{self.kind.value} needs n >= 1", {"n": self.n})
        if self.kind in {SpaceKind.Y, SpaceKind.THH_Y} and self.n < 0:
            raise UnsupportedId("n must be non-negative", {"n": self.n})
        if self.kind in {SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL} and self.i is None:
            raise UnsupportedId(f"{self.kind.value} needs a truncation index i")
        if self.kind == SpaceKind.TCMINUS_MODEL and self.i < 0:
            raise UnsupportedId("TC⁻ truncation needs i >= 0", {"i": self.i})

    @property
    def label(self) -> str:
        if self.kind in {SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL}:
            return f"{self.kind.value}{self.n}_{self.i}"
        if self.n is not None:
            return f"{self.kind.value}{self.n}"
        return self.kind.value

    @property
    def is_page_model(self) -> bool:
        return self.kind in {SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL}


_ID_PATTERN = re.compile(r"^(sphere|a|hz|thhhf2|thhy|zmodv|tcminus|tp|y|z)(\d+)?(?:_(-?\d+))?$")


def parse_space_id(text: str) -> SpaceId:
    match = _ID_PATTERN.match(text.strip().lower())
    if not match:
        raise UnsupportedId(f"unknown space id {text!r}")
    kind_text, n_text, i_text = match.groups()
    kind = SpaceKind(kind_text)
    n = int(n_text) if n_text is not None else None
    i = int(i_text) if i_text is not None else None
    if kind in {SpaceKind.SPHERE, SpaceKind.DUAL_STEENROD, SpaceKind.HZ, SpaceKind.THH_HF2} and (n is not None or i is not None):
        raise UnsupportedId(f"{kind.value} takes no index")
    if i is not None and kind not in {SpaceKind.TP_MODEL, SpaceKind.TCMINUS_MODEL}:
        raise UnsupportedId(f"{kind.value} takes no truncation index")
    return SpaceId(kind, n, i)


# ---------------------------------------------------------------------------
# Comodules

class GradedQModule(Protocol):
    """What margolis needs from a graded E(Q_m)-module."""

    name: str

    def degrees(self) -> List[int]: ...

    def dim(self, degree: int) -> int: ...

    def q_matrix(self, m: int, degree: int) -> BitMatrix: ...

    def certified(self, degree: int, m: int) -> bool: ...


@dataclass(frozen=True)
class ExoticPair:
    """ξ̄_k^odd·σξ̄_k carries an extra tail in its coaction."""

    poly_index: int
    ext_index: int
    tail: TensorElement


@dataclass(frozen=True)
class Embedding:
    """A comodule generator identified with ξ̄_k^power inside A_* (used for restricted coactions)."""

    xi: int
    power: int = 1


@dataclass(eq=False)
class ComoduleSpec:
    name: str
    algebra: AlgebraSpec
    steenrod: AlgebraSpec
    max_degree: int
    coaction: Tuple[TensorElement, ...]
    exotic_pairs: Tuple[ExoticPair, ...] = ()
    space: Optional[SpaceId] = None
    _power_cache: Dict = field(default_factory=dict, repr=False)
    _q_cache: Dict = field(default_factory=dict, repr=False)

    @property
    def has_exotic_rules(self) -> bool:
        return bool(self.exotic_pairs)

    @cached_property
    def basis(self) -> GradedBasis:
        return enumerate_basis(self.algebra, self.max_degree)

    def degrees(self) -> List[int]:
        return list(range(self.max_degree + 1))

    def dim(self, degree: int) -> int:
        if degree < 0 or degree > self.max_degree:
            return 0
        return self.basis.dim(degree)

    def certified(self, degree: int, m: int) -> bool:
        return 0 <= degree and degree + q_degree(m) <= self.max_degree

    def unit_left(self) -> Monomial:
        return self.steenrod.unit()

    def xi_left(self, k: int) -> Optional[Monomial]:
        if k < 1 or not self.steenrod.has(f"xi{k}"):
            return None
        return self.steenrod.gen(f"xi{k}")

    def one(self) -> TensorElement:
        return TensorElement.of([(self.steenrod.unit(), self.algebra.unit())])

    def _power(self, g: int, k: int, allowed: Optional[FrozenSet[Monomial]]) -> TensorElement:
        key = (g, k, allowed)
        cached = self._power_cache.get(key)
        if cached is not None:
            return cached
        if k == 0:
            result = self.one()
        elif k == 1:
            result = self.coaction[g].restrict_left(allowed)
        else:
            half = self._power(g, k // 2, allowed)
            result = tensor_multiply(half, half, self.steenrod, self.algebra, allowed)
            if k % 2:
                result = tensor_multiply(result, self._power(g, 1, allowed), self.steenrod, self.algebra, allowed)
        self._power_cache[key] = result
        return result

    def coact(self, mono: Monomial, allowed_left: Optional[FrozenSet[Monomial]] = None) -> TensorElement:
        """ν on a basis monomial: multiplicative over generators, with exotic pair corrections."""
        mul = lambda x, y: tensor_multiply(x, y, self.steenrod, self.algebra, allowed_left)
        result = self.one()
        paired: Set[int] = set()
        for pair in self.exotic_pairs:
            a, eps = mono[pair.poly_index], mono[pair.ext_index]
            paired.update((pair.poly_index, pair.ext_index))
            if eps == 1 and a % 2 == 1:
                core = mul(self._power(pair.poly_index, 1, allowed_left), self._power(pair.ext_index, 1, allowed_left))
                core = core + pair.tail.restrict_left(allowed_left)
                factor = mul(self._power(pair.poly_index, a - 1, allowed_left), core)
            else:
                factor = mul(self._power(pair.poly_index, a, allowed_left), self._power(pair.ext_index, eps, allowed_left))
            result = mul(result, factor)
        for g, e in enumerate(mono):
            if e and g not in paired:
                result = mul(result, self._power(g, e, allowed_left))
        return result

    def coact_element(self, x: Element) -> TensorElement:
        acc = TensorElement()
        for mono in x.terms:
            acc = acc + self.coact(mono)
        return acc

    def q_action_monomial(self, m: int, mono: Monomial) -> Element:
        xi = self.xi_left(m + 1)
        if xi is None:
            return ZERO
        allowed = frozenset({self.unit_left(), xi})
        return self.coact(mono, allowed).right_factors_at(xi)

    def q_matrix(self, m: int, degree: int) -> BitMatrix:
        key = (m, degree)
        cached = self._q_cache.get(key)
        if cached is None:
            if degree > self.max_degree:
                cached = BitMatrix.zeros(self.dim(degree - q_degree(m)), 0)
            else:
                cached = operator_matrix(
                    lambda mono: self.q_action_monomial(m, mono), self.basis, degree, -q_degree(m)
                )
            self._q_cache[key] = cached
        return cached

    def to_dict(self) -> Dict:
        def fmt_tensor(t: TensorElement) -> List[str]:
            return sorted(
                f"{self.steenrod.format(l)} ⊗ {self.algebra.format(r)}" for l, r in t.terms
            )

        return {
            "name": self.name,
            "max_degree": self.max_degree,
            "generators": [
                {"name": g.name, "degree": g.degree, "kind": g.kind.value, "coaction": fmt_tensor(c)}
                for g, c in zip(self.algebra.generators, self.coaction)
            ],
            "exotic_rules": [
                {
                    "pattern": f"{self.algebra.generators[p.poly_index].name}^odd*{self.algebra.generators[p.ext_index].name}",
                    "tail": fmt_tensor(p.tail),
                }
                for p in self.exotic_pairs
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)


def q_action(m: int, x: Element, c: ComoduleSpec) -> Element:
    """Q_m(x): right factors of ν(x) whose left factor is exactly ξ̄_{m+1}."""
    acc = ZERO
    for mono in x.terms:
        acc = acc + c.q_action_monomial(m, mono)
    return acc


def leibniz_q_derivation(m: int, c: ComoduleSpec) -> DerivationSpec:
    """Q_m as the derivation determined by its values on generators."""
    if c.has_exotic_rules:
        raise UnsupportedModel(f"{c.name} has exotic coaction rules; Q_m is not a derivation there")
    images = {
        g.name: q_action(m, c.algebra.element(c.algebra.gen(g.name)), c) for g in c.algebra.generators
    }
    return DerivationSpec.build(f"Q{m}", c.algebra, -q_degree(m), images)


# ---------------------------------------------------------------------------
# Catalog

def _restricted_psi(k: int, power: int, A: AlgebraSpec, target: AlgebraSpec, embed: Dict[int, Tuple[int, int]]) -> TensorElement:
    """ψ(ξ̄_k)^power with right factors rewritten in the target algebra's generators."""
    pairs = []
    for i in range(k + 1):
        j = k - i
        left = A.gen(f"xi{i}", power) if i else A.unit()
        right_exps = [0] * target.rank
        if j:
            e = (2 ** i) * power
            if j not in embed:
                raise UnsupportedId(f"ξ̄_{j} is not available in {target.name}")
            gen_index, gen_power = embed[j]
            if e % gen_power:
                raise UnsupportedId(f"ξ̄_{j}^{e} is not available in {target.name}")
            right_exps[gen_index] = e // gen_power
        right = target.normalize(tuple(right_exps))
        if right is not None:
            pairs.append((left, right))
    return TensorElement.of(pairs)


def _sub_comodule(
    name: str,
    gens: Sequence[Tuple[GeneratorSpec, Optional[Embedding]]],
    N: int,
    space: Optional[SpaceId],
    extra_xi: int = 0,
) -> Tuple[AlgebraSpec, AlgebraSpec, Tuple[TensorElement, ...]]:
    algebra = AlgebraSpec(name, tuple(g for g, _ in gens))
    top = max([emb.xi for _, emb in gens if emb] + [xi_count(N), extra_xi, 1])
    A = dual_steenrod_algebra(top)
    embed = {emb.xi: (idx, emb.power) for idx, (_, emb) in enumerate(gens) if emb}
    coactions = []
    for idx, (g, emb) in enumerate(gens):
        if emb is None:
            coactions.append(TensorElement.of([(A.unit(), algebra.gen(g.name))]))
        else:
            coactions.append(_restricted_psi(emb.xi, emb.power, A, algebra, embed))
    return algebra, A, tuple(coactions)


def _tail(k: int, A: AlgebraSpec, target: AlgebraSpec, embed: Dict[int, Tuple[int, int]]) -> TensorElement:
    """Σ_{j=1}^{k+1} ξ̄_j ⊗ ξ̄_{k+1-j}^(2^j), the part of ψ(ξ̄_{k+1}) with nonunit left factor."""
    pairs = []
    for j in range(1, k + 2):
        if not A.has(f"xi{j}"):
            continue
        rest = k + 1 - j
        right_exps = [0] * target.rank
        if rest:
            gen_index, gen_power = embed[rest]
            right_exps[gen_index] = (2 ** j) // gen_power
        pairs.append((A.gen(f"xi{j}"), tuple(right_exps)))
    return TensorElement.of(pairs)


def sphere_comodule(N: int) -> ComoduleSpec:
    algebra = AlgebraSpec("F_2", ())
    return ComoduleSpec("sphere", algebra, dual_steenrod_algebra(max(1, xi_count(N))), N, (), (), SpaceId(SpaceKind.SPHERE))


@log_performance("steenrod.catalog")
def catalog(space: SpaceId, N: int):
    """Comodule for a space id, truncated to degree N."""
    kind = space.kind
    if kind == SpaceKind.SPHERE:
        return sphere_comodule(N)
    if space.is_page_model:
        from tateforge.sseq import page_model

        return page_model(space, N)

    K = max(xi_count(N), 1)
    gens: List[Tuple[GeneratorSpec, Optional[Embedding]]] = []
    exotic: List[Tuple[int, int, int]] = []
    extra_xi = 0

    if kind == SpaceKind.DUAL_STEENROD:
        name = "A_*"
        gens = [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(1, K + 1)]
    elif kind == SpaceKind.HZ:
        name = "H_*(HZ)"
        gens = [(poly("xi1sq", 2), Embedding(1, 2))]
        gens += [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(2, K + 1)]
    elif kind == SpaceKind.Y:
        name = f"H_*(y({space.n}))"
        gens = [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(1, space.n + 1)]
    elif kind == SpaceKind.Z:
        name = f"H_*(z({space.n}))"
        gens = [(poly("xi1sq", 2), Embedding(1, 2))]
        gens += [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(2, space.n + 1)]
    elif kind == SpaceKind.ZMODVN:
        n = space.n
        name = f"H_*(z({n})/v_{n})"
        gens = [(poly("xi1sq", 2), Embedding(1, 2))]
        gens += [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(2, n + 1)]
        gens.append((ext("x", xi_degree(n + 1)), Embedding(n + 1)))
        extra_xi = n + 1
    elif kind == SpaceKind.THH_Y:
        n = space.n
        name = f"H_*(THH(y({n})))"
        gens = [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(1, n + 1)]
        gens += [(ext(f"sxi{k}", 2 ** k), None) for k in range(1, n + 1)]
        exotic = [(k - 1, n + k - 1, k) for k in range(1, n + 1)]
        extra_xi = n + 1
    elif kind == SpaceKind.THH_HF2:
        name = "H_*(THH(HF_2))"
        gens = [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(1, K + 1)]
        gens.append((poly("u", 2), None))
    else:
        raise UnsupportedId(f"no catalog entry for {space.label}")

    algebra, A, coactions = _sub_comodule(name, gens, N, space, extra_xi)
    embed = {emb.xi: (idx, emb.power) for idx, (_, emb) in enumerate(gens) if emb}
    pairs = tuple(ExoticPair(p, e, _tail(k, A, algebra, embed)) for p, e, k in exotic)
    spec = ComoduleSpec(name, algebra, A, N, coactions, pairs, space)
    log_computation_event(ComputationEvents.CATALOG_BUILT, space=space.label, max_degree=N, generators=algebra.rank)
    return spec


# ---------------------------------------------------------------------------
# σ, φ_n and J_n

def sigma_derivation(c: ComoduleSpec) -> DerivationSpec:
    space = c.space
    a = c.algebra
    if space is None or space.kind not in {SpaceKind.THH_Y, SpaceKind.THH_HF2}:
        raise UnsupportedModel(f"σ is not defined on {c.name}")
    images: Dict[str, Element] = {}
    if space.kind == SpaceKind.THH_Y:
        for k in range(1, space.n + 1):
            images[f"xi{k}"] = a.element(a.gen(f"sxi{k}"))
    else:
        for g in a.generators:
            if g.name.startswith("xi"):
                k = int(g.name[2:])
                images[g.name] = a.element(a.gen("u", 2 ** (k - 1)))
    return DerivationSpec.build("sigma", a, 1, images)


def sigma(x: Element, model: ComoduleSpec) -> Element:
    """The suspension operator; a derivation with σ∘σ = 0."""
    return apply_derivation(sigma_derivation(model), x, model.algebra)


def sigma_matrix(model: ComoduleSpec, d: int) -> BitMatrix:
    D = sigma_derivation(model)
    cache = model._q_cache
    key = ("sigma", d)
    if key not in cache:
        cache[key] = operator_matrix(
            lambda mono: apply_derivation(D, Element.of(mono), model.algebra), model.basis, d, 1
        )
    return cache[key]


def hf2_model(n: int, N: int) -> ComoduleSpec:
    """THH_HF2 with enough ξ̄ generators to receive φ_n."""
    K = max(xi_count(N), n + 1, 1)
    gens = [(poly(f"xi{k}", xi_degree(k)), Embedding(k)) for k in range(1, K + 1)]
    gens.append((poly("u", 2), None))
    space = SpaceId(SpaceKind.THH_HF2)
    algebra, A, coactions = _sub_comodule("H_*(THH(HF_2))", gens, N, space, K)
    return ComoduleSpec("H_*(THH(HF_2))", algebra, A, N, coactions, (), space)


def phi_monomial(n: int, mono: Monomial, source: ComoduleSpec, target: ComoduleSpec) -> Element:
    """φ_n on one monomial: pairwise images ξ̄_k^(2b)·φ(c_k), multiplied in THH_HF2."""
    tgt = target.algebra
    result = tgt.element(tgt.unit())
    for k in range(1, n + 1):
        a = mono[source.algebra.index(f"xi{k}")]
        eps = mono[source.algebra.index(f"sxi{k}")]
        u_power = eps * 2 ** (k - 1)
        if eps == 1 and a % 2 == 1:
            core = tgt.element(
                tgt.monomial(**{f"xi{k}": a, "u": u_power}),
                tgt.monomial(**{f"xi{k}": a - 1, f"xi{k + 1}": 1}),
            )
        else:
            core = tgt.element(tgt.monomial(**{f"xi{k}": a, "u": u_power}))
        acc: set = set()
        for m1 in result.terms:
            for m2 in core.terms:
                acc ^= {tgt.mono_mul(m1, m2)}
        result = Element(frozenset(acc))
    return result


def phi_map(n: int, x: Element, source: ComoduleSpec, target: ComoduleSpec) -> Element:
    acc = ZERO
    for mono in x.terms:
        acc = acc + phi_monomial(n, mono, source, target)
    return acc


def phi_matrix(n: int, d: int, source: ComoduleSpec, target: ComoduleSpec) -> BitMatrix:
    return operator_matrix(lambda mono: phi_monomial(n, mono, source, target), source.basis, d, 0, target.basis)


def jn_generators(n: int, d: int, source: ComoduleSpec, target: ComoduleSpec) -> List[Monomial]:
    """σ-cycle monomials a·u^k (k <= n) of degree d outside the span of φ_n-images."""
    tgt = target.algebra
    u_index = tgt.index("u")
    D = sigma_derivation(target)
    image = SubspaceBasis.span(
        target.basis.dim(d),
        [v for v in phi_matrix(n, d, source, target).transpose().data] if source.dim(d) else [],
    )
    gens = []
    for idx, mono in enumerate(target.basis.monomials(d)):
        if mono[u_index] > n:
            continue
        if not apply_derivation(D, Element.of(mono), tgt).is_zero():
            continue
        if image.contains(unit_vector(target.basis.dim(d), idx)):
            continue
        gens.append(mono)
    return gens


def jn_span(n: int, d: int, N: int, source: ComoduleSpec = None, target: ComoduleSpec = None) -> SubspaceBasis:
    """Degree-d piece of the ideal of complementary σ-cycles, as a span in THH_HF2."""
    source = source or catalog(SpaceId(SpaceKind.THH_Y, n), N)
    target = target or hf2_model(n, N)
    tgt = target.algebra
    dim = target.basis.dim(d)
    vectors = []
    for d_gen in range(1, d + 1):
        generators = jn_generators(n, d_gen, source, target)
        if not generators:
            continue
        for g in generators:
            for b in target.basis.monomials(d - d_gen):
                prod = tgt.mono_mul(g, b)
                if prod is not None:
                    vectors.append(unit_vector(dim, target.basis.index_of(prod)))
    return SubspaceBasis.span(dim, vectors)


# ---------------------------------------------------------------------------
# Primitives

def primitives_in_degree(c: ComoduleSpec, d: int) -> SubspaceBasis:
    """Kernel of ν - 1⊗id on the degree-d basis."""
    monos = c.basis.monomials(d)
    unit = c.unit_left()
    columns = []
    keys: Dict[Pair, int] = {}
    for mono in monos:
        hits = []
        for l, r in c.coact(mono).terms:
            if l == unit:
                continue
            hits.append(keys.setdefault((l, r), len(keys)))
        columns.append(hits)
    return kernel_basis(BitMatrix.from_columns(len(keys), columns))


def comodule_primitives(c, lo: int, hi: int) -> Dict[int, SubspaceBasis]:
    """Per-degree primitives; page models compute their own (t-power coaction included)."""
    if not isinstance(c, ComoduleSpec):
        return c.primitives(lo, hi)
    return {d: primitives_in_degree(c, d) for d in range(max(lo, 0), min(hi, c.max_degree) + 1)}


def tensor_comodule(left: ComoduleSpec, right: ComoduleSpec) -> ComoduleSpec:
    """M ⊗ N with the diagonal coaction; only for comodules without exotic rules."""
    if left.has_exotic_rules or right.has_exotic_rules:
        raise UnsupportedModel("tensor products are only formed from multiplicative coactions")
    K = max(left.steenrod.rank, right.steenrod.rank)
    A = dual_steenrod_algebra(K)
    gens = tuple(replace(g, name=f"{left.name}.{g.name}") for g in left.algebra.generators)
    gens += tuple(replace(g, name=f"{right.name}.{g.name}") for g in right.algebra.generators)
    algebra = AlgebraSpec(f"{left.name} ⊗ {right.name}", gens)

    def pad(mono: Monomial) -> Monomial:
        return tuple(mono) + (0,) * (K - len(mono))

    zeros_left, zeros_right = (0,) * left.algebra.rank, (0,) * right.algebra.rank
    coaction = tuple(
        TensorElement(frozenset((pad(l), r + zeros_right) for l, r in t.terms)) for t in left.coaction
    ) + tuple(
        TensorElement(frozenset((pad(l), zeros_left + r) for l, r in t.terms)) for t in right.coaction
    )
    return ComoduleSpec(algebra.name, algebra, A, min(left.max_degree, right.max_degree), coaction)
