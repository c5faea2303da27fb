"""
Independent cross-checks: Hochschild homology from the normalized bar complex, two paths
to the Q_m matrices, and Ext over E(Q_m) from an explicit minimal resolution.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from tateforge.algebra import (
    AlgebraSpec,
    GeneratorKind,
    GradedBasis,
    Monomial,
    derivation_matrix,
    enumerate_basis,
    ext,
    poly,
)
from tateforge.config import settings
from tateforge.exceptions import SizeGuard, UnsupportedModel
from tateforge.f2linalg import (
    BitMatrix,
    SubspaceBasis,
    flip_bit,
    homology,
    image_basis,
    kernel_basis,
    support,
    unit_vector,
    zero_vector,
)
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event, log_performance
from tateforge.margolis import ExtPage, ext_certified
from tateforge.series import E, P, ClosedForm
from tateforge.steenrod import ComoduleSpec, GradedQModule, leibniz_q_derivation, q_degree

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Bar complex

BarTensor = Tuple[Monomial, ...]


@dataclass(frozen=True, eq=False)
class BarComplexSlice:
    """C_s at internal degree d: tensors a_0 ⊗ a_1 ⊗ … ⊗ a_s with a_1..a_s of positive degree."""

    s: int
    degree: int
    basis: Tuple[BarTensor, ...]

    def index(self) -> Dict[BarTensor, int]:
        return {b: i for i, b in enumerate(self.basis)}


def _compositions(total: int, parts: int, minimum: int) -> List[Tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            out.append((first,) + rest)
    return out


def bar_slice(basis: GradedBasis, s: int, d: int) -> BarComplexSlice:
    tensors: List[BarTensor] = []
    for split in _compositions(d, s + 1, 0):
        if any(x == 0 for x in split[1:]):
            continue
        factors = [basis.monomials(x) for x in split]
        tensors.extend(product(*factors))
    return BarComplexSlice(s, d, tuple(sorted(tensors, reverse=True)))


def bar_boundary(a: AlgebraSpec, source: BarComplexSlice, target: BarComplexSlice) -> BitMatrix:
    """b(a_0⊗…⊗a_s) = Σ_j a_0⊗…⊗a_j a_(j+1)⊗…  +  a_s a_0⊗a_1⊗…⊗a_(s-1)."""
    index = target.index()
    columns = []
    for tensor in source.basis:
        hits = []
        s = len(tensor) - 1
        for j in range(s):
            prod = a.mono_mul(tensor[j], tensor[j + 1])
            if prod is None:
                continue
            merged = tensor[:j] + (prod,) + tensor[j + 2:]
            if merged in index:
                hits.append(index[merged])
        if s >= 1:
            prod = a.mono_mul(tensor[s], tensor[0])
            if prod is not None:
                wrapped = (prod,) + tensor[1:s]
                if wrapped in index:
                    hits.append(index[wrapped])
        columns.append(hits)
    return BitMatrix.from_columns(len(target.basis), columns)


class HochschildDims(BaseModel):
    model_config = ConfigDict(extra='forbid')

    algebra: str
    max_degree: int
    s_max: int
    bigraded: Dict[str, int] = Field(default_factory=dict)
    total: List[int]
    certified_total: int


@log_performance("oracles.hochschild_bar")
def hochschild_bar(a: AlgebraSpec, D_small: int, s_max: int) -> HochschildDims:
    """HH_*(a) over F_2 from the normalized bar complex, collapsed to total degree d + s."""
    if D_small > settings.bar_max_degree or s_max > settings.bar_max_length:
        raise SizeGuard(
            f"bar complex {D_small}/{s_max} exceeds the guard",
            {"max_degree": settings.bar_max_degree, "max_length": settings.bar_max_length},
        )
    basis = enumerate_basis(a, D_small)
    bigraded: Dict[Tuple[int, int], int] = {}
    for d in range(D_small + 1):
        slices = [bar_slice(basis, s, d) for s in range(s_max + 2)]
        boundaries = [None] + [bar_boundary(a, slices[s], slices[s - 1]) for s in range(1, s_max + 2)]
        for s in range(s_max + 1):
            size = len(slices[s].basis)
            d_out = boundaries[s] if s >= 1 else BitMatrix.zeros(0, size)
            bigraded[(s, d)] = homology(boundaries[s + 1], d_out).dim
    top = D_small
    total = [0] * (top + 1)
    for (s, d), v in bigraded.items():
        if s + d <= top:
            total[s + d] += v
    # bar length s forces internal degree >= s times the lowest generator degree
    lowest = min((g.degree for g in a.generators), default=top + 1)
    certified = min(top, (s_max + 1) * (1 + lowest) - 1)
    log_computation_event(ComputationEvents.ORACLE_BAR_COMPUTED, algebra=a.name, max_degree=D_small, s_max=s_max)
    return HochschildDims(
        algebra=a.name,
        max_degree=D_small,
        s_max=s_max,
        bigraded={f"{s},{d}": v for (s, d), v in sorted(bigraded.items())},
        total=total,
        certified_total=certified,
    )


ORACLE_ALGEBRAS = {
    "y1": lambda: AlgebraSpec("P(xi1)", (poly("xi1", 1),)),
    "z1sq": lambda: AlgebraSpec("P(xi1^2)", (poly("xi1sq", 2),)),
    "ext1": lambda: AlgebraSpec("E(x1)", (ext("x1", 1),)),
    "f2": lambda: AlgebraSpec("F_2", ()),
}


def oracle_algebra(name: str) -> AlgebraSpec:
    if name not in ORACLE_ALGEBRAS:
        raise UnsupportedModel(f"no bar-complex input named {name!r}", {"known": sorted(ORACLE_ALGEBRAS)})
    return ORACLE_ALGEBRAS[name]()


def hochschild_closed(a: AlgebraSpec) -> ClosedForm:
    """HH_* of a free graded-commutative algebra: P(x) gives P(x)⊗E(σx), E(x) gives E(x)⊗Γ(σx)."""
    factors = []
    for g in a.generators:
        if g.kind == GeneratorKind.POLYNOMIAL:
            factors += [*P(g.degree), *E(g.degree + 1)]
        else:
            factors += [*E(g.degree), *P(g.degree + 1)]
    return ClosedForm.product(*factors, label=f"HH({a.name})")


# ---------------------------------------------------------------------------
# Two paths to Q_m

class TwoPathReport(BaseModel):
    model_config = ConfigDict(extra='forbid')

    space: str
    m: int
    degrees_checked: int
    equal: bool
    first_mismatch_degree: Optional[int] = None


@log_performance("oracles.qm_two_paths")
def qm_two_paths(c: ComoduleSpec, m: int, N: Optional[int] = None) -> TwoPathReport:
    """Coaction extraction against the Leibniz extension of Q_m's generator values."""
    D = leibniz_q_derivation(m, c)
    top = min(N if N is not None else c.max_degree, c.max_degree)
    mismatch = None
    for d in range(top + 1):
        extracted = c.q_matrix(m, d)
        leibniz = derivation_matrix(D, d, c.basis)
        if not np.array_equal(extracted.to_dense(), leibniz.to_dense()):
            mismatch = d
            break
    report = TwoPathReport(space=c.name, m=m, degrees_checked=top + 1, equal=mismatch is None, first_mismatch_degree=mismatch)
    log_computation_event(ComputationEvents.ORACLE_TWO_PATHS, space=c.name, m=m, equal=report.equal)
    return report


# ---------------------------------------------------------------------------
# Minimal resolution over E(Q)

@dataclass(frozen=True, eq=False)
class EModule:
    """A bounded graded E(Q)-module; Q raises degree by q and q_maps[t] goes t → t+q."""

    q: int
    top: int
    dims: Dict[int, int]
    q_maps: Dict[int, BitMatrix]

    def q_map(self, t: int) -> BitMatrix:
        if t in self.q_maps:
            return self.q_maps[t]
        return BitMatrix.zeros(self.dims.get(t + self.q, 0), self.dims.get(t, 0))


def dual_module(c: GradedQModule, m: int, N: int) -> EModule:
    """The cohomology H^*(c) with Q_m acting upward, as the transpose of the homology action."""
    q = q_degree(m)
    dims = {t: c.dim(t) for t in range(N + 1)}
    maps = {t: c.q_matrix(m, t + q).transpose() for t in range(N + 1 - q)}
    return EModule(q, N, dims, maps)


def _cover(X: EModule) -> Tuple[Dict[int, List[np.ndarray]], EModule, Dict[int, BitMatrix]]:
    """Minimal generators of X, the kernel of the free cover F → X, and the cover's degreewise maps."""
    q, top = X.q, X.top
    gens: Dict[int, List[np.ndarray]] = {}
    for t in range(top + 1):
        dim = X.dims.get(t, 0)
        if not dim:
            continue
        decomposables = image_basis(X.q_map(t - q)) if t - q >= 0 else SubspaceBasis.empty(dim)
        chosen = [unit_vector(dim, j) for j in decomposables.complement_columns()]
        if chosen:
            gens[t] = chosen

    # F_t has basis [generators in degree t] + [Q·generators from degree t - q]
    epsilon: Dict[int, BitMatrix] = {}
    free_dims: Dict[int, int] = {}
    for t in range(top + 1):
        own = gens.get(t, [])
        lower = gens.get(t - q, [])
        images = list(own) + [X.q_map(t - q).apply(v) for v in lower]
        free_dims[t] = len(images)
        rows = X.dims.get(t, 0)
        if images:
            epsilon[t] = BitMatrix.from_packed_rows(images, rows).transpose()
        else:
            epsilon[t] = BitMatrix.zeros(rows, 0)

    kernels = {t: kernel_basis(epsilon[t]) for t in range(top + 1)}
    k_dims = {t: kernels[t].dim for t in range(top + 1)}
    k_maps: Dict[int, BitMatrix] = {}
    for t in range(top + 1 - q):
        n_own = len(gens.get(t, []))
        offset = len(gens.get(t + q, []))
        columns = []
        for v in kernels[t].rows():
            # Q moves generator slot j to the Q·generator slot offset + j and kills Q·generators
            image = zero_vector(free_dims[t + q])
            for j in support(v, free_dims[t]):
                if j < n_own:
                    flip_bit(image, offset + j)
            coords = kernels[t + q].coordinates(image)
            columns.append([r for r, bit in enumerate(coords) if bit])
        k_maps[t] = BitMatrix.from_columns(k_dims[t + q], columns)
    return gens, EModule(q, top, k_dims, k_maps), epsilon


@log_performance("oracles.resolution_ext")
def resolution_ext(c: GradedQModule, m: int, N: int, s_max: int) -> ExtPage:
    """Ext^{s,t}_{E(Q_m)}(H^*(c), F_2) as generator counts of a minimal free resolution."""
    q = q_degree(m)
    X = dual_module(c, m, N)
    dims: Dict[Tuple[int, int], int] = {}
    certified: Dict[Tuple[int, int], bool] = {}
    for s in range(s_max + 1):
        gens, kernel, _ = _cover(X)
        for t in range(N + 1):
            dims[(s, t)] = len(gens.get(t, []))
            certified[(s, t)] = ext_certified(s, t, m, N)
        X = kernel
    log_computation_event(ComputationEvents.ORACLE_RESOLUTION, space=c.name, m=m, s_max=s_max, max_degree=N)
    return ExtPage(m, c.name, s_max, N, dims, certified, provenance="minimal_resolution")
