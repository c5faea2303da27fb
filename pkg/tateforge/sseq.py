"""
Bigraded page engine for the homological Tate and homotopy fixed point spectral sequences.

Column k holds t^k ⊗ H_*(THH(y(n))); t is an integer column index, never a generator.
d²(t^k x) = t^(k+1) σx, so a cell (k, d) maps to (k+1, d+1) and t^k x sits in total
degree -2k + |x|.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from tateforge.algebra import Monomial
from tateforge.concurrency import parallel_map
from tateforge.config import settings
from tateforge.exceptions import CoactionNotWellDefined, InvalidRunConfig, QmNotWellDefined
from tateforge.f2linalg import (
    BitMatrix,
    HomologyResult,
    SubspaceBasis,
    flip_bit,
    get_bit,
    homology,
    image_basis,
    kernel_basis,
    rank,
    support,
    unit_vector,
    zero_vector,
)
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event, log_performance
from tateforge.series import E, P, ClosedForm, DimReport, compare_dicts
from tateforge.steenrod import (
    ComoduleSpec,
    SpaceId,
    SpaceKind,
    catalog,
    dual_steenrod_algebra,
    hf2_model,
    phi_matrix,
    q_degree,
    sigma_matrix,
    xi_count,
)

logger = get_logger(__name__)


class PageKind(str, Enum):
    TATE = "tate"
    HFP = "hfp"


class CellKind(str, Enum):
    E2 = "e2"
    HOMOLOGY = "homology"
    COKERNEL = "cokernel"


@lru_cache(maxsize=32)
def thh_model(n: Optional[int], N: int) -> ComoduleSpec:
    """H_*(THH(y(n))); n=None is the THH(HF_2) model."""
    if n is None:
        return hf2_model(0, N)
    return catalog(SpaceId(SpaceKind.THH_Y, n), N)


# ---------------------------------------------------------------------------
# Cells and pages

@dataclass(eq=False)
class Cell:
    column: int
    degree: int
    kind: CellKind
    ambient: int
    certified: bool
    homology: Optional[HomologyResult] = None
    image: Optional[SubspaceBasis] = None

    @cached_property
    def _quotient_columns(self) -> List[int]:
        return self.image.complement_columns()

    @property
    def dim(self) -> int:
        if self.kind == CellKind.E2:
            return self.ambient
        if self.kind == CellKind.COKERNEL:
            return len(self._quotient_columns)
        return self.homology.dim

    def lift(self, j: int) -> np.ndarray:
        """A representative in H_*(THH) of the j-th basis class."""
        if self.kind == CellKind.E2:
            return unit_vector(self.ambient, j)
        if self.kind == CellKind.COKERNEL:
            return unit_vector(self.ambient, self._quotient_columns[j])
        return self.homology.representatives.basis[j].copy()

    def project(self, vec: np.ndarray) -> List[int]:
        """Class coordinates of an element of this cell's degree (a cycle for homology cells)."""
        if self.kind == CellKind.E2:
            return [get_bit(vec, j) for j in range(self.ambient)]
        if self.kind == CellKind.COKERNEL:
            reduced = self.image.reduce(vec)
            return [get_bit(reduced, c) for c in self._quotient_columns]
        return self.homology.class_coordinates(vec)

    def is_cycle(self, vec: np.ndarray) -> bool:
        if self.kind != CellKind.HOMOLOGY:
            return True
        return self.homology.cycles.contains(vec)


def _coords_matrix(columns: List[List[int]], rows: int) -> BitMatrix:
    hits = [[r for r, bit in enumerate(col) if bit] for col in columns]
    return BitMatrix.from_columns(rows, hits)


@dataclass(eq=False)
class BigradedPage:
    n: Optional[int]
    kind: PageKind
    columns: Tuple[int, int]
    max_degree: int
    model: ComoduleSpec
    d2: Dict[int, BitMatrix]
    cells: Dict[Tuple[int, int], Cell]
    page_index: int = 2
    top_edge: bool = False
    _q_cells: Dict = field(default_factory=dict, repr=False)

    @property
    def label(self) -> str:
        n = "inf" if self.n is None else self.n
        return f"{self.kind.value}E{self.page_index}(n={n})[{self.columns[0]}..{self.columns[1]}]"

    def column_range(self) -> range:
        return range(self.columns[0], self.columns[1] + 1)

    def cell(self, k: int, d: int) -> Optional[Cell]:
        return self.cells.get((k, d))

    def dims(self, k: int) -> List[int]:
        return [self.cells[(k, d)].dim for d in range(self.max_degree + 1)]

    def certified_dims(self, k: int) -> Dict[int, int]:
        return {d: c.dim for (kk, d), c in self.cells.items() if kk == k and c.certified}

    def is_certified_column(self, k: int) -> bool:
        return any(c.certified for (kk, _), c in self.cells.items() if kk == k)

    @staticmethod
    def total_degree(k: int, d: int) -> int:
        return -2 * k + d

    def d2_matrix(self, k: int, d: int) -> Optional[BitMatrix]:
        """d² out of cell (k, d), or None past the last column or the degree cap."""
        if k + 1 > self.columns[1] or d + 1 > self.max_degree:
            return None
        return self.d2[d]

    def capped(self, k: int, d: int) -> bool:
        """Cell (k, d) lost its outgoing d² to the degree cap, so its cycles are not checked."""
        return k + 1 <= self.columns[1] and d + 1 > self.max_degree

    def chart_lines(self) -> List[str]:
        lines = []
        for k in self.column_range():
            for d in range(self.max_degree + 1):
                lines.append(f"{k}\t{d}\t{self.cells[(k, d)].dim}\t{self.page_index}")
        return lines

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "n": self.n,
            "kind": self.kind.value,
            "page": self.page_index,
            "columns": list(self.columns),
            "max_degree": self.max_degree,
            "cells": [
                {
                    "column": k,
                    "internal_degree": d,
                    "total_degree": self.total_degree(k, d),
                    "dim": c.dim,
                    "kind": c.kind.value,
                    "certified": c.certified,
                }
                for (k, d), c in sorted(self.cells.items())
            ],
            "d2": [
                {
                    "internal_degree": d,
                    "pairs": [[int(j), int(i)] for i, j in zip(*np.nonzero(m.to_dense()))],
                }
                for d, m in sorted(self.d2.items())
                if self.page_index == 2
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@log_performance("sseq.tate_e2")
def tate_e2(
    n: Optional[int],
    columns: Tuple[int, int],
    N: int,
    kind: PageKind = PageKind.TATE,
    model: Optional[ComoduleSpec] = None,
) -> BigradedPage:
    """E² = t^k ⊗ H_*(THH(y(n))) for k in columns, with d² = t·σ."""
    lo, hi = columns
    if hi < lo:
        raise InvalidRunConfig("empty column range", {"columns": list(columns)})
    if kind == PageKind.HFP and lo < 0:
        raise InvalidRunConfig("homotopy fixed point pages have no negative columns", {"columns": list(columns)})
    model = model or thh_model(n, N)
    d2 = dict(zip(range(N), parallel_map(lambda d: sigma_matrix(model, d), range(N))))
    cells = {
        (k, d): Cell(k, d, CellKind.E2, model.dim(d), True)
        for k in range(lo, hi + 1)
        for d in range(N + 1)
    }
    page = BigradedPage(n, kind, (lo, hi), N, model, d2, cells)
    log_computation_event(ComputationEvents.PAGE_E2_BUILT, page=page.label, cells=len(cells))
    return page


@log_performance("sseq.run_d2")
def run_d2(p: BigradedPage, top_edge: bool = False) -> BigradedPage:
    """Cellwise d²-homology; with top_edge the last column is the cokernel V(i)."""
    lo, hi = p.columns
    N = p.max_degree

    def build(key: Tuple[int, int]) -> Cell:
        k, d = key
        dim = p.model.dim(d)
        has_in = k > lo and d >= 1
        d_in = p.d2[d - 1] if has_in else BitMatrix.zeros(dim, 0)
        incoming_ok = k > lo or (p.kind == PageKind.HFP and k == 0)
        if top_edge and k == hi:
            return Cell(k, d, CellKind.COKERNEL, dim, incoming_ok, image=image_basis(d_in))
        out = p.d2_matrix(k, d)
        d_out = out if out is not None else BitMatrix.zeros(0, dim)
        certified = incoming_ok and out is not None
        return Cell(k, d, CellKind.HOMOLOGY, dim, certified, homology=homology(d_in, d_out))

    keys = sorted(p.cells)
    cells = dict(zip(keys, parallel_map(build, keys)))
    page = BigradedPage(p.n, p.kind, p.columns, N, p.model, p.d2, cells, 3, top_edge)
    log_computation_event(
        ComputationEvents.PAGE_D2_RUN,
        page=page.label,
        certified=sum(c.certified for c in cells.values()),
    )
    return page


def tate_e3(n: Optional[int], columns: Tuple[int, int], N: int, model: Optional[ComoduleSpec] = None) -> BigradedPage:
    return run_d2(tate_e2(n, columns, N, model=model))


def hfp_pages(n: int, N: int, top_column: Optional[int] = None) -> Tuple[BigradedPage, BigradedPage]:
    """(E², E³) of the homotopy fixed point spectral sequence on columns 0..top_column."""
    top = settings.default_window - 1 if top_column is None else top_column
    e2 = tate_e2(n, (0, top), N, kind=PageKind.HFP)
    return e2, run_d2(e2)


# ---------------------------------------------------------------------------
# Truncations

@dataclass(eq=False)
class TruncatedPage:
    side: str
    n: int
    i: int
    page: BigradedPage

    @property
    def edge_cells(self) -> Dict[int, Cell]:
        return {d: c for (k, d), c in self.page.cells.items() if k == self.i}

    @property
    def label(self) -> str:
        return f"{self.side}[{self.i}](n={self.n})"


@log_performance("sseq.truncate_tp")
def truncate_tp(n: int, i: int, window: Optional[int], N: int) -> TruncatedPage:
    """TP(y(n))[i]: columns i-window+1..i with V(i) at the top."""
    window = window or settings.default_window
    if window < 3:
        raise InvalidRunConfig("window must be at least 3 columns", {"window": window})
    page = run_d2(tate_e2(n, (i - window + 1, i), N), top_edge=True)
    log_computation_event(ComputationEvents.PAGE_TRUNCATED, side="tp", n=n, i=i, window=window)
    return TruncatedPage("tp", n, i, page)


@log_performance("sseq.tcminus_truncation")
def tcminus_truncation(n: int, i: int, N: int) -> TruncatedPage:
    """TC⁻(y(n))[i]: columns 0..i with V(i) at the top."""
    if i < 0:
        raise InvalidRunConfig("TC⁻ truncations start at i = 0", {"i": i})
    page = run_d2(tate_e2(n, (0, i), N, kind=PageKind.HFP), top_edge=True)
    log_computation_event(ComputationEvents.PAGE_TRUNCATED, side="tcminus", n=n, i=i)
    return TruncatedPage("tcminus", n, i, page)


# ---------------------------------------------------------------------------
# Q_m on page cells

def cell_q_matrix(page: BigradedPage, m: int, k: int, d: int) -> BitMatrix:
    """Q_m from cell (k, d) to (k, d - q) by lift, act, project; Q_m(t) = 0."""
    key = (m, k, d)
    if key not in page._q_cells:
        page._q_cells[key] = _cell_q_matrix(page, m, k, d)
    return page._q_cells[key]


def _cell_q_matrix(page: BigradedPage, m: int, k: int, d: int) -> BitMatrix:
    source = page.cells[(k, d)]
    q = q_degree(m)
    if d - q < 0:
        return BitMatrix.zeros(0, source.dim)
    target = page.cells[(k, d - q)]
    if source.dim == 0 or target.dim == 0:
        return BitMatrix.zeros(target.dim, source.dim)
    if source.kind == CellKind.HOMOLOGY and page.capped(k, d):
        return BitMatrix.zeros(target.dim, source.dim)
    Q = page.model.q_matrix(m, d)
    if source.kind == CellKind.COKERNEL:
        for row in source.image.rows():
            if not target.image.contains(Q.apply(row)):
                raise QmNotWellDefined(
                    f"Q_{m} does not preserve im d² in degree {d}",
                    {"column": k, "degree": d, "m": m},
                )
    columns = []
    for j in range(source.dim):
        image = Q.apply(source.lift(j))
        if not target.is_cycle(image):
            raise QmNotWellDefined(f"Q_{m} of a d²-cycle is not a cycle", {"column": k, "degree": d, "m": m})
        columns.append(target.project(image))
    return _coords_matrix(columns, target.dim)


@dataclass(eq=False)
class PageModule:
    """Selected columns of a page as one graded E(Q_m)-module in total degree."""

    page: BigradedPage
    columns: Tuple[int, ...]
    name: str
    edge_column: Optional[int] = None
    primitive_source: Optional["TruncatedPage"] = None
    _cache: Dict = field(default_factory=dict, repr=False)

    @property
    def max_degree(self) -> int:
        return self.page.max_degree

    def degrees(self) -> List[int]:
        N = self.page.max_degree
        return sorted({-2 * k + d for k in self.columns for d in range(N + 1)})

    def cells_at(self, total: int) -> List[Tuple[int, int]]:
        N = self.page.max_degree
        return [(k, total + 2 * k) for k in self.columns if 0 <= total + 2 * k <= N]

    def dim(self, total: int) -> int:
        return sum(self.page.cells[key].dim for key in self.cells_at(total))

    def q_matrix(self, m: int, total: int) -> BitMatrix:
        key = (m, total)
        if key in self._cache:
            return self._cache[key]
        q = q_degree(m)
        sources = self.cells_at(total)
        targets = self.cells_at(total - q)
        row_offset, pos = {}, 0
        for k, d in targets:
            row_offset[k] = pos
            pos += self.page.cells[(k, d)].dim
        dense = np.zeros((pos, self.dim(total)), dtype=np.uint8)
        col = 0
        for k, d in sources:
            width = self.page.cells[(k, d)].dim
            if k in row_offset and width:
                block = cell_q_matrix(self.page, m, k, d).to_dense()
                r0 = row_offset[k]
                dense[r0:r0 + block.shape[0], col:col + width] = block
            col += width
        matrix = BitMatrix.from_dense(dense) if pos else BitMatrix.zeros(0, dense.shape[1])
        self._cache[key] = matrix
        return matrix

    def certified(self, total: int, m: int) -> bool:
        N = self.page.max_degree
        q = q_degree(m)
        for k in self.columns:
            d = total + 2 * k
            if d < 0:
                continue
            if d + q > N:
                return False
            for dd in (d, d + q, d - q):
                if 0 <= dd and not self.page.cells[(k, dd)].certified:
                    return False
        return True

    def stable(self) -> "PageModule":
        """The columns below the truncation edge."""
        cols = tuple(k for k in self.columns if k != self.edge_column)
        return PageModule(self.page, cols, f"{self.name}:stable")

    def edge(self) -> "PageModule":
        cols = tuple(k for k in self.columns if k == self.edge_column)
        return PageModule(self.page, cols, f"{self.name}:edge", self.edge_column)

    def primitives(self, lo: int, hi: int) -> Dict[int, SubspaceBasis]:
        if self.primitive_source is None:
            raise InvalidRunConfig(f"{self.name} carries no t-coaction")
        found = tp_primitives(self.primitive_source.n, self.primitive_source.i, lo, hi, self.max_degree)
        return {t: r.basis for t, r in found.items()}


def page_model(space: SpaceId, N: int) -> PageModule:
    """The E-comodule model behind a TPModel / TCminusModel space id."""
    if space.kind == SpaceKind.TP_MODEL:
        trunc = truncate_tp(space.n, space.i, settings.default_window, N)
        cols = tuple(k for k in trunc.page.column_range() if k != trunc.page.columns[0])
        return PageModule(trunc.page, cols, space.label, space.i, trunc)
    if space.kind == SpaceKind.TCMINUS_MODEL:
        trunc = tcminus_truncation(space.n, space.i, N)
        return PageModule(trunc.page, tuple(trunc.page.column_range()), space.label, space.i)
    raise InvalidRunConfig(f"{space.label} is not a page model")


def column_module(page: BigradedPage, k: int) -> PageModule:
    return PageModule(page, (k,), f"{page.label}:col{k}")


def column_margolis(page: BigradedPage, m: int, k: int):
    """Margolis homology of one column, keyed by internal degree."""
    from tateforge.margolis import MargolisResult, margolis_homology

    result = margolis_homology(column_module(page, k), m)
    shift = 2 * k
    return MargolisResult(
        m,
        result.space,
        {t + shift: v for t, v in result.dims.items()},
        {t + shift: v for t, v in result.representatives.items()},
        {t + shift: v for t, v in result.certified.items()},
    )


# ---------------------------------------------------------------------------
# Tower maps

@dataclass(eq=False)
class TowerMap:
    """TruncatedPage at i → TruncatedPage at i-1, cell by cell."""

    source: TruncatedPage
    target: TruncatedPage

    def cell_matrix(self, k: int, d: int) -> Optional[BitMatrix]:
        s = self.source.page.cells.get((k, d))
        t = self.target.page.cells.get((k, d))
        if s is None or t is None:
            return None
        columns = [t.project(s.lift(j)) for j in range(s.dim)]
        return _coords_matrix(columns, t.dim)

    def shared_columns(self) -> List[int]:
        lo = max(self.source.page.columns[0], self.target.page.columns[0])
        hi = min(self.source.page.columns[1], self.target.page.columns[1])
        return list(range(lo, hi + 1))


@dataclass(frozen=True)
class TowerVerdict:
    side: str
    n: int
    m: int
    i: int
    column_ranks: Dict[int, int]
    certified_degrees: Dict[int, List[int]]

    @property
    def edge_rank(self) -> int:
        return self.column_ranks.get(self.i - 1, 0)

    @property
    def verdict(self) -> str:
        return "ZERO" if not any(self.column_ranks.values()) else "NONZERO"

    def to_dict(self) -> Dict:
        return {
            "side": self.side,
            "n": self.n,
            "m": self.m,
            "i": self.i,
            "verdict": self.verdict,
            "edge_rank": self.edge_rank,
            "column_ranks": {str(k): v for k, v in sorted(self.column_ranks.items())},
            "certified_degrees": {str(k): v for k, v in sorted(self.certified_degrees.items())},
        }


def _margolis_cell(page: BigradedPage, m: int, k: int, d: int) -> HomologyResult:
    q = q_degree(m)
    return homology(cell_q_matrix(page, m, k, d + q), cell_q_matrix(page, m, k, d))


def _margolis_certified(page: BigradedPage, m: int, k: int, d: int) -> bool:
    q = q_degree(m)
    if d + q > page.max_degree:
        return False
    return all(page.cells[(k, dd)].certified for dd in (d, d + q, d - q) if dd >= 0)


def induced_rank(tower: TowerMap, m: int, k: int, d: int) -> int:
    """Rank of the map induced on H(−;Q_m) at cell (k, d)."""
    source = _margolis_cell(tower.source.page, m, k, d)
    if source.dim == 0:
        return 0
    target = _margolis_cell(tower.target.page, m, k, d)
    M = tower.cell_matrix(k, d)
    images = []
    for z in source.representatives.rows():
        images.append(target.class_coordinates(M.apply(z)))
    return rank(_coords_matrix(images, target.representatives.dim)) if images else 0


@log_performance("sseq.tower_margolis_verdict")
def tower_margolis_verdict(
    n: int, m: int, i: int, N: int, window: Optional[int] = None, side: str = "tp"
) -> TowerVerdict:
    """Is TP[i] → TP[i-1] (or TC⁻[i] → TC⁻[i-1]) zero on Margolis homology?"""
    if side == "tp":
        source = truncate_tp(n, i, window, N)
        target = truncate_tp(n, i - 1, window, N)
        skip = {source.page.columns[0]}
    elif side == "tcminus":
        if i < 1:
            raise InvalidRunConfig("TC⁻ tower maps start at i = 1", {"i": i})
        source = tcminus_truncation(n, i, N)
        target = tcminus_truncation(n, i - 1, N)
        skip = set()
    else:
        raise InvalidRunConfig(f"unknown tower side {side!r}")
    tower = TowerMap(source, target)
    ranks: Dict[int, int] = {}
    degrees: Dict[int, List[int]] = {}
    for k in tower.shared_columns():
        if k in skip:
            continue
        good = [
            d for d in range(N + 1)
            if _margolis_certified(source.page, m, k, d) and _margolis_certified(target.page, m, k, d)
        ]
        ranks[k] = sum(parallel_map(lambda d: induced_rank(tower, m, k, d), good))
        degrees[k] = good
    verdict = TowerVerdict(side, n, m, i, ranks, degrees)
    log_computation_event(ComputationEvents.TOWER_VERDICT, side=side, n=n, m=m, i=i, verdict=verdict.verdict)
    return verdict


# ---------------------------------------------------------------------------
# Closed forms

def thh_closed(n: int) -> ClosedForm:
    return ClosedForm.product(
        *P(*[2 ** k - 1 for k in range(1, n + 1)]), *E(*[2 ** k for k in range(1, n + 1)]), label=f"H_*(THH(y({n})))"
    )


def tate_e3_closed(n: Optional[int], N: int = 64) -> ClosedForm:
    """Interior Tate E³ column: P(ξ̄_1², ξ̄_2', …, ξ̄_n') ⊗ E(ξ̄_nσξ̄_n)."""
    if n is None:
        squares = [2 * (2 ** j - 1) for j in range(1, xi_count(N) + 1)]
        primes = [2 ** k - 1 for k in range(2, xi_count(N) + 2)]
        return ClosedForm.product(*P(*squares), *E(*primes), label="E3(inf)")
    if n == 0:
        return ClosedForm.product(label="E3(0)")
    return ClosedForm.product(
        *P(2, *[2 ** k - 1 for k in range(2, n + 1)]), *E(2 ** (n + 1) - 1), label=f"E3({n})"
    )


def _z_factors(n: int):
    return P(2, *[2 ** k - 1 for k in range(2, n + 1)])


def t0_closed(n: int) -> ClosedForm:
    """Π (1 + q^(2^i)) - 1 for i = 1..n: the σξ̄-monomials other than 1."""
    return ClosedForm.product(*E(*[2 ** i for i in range(1, n + 1)])) - ClosedForm.product()


def hfp_torsion_closed(n: int) -> ClosedForm:
    """T = P(ξ̄_1², ξ̄_2', …, ξ̄_n') ⊗ T_0, living in column 0 only."""
    return t0_closed(n).times(*_z_factors(n))


def hfp_column0_closed(n: int) -> ClosedForm:
    return tate_e3_closed(n) + hfp_torsion_closed(n)


def z_closed(n: int) -> ClosedForm:
    return ClosedForm.product(*_z_factors(n), label=f"H_*(z({n}))")


def zmodvn_closed(n: int) -> ClosedForm:
    return z_closed(n).times(*E(2 ** (n + 1) - 1))


def vi_expected(n: int, N: int) -> Dict[int, int]:
    """dim V(i)_d = dim THH_d − dim B_d with B_d = THH_{d−1} − E³_{d−1} − B_{d−1}."""
    thh = thh_closed(n).expand(0, N)
    e3 = tate_e3_closed(n).expand(0, N)
    boundaries = {0: 0}
    for d in range(1, N + 1):
        boundaries[d] = thh[d - 1] - e3[d - 1] - boundaries[d - 1]
    return {d: thh[d] - boundaries[d] for d in range(N + 1)}


def vi_closed_n1() -> ClosedForm:
    return ClosedForm.product(*P(1)) + ClosedForm.product(*P(2), shift=3)


def tcminus_limit_closed(n: int, m: int, column: int) -> ClosedForm:
    """lim_i H(TC⁻(y(n))[i]; Q_m) in one column, by the four-case split."""
    if m == 0:
        if column == 0:
            return ClosedForm.product(label="1") + t0_closed(n).times(*P(2 * (2 ** n - 1)))
        return ClosedForm.product(label="P(t)")
    if m <= n - 1:
        return ClosedForm.zero()
    if m == n:
        if column == 0:
            return t0_closed(n).times(*_z_factors(n))
        return ClosedForm.zero()
    if column == 0:
        return hfp_column0_closed(n)
    return tate_e3_closed(n)


# ---------------------------------------------------------------------------
# Comparisons

def interior_columns(page: BigradedPage) -> List[int]:
    """Columns whose cells are genuine E³ (not a window cut, not a truncation edge)."""
    lo, hi = page.columns
    start = lo if (page.kind == PageKind.HFP and lo == 0) else lo + 1
    return list(range(start, hi))


def compare_column(page: BigradedPage, k: int, form: ClosedForm, label: str = "") -> DimReport:
    machine = page.certified_dims(k)
    degrees = sorted(machine)
    expected = form.expand(0, page.max_degree)
    return compare_dicts(machine, {d: expected[d] for d in degrees}, degrees, label or f"{page.label}:col{k}")


def check_tate_e3(page: BigradedPage) -> List[DimReport]:
    form = tate_e3_closed(page.n, page.max_degree)
    return [compare_column(page, k, form) for k in interior_columns(page)]


def check_hfp_e3(page: BigradedPage) -> List[DimReport]:
    reports = []
    for k in interior_columns(page):
        form = hfp_column0_closed(page.n) if k == 0 else tate_e3_closed(page.n)
        reports.append(compare_column(page, k, form))
    return reports


def check_edge(trunc: TruncatedPage) -> DimReport:
    machine = {d: c.dim for d, c in trunc.edge_cells.items() if c.certified}
    expected = vi_expected(trunc.n, trunc.page.max_degree)
    degrees = sorted(machine)
    return compare_dicts(machine, expected, degrees, f"V({trunc.i}) n={trunc.n}")


def phi_e3_ranks(n: int, N: int, column: int = 0) -> Dict[int, Tuple[int, int]]:
    """Per degree, (dim E³(n), rank of φ_n on those classes into E³(∞)); equal means injective."""
    target_model = hf2_model(n, N)
    source = tate_e3(n, (column - 1, column + 1), N)
    target = tate_e3(None, (column - 1, column + 1), N, model=target_model)
    out = {}
    for d in range(N):
        s = source.cells[(column, d)]
        t = target.cells[(column, d)]
        if not (s.certified and t.certified):
            continue
        if s.dim == 0:
            out[d] = (0, 0)
            continue
        phi = phi_matrix(n, d, source.model, target_model)
        images = [t.project(phi.apply(s.lift(j))) for j in range(s.dim)]
        out[d] = (s.dim, rank(_coords_matrix(images, t.dim)))
    return out


# ---------------------------------------------------------------------------
# TC⁻ limits and the K(n)-input

@dataclass(frozen=True)
class LimitTable:
    n: int
    m: int
    i: int
    machine: Dict[int, Dict[int, int]]
    reports: Tuple[DimReport, ...]
    edge: Dict[int, int]

    @property
    def equal(self) -> bool:
        return all(r.equal for r in self.reports)

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "m": self.m,
            "i": self.i,
            "equal": self.equal,
            "columns": [{"column": k, "dims": v} for k, v in sorted(self.machine.items())],
            "edge_transient": self.edge,
            "reports": [r.model_dump() for r in self.reports],
        }


@log_performance("sseq.tcminus_limit")
def tcminus_limit_margolis(n: int, m: int, i: int, N: int) -> LimitTable:
    """Margolis homology of the tower-stable columns 0..i-1 of TC⁻[i], plus the transient edge."""
    trunc = tcminus_truncation(n, i, N)
    machine: Dict[int, Dict[int, int]] = {}
    reports = []
    for k in range(0, i):
        result = column_margolis(trunc.page, m, k)
        dims = result.certified_dims()
        machine[k] = dims
        expected = tcminus_limit_closed(n, m, k).expand(0, N)
        degrees = sorted(dims)
        reports.append(compare_dicts(dims, {d: expected[d] for d in degrees}, degrees, f"lim H(TC-[{i}];Q{m}) col{k}"))
    edge = column_margolis(trunc.page, m, i).certified_dims()
    table = LimitTable(n, m, i, machine, tuple(reports), {d: v for d, v in edge.items() if v})
    log_computation_event(ComputationEvents.TOWER_LIMIT, n=n, m=m, i=i, equal=table.equal)
    return table


def k_input_pattern(n: int, i: int, N: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """(stable, transient edge) H(TC⁻(y(n))[i]; Q_n) by total degree."""
    from tateforge.margolis import margolis_homology

    module = page_model(SpaceId(SpaceKind.TCMINUS_MODEL, n, i), N)
    stable = margolis_homology(module.stable(), n).certified_dims()
    edge = margolis_homology(module.edge(), n).certified_dims()
    return stable, edge


# ---------------------------------------------------------------------------
# Comodule primitives of TP[i] (t-power coaction included)

Series = FrozenSet[Tuple[Monomial, int]]


def _series_mul(a: Series, b: Series, A, max_shift: int) -> Series:
    acc: set = set()
    for l1, e1 in a:
        for l2, e2 in b:
            if e1 + e2 > max_shift:
                continue
            acc ^= {(A.mono_mul(l1, l2), e1 + e2)}
    return frozenset(acc)


def psi_t_power(k: int, max_shift: int, A) -> Series:
    """ψ(t)^k / t^k = (1 + Σ_j ξ̄_j² t^(2^j - 1))^k as pairs (left monomial, extra t-power)."""
    one: Series = frozenset({(A.unit(), 0)})
    S: Series = frozenset(
        (A.gen(f"xi{j}", 2), 2 ** j - 1) for j in range(1, A.rank + 1) if 2 ** j - 1 <= max_shift
    )
    if k >= 0:
        base = frozenset(one | S)
    else:
        base, term = one, one
        while True:
            term = _series_mul(term, S, A, max_shift)
            if not term:
                break
            base = frozenset(base ^ term)
    result = one
    for _ in range(abs(k)):
        result = _series_mul(result, base, A, max_shift)
    return result


@dataclass(frozen=True, eq=False)
class PrimitiveResult:
    total_degree: int
    dim: int
    basis: SubspaceBasis
    certified: bool
    cells: Tuple[Tuple[int, int], ...]


@log_performance("sseq.tp_primitives")
def tp_primitives(n: int, i: int, lo: int, hi: int, N: int) -> Dict[int, PrimitiveResult]:
    """Kernel of ν − 1⊗id on TP(y(n))[i] per total degree in lo..hi."""
    bottom = min(-(hi // 2) - 1, i - 2)
    trunc = run_d2(tate_e2(n, (bottom, i), N), top_edge=True)
    model = trunc.model
    K = max(xi_count(2 * (i - bottom) + N), 1)
    A = dual_steenrod_algebra(max(K, model.steenrod.rank))
    pad = A.rank - model.steenrod.rank
    series_cache: Dict[int, Series] = {}

    def series(k: int) -> Series:
        if k not in series_cache:
            series_cache[k] = psi_t_power(k, i - k, A)
        return series_cache[k]

    def coact_vector(d: int, vec: np.ndarray) -> Dict[Monomial, np.ndarray]:
        """Left monomial → right-factor vector in degree d − |left|."""
        acc: Dict[Monomial, set] = {}
        for j in support(vec, model.dim(d)):
            mono = model.basis.monomials(d)[j]
            for l, r in model.coact(mono).terms:
                acc.setdefault(tuple(l) + (0,) * pad, set()).symmetric_difference_update({r})
        out = {}
        for l, rights in acc.items():
            if not rights:
                continue
            v = zero_vector(model.dim(d - A.degree(l)))
            for r in rights:
                flip_bit(v, model.basis.index_of(r))
            out[l] = v
        return out

    results: Dict[int, PrimitiveResult] = {}
    for total in range(lo, hi + 1):
        cells = [(k, total + 2 * k) for k in range(bottom + 1, i + 1) if 0 <= total + 2 * k]
        certified = all(d <= (N if k == i else N - 1) for k, d in cells)
        # capped cells hold non-cycles; those totals are uncertified anyway
        cells = [(k, d) for k, d in cells if d <= N and not trunc.capped(k, d)]
        keys: Dict[Tuple, int] = {}
        columns: List[List[int]] = []
        for k, d in cells:
            cell = trunc.cells[(k, d)]
            for j in range(cell.dim):
                hits: List[int] = []
                for left, right in coact_vector(d, cell.lift(j)).items():
                    rd = d - A.degree(left)
                    for extra_left, e in series(k):
                        combined = A.mono_mul(left, extra_left)
                        if combined == A.unit():
                            continue
                        target = trunc.cells.get((k + e, rd))
                        if target is None or target.dim == 0:
                            continue
                        if not target.is_cycle(right):
                            raise CoactionNotWellDefined(
                                "coaction right factor is not a d²-cycle",
                                {"source": [k, d], "target": [k + e, rd], "n": n, "i": i},
                            )
                        for idx, bit in enumerate(target.project(right)):
                            if bit:
                                hits.append(keys.setdefault((combined, k + e, rd, idx), len(keys)))
                columns.append(hits)
        matrix = BitMatrix.from_columns(len(keys), columns) if columns else BitMatrix.zeros(0, 0)
        basis = kernel_basis(matrix)
        results[total] = PrimitiveResult(total, basis.dim, basis, certified, tuple(cells))
    logger.debug(
        "primitives.computed",
        n=n,
        i=i,
        nonzero=[t for t, r in results.items() if r.certified and r.dim],
    )
    return results
