"""
Margolis homology H(M; Q_m), Ext over E(Q_m) and the localized Adams E₂ page.

Everything here only needs a graded E(Q_m)-module: anything with graded dimensions
and Q_m matrices (catalog comodules and the page models built in sseq alike).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from tateforge.concurrency import parallel_map
from tateforge.exceptions import OutOfCap
from tateforge.f2linalg import SubspaceBasis, homology, kernel_basis
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event, log_performance
from tateforge.series import ClosedForm, DimReport, compare_dicts
from tateforge.steenrod import GradedQModule, q_degree

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MargolisResult:
    m: int
    space: str
    dims: Dict[int, int]
    representatives: Dict[int, SubspaceBasis]
    certified: Dict[int, bool]

    @property
    def certified_window(self) -> Tuple[int, int]:
        """Smallest and largest certified degree; (0, -1) when nothing is certified."""
        good = [d for d, ok in self.certified.items() if ok]
        return (min(good), max(good)) if good else (0, -1)

    def certified_dims(self) -> Dict[int, int]:
        return {d: v for d, v in self.dims.items() if self.certified[d]}

    def vanishes(self) -> bool:
        return not any(self.certified_dims().values())

    def table(self) -> List[Dict]:
        return [
            {"degree": d, "dim": self.dims[d], "certified": self.certified[d]}
            for d in sorted(self.dims)
        ]


def _degree_homology(c: GradedQModule, m: int, d: int):
    q = q_degree(m)
    d_in = c.q_matrix(m, d + q)
    d_out = c.q_matrix(m, d)
    return homology(d_in, d_out)


@log_performance("margolis.margolis_homology")
def margolis_homology(c: GradedQModule, m: int, N: Optional[int] = None) -> MargolisResult:
    """Degreewise ker Q_m / im Q_m, each degree flagged certified or not."""
    q = q_degree(m)
    degrees = [d for d in c.degrees() if N is None or d <= N]
    cap = getattr(c, "max_degree", None)
    if cap is not None and cap < 2 * q:
        logger.warning("margolis.window_empty", space=c.name, m=m, max_degree=cap, needed=2 * q)
    results = parallel_map(lambda d: _degree_homology(c, m, d), degrees)
    dims = {d: r.dim for d, r in zip(degrees, results)}
    reps = {d: r.representatives for d, r in zip(degrees, results)}
    certified = {d: c.certified(d, m) for d in degrees}
    result = MargolisResult(m, c.name, dims, reps, certified)
    log_computation_event(
        ComputationEvents.MARGOLIS_COMPUTED,
        space=c.name,
        m=m,
        window=list(result.certified_window),
        total=sum(result.certified_dims().values()),
    )
    return result


def margolis_report(result: MargolisResult, expected: ClosedForm, label: str = "") -> DimReport:
    """Compare certified Margolis dims with a closed-form series."""
    lo, hi = result.certified_window
    if hi < lo:
        raise OutOfCap(f"no certified degrees for {result.space} at m={result.m}")
    expanded = expected.expand(lo, hi)
    return compare_dicts(result.dims, expanded, range(lo, hi + 1), label or f"H({result.space};Q{result.m})")


# ---------------------------------------------------------------------------
# Ext over E(Q_m)

@dataclass(frozen=True)
class ExtPage:
    m: int
    space: str
    s_max: int
    max_t: int
    dims: Dict[Tuple[int, int], int]
    certified: Dict[Tuple[int, int], bool]
    provenance: str = "margolis_shift"

    @property
    def v_degree(self) -> Tuple[int, int]:
        return (1, q_degree(self.m))

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def row(self, s: int) -> Dict[int, int]:
        return {t: v for (ss, t), v in sorted(self.dims.items()) if ss == s}

    def certified_cells(self) -> List[Tuple[int, int]]:
        return sorted(k for k, ok in self.certified.items() if ok)

    def periodicity_holds(self) -> bool:
        """dim(s,t) = dim(s+1, t+q) for s >= 1 on certified cells."""
        q = q_degree(self.m)
        for (s, t) in self.certified_cells():
            if s < 1 or s + 1 > self.s_max:
                continue
            if self.certified.get((s + 1, t + q)) and self.dim(s, t) != self.dim(s + 1, t + q):
                return False
        return True


def ext_certified(s: int, t: int, m: int, N: int) -> bool:
    q = q_degree(m)
    return t - s * q <= N - q


@log_performance("margolis.ext_over_EQm")
def ext_over_EQm(c: GradedQModule, m: int, N: int, s_max: int) -> ExtPage:
    """Row 0 is ker Q_m; row s >= 1 is Margolis homology shifted by s·|v_m|."""
    q = q_degree(m)
    degrees = [d for d in c.degrees() if 0 <= d <= N]
    dims: Dict[Tuple[int, int], int] = {}
    certified: Dict[Tuple[int, int], bool] = {}
    for t in degrees:
        dims[(0, t)] = kernel_basis(c.q_matrix(m, t)).dim
        certified[(0, t)] = True
    margolis = margolis_homology(c, m, N)
    for s in range(1, s_max + 1):
        for d in degrees:
            t = d + s * q
            dims[(s, t)] = margolis.dims[d]
            certified[(s, t)] = margolis.certified[d] and ext_certified(s, t, m, N)
    log_computation_event(ComputationEvents.EXT_COMPUTED, space=c.name, m=m, s_max=s_max, max_degree=N)
    return ExtPage(m, c.name, s_max, N + s_max * q, dims, certified)


# ---------------------------------------------------------------------------
# Localized E₂

@log_performance("margolis.localized_e2")
def localized_e2(c: GradedQModule, m: int, N: int, expected: Optional[ClosedForm] = None) -> DimReport:
    """H(c;Q_m) ⊗ F_2[v_m^{±1}], presented by its Margolis dims and the stem period 2^(m+1)-2."""
    result = margolis_homology(c, m, N)
    machine = result.certified_dims()
    degrees = sorted(machine)
    if expected is not None:
        want = expected.expand(min(degrees), max(degrees)) if degrees else {}
        expected_label = expected.label or "closed_form"
    else:
        want = dict(machine)
        expected_label = "none"
    report = compare_dicts(machine, want, degrees, f"v{m}^-1 E2({c.name})")
    report.provenance.update(
        {
            "periodicity": str(q_degree(m) - 1),
            "v_bidegree": f"(1,{q_degree(m)})",
            "vanishes": str(not any(machine.values())).lower(),
            "expected": expected_label,
        }
    )
    log_computation_event(
        ComputationEvents.LOCALIZED_E2_COMPUTED, space=c.name, m=m, vanishes=not any(machine.values())
    )
    return report


# ---------------------------------------------------------------------------
# Künneth

def kunneth_dims(a: Dict[int, int], b: Dict[int, int], hi: int) -> Dict[int, int]:
    """Convolution of two graded dimension tables up to degree hi."""
    out = {d: 0 for d in range(hi + 1)}
    for i, x in a.items():
        if not x:
            continue
        for j, y in b.items():
            if y and 0 <= i + j <= hi:
                out[i + j] += x * y
    return out


def kunneth_check(product: MargolisResult, left: MargolisResult, right: MargolisResult) -> DimReport:
    """Margolis dims of a tensor product against the convolution of the factors."""
    lo, hi = product.certified_window
    hi = min(hi, left.certified_window[1], right.certified_window[1])
    conv = kunneth_dims(left.certified_dims(), right.certified_dims(), hi)
    return compare_dicts(product.dims, conv, range(lo, hi + 1), f"Künneth {product.space}")
