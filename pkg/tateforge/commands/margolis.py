"""
margolis / ext commands: Margolis homology of catalog comodules with closed-form verdicts
and Ext over E(Q_m).
"""
from typing import Optional

from tateforge.exceptions import InvalidRunConfig
from tateforge.logging_config import get_logger
from tateforge.margolis import ext_over_EQm, margolis_homology, margolis_report
from tateforge.oracles import qm_two_paths, resolution_ext
from tateforge.reports import Report
from tateforge.series import ClosedForm, P
from tateforge.sseq import thh_closed, z_closed, zmodvn_closed
from tateforge.steenrod import ComoduleSpec, SpaceId, SpaceKind, catalog, parse_space_id, q_degree
from tateforge.validators import RunConfig

logger = get_logger(__name__)

# the resolution oracle stays cheap up to this cap
RESOLUTION_MAX_DEGREE = 16


def expected_margolis(space: SpaceId, m: int) -> Optional[ClosedForm]:
    """Closed form for H(space; Q_m), or None where no closed form is known."""
    one = ClosedForm.product(label="1")
    zero = ClosedForm.zero()
    kind, n = space.kind, space.n
    if kind == SpaceKind.SPHERE:
        return one
    if kind in (SpaceKind.DUAL_STEENROD, SpaceKind.THH_HF2):
        return zero
    if kind == SpaceKind.HZ:
        return one if m == 0 else zero
    if kind == SpaceKind.Y:
        if m < n:
            return zero
        return ClosedForm.product(*P(*[2 ** k - 1 for k in range(1, n + 1)]), label=f"P(xi1..xi{n})")
    if kind == SpaceKind.Z:
        if m == 0:
            return ClosedForm.product(*P(2 * (2 ** n - 1)), label=f"P(xi{n}^2)")
        return zero if m < n else z_closed(n)
    if kind == SpaceKind.ZMODVN:
        if m == 0:
            return one
        return zero if m <= n else zmodvn_closed(n)
    if kind == SpaceKind.THH_Y and m >= n + 1:
        return thh_closed(n)
    return None


def space_from_config(config: RunConfig) -> SpaceId:
    if not config.space:
        raise InvalidRunConfig(f"{config.command} needs --space")
    return parse_space_id(config.space)


def _q_index(config: RunConfig) -> int:
    if config.m is None:
        raise InvalidRunConfig(f"{config.command} needs --q")
    return config.m


def cmd_margolis(config: RunConfig) -> Report:
    """H(M; Q_m) table with certification flags and a closed-form verdict."""
    space = space_from_config(config)
    m = _q_index(config)
    N = config.max_degree
    c = catalog(space, N)
    result = margolis_homology(c, m, N)

    report = Report(config.to_dict())
    lo, hi = result.certified_window
    report.certified_window = {"lo": lo, "hi": hi, "rule": "d + q_m <= N"}
    report.add_table("margolis", result.table())
    report.provenance["space"] = c.name
    report.provenance["q_degree"] = q_degree(m)

    expected = expected_margolis(space, m)
    if expected is None:
        report.add_verdict("closed_form", True, certified=False, detail="no closed form for this space and m")
    elif hi < lo:
        report.add_verdict("closed_form", True, certified=False, detail="certified window is empty")
    else:
        report.add_dim_report(margolis_report(result, expected), "closed_form")

    if isinstance(c, ComoduleSpec) and not c.has_exotic_rules:
        two = qm_two_paths(c, m, N)
        report.add_verdict(
            "qm_two_paths",
            two.equal,
            detail="" if two.equal else f"first mismatch at degree {two.first_mismatch_degree}",
        )
    return report


def cmd_ext(config: RunConfig) -> Report:
    """Ext over E(Q_m) from the Margolis shift, checked against a minimal resolution when small."""
    space = space_from_config(config)
    m = _q_index(config)
    N = config.max_degree
    c = catalog(space, N)
    page = ext_over_EQm(c, m, N, config.s_max)

    report = Report(config.to_dict())
    report.certified_window = {"rule": "t - s*q_m <= N - q_m", "q": q_degree(m), "N": N}
    report.add_table(
        "ext",
        [
            {"s": s, "t": t, "dim": v, "certified": page.certified[(s, t)]}
            for (s, t), v in sorted(page.dims.items())
        ],
    )
    report.provenance["ext"] = page.provenance
    report.provenance["v_bidegree"] = list(page.v_degree)
    report.add_verdict("periodicity", page.periodicity_holds())

    if N <= RESOLUTION_MAX_DEGREE and not space.is_page_model:
        oracle = resolution_ext(c, m, N, config.s_max)
        mismatches = [
            (s, t) for (s, t) in page.certified_cells()
            if oracle.certified.get((s, t)) and oracle.dim(s, t) != page.dim(s, t)
        ]
        detail = "" if not mismatches else f"first mismatch at (s,t)={mismatches[0]}"
        report.add_verdict("minimal_resolution", not mismatches, detail=detail)
        report.provenance["oracle"] = oracle.provenance
    else:
        logger.info("ext.resolution_skipped", max_degree=N, cap=RESOLUTION_MAX_DEGREE)
    return report

