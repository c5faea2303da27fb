"""
tower command: Margolis homology along the truncation towers of TP(y(n)) and TC⁻(y(n)).
"""
from typing import Dict, Optional, Tuple

from tateforge.exceptions import InvalidRunConfig
from tateforge.logging_config import get_logger
from tateforge.reports import Report
from tateforge.series import compare_dicts
from tateforge.sseq import (
    TowerVerdict,
    hfp_torsion_closed,
    k_input_pattern,
    tcminus_limit_margolis,
    tower_margolis_verdict,
)
from tateforge.validators import RunConfig

logger = get_logger(__name__)


def expected_tp_verdict(n: int, m: int) -> Optional[str]:
    """ZERO for 1 <= m <= n, NONZERO for the m = 0 control, None otherwise."""
    if 1 <= m <= n:
        return "ZERO"
    if m == 0:
        return "NONZERO"
    return None


def _tower_args(config: RunConfig) -> Tuple[int, int, Tuple[int, int]]:
    if config.n is None or config.n_inf:
        raise InvalidRunConfig("tower needs a finite --n")
    if config.m is None:
        raise InvalidRunConfig("tower needs --q")
    if config.n < 1:
        raise InvalidRunConfig("tower needs n >= 1", {"n": config.n})
    return config.n, config.m, config.i_range or (0, 5)


def _tp_tower(config: RunConfig, report: Report):
    n, m, (lo, hi) = _tower_args(config)
    expected = expected_tp_verdict(n, m)
    rows = []
    for i in range(lo, hi + 1):
        verdict = tower_margolis_verdict(n, m, i, config.max_degree, config.window, side="tp")
        rows.append(verdict.to_dict())
        if expected is None:
            report.add_verdict(f"tp[{i}]->tp[{i - 1}]", True, certified=False, detail=verdict.verdict)
        else:
            report.add_verdict(
                f"tp[{i}]->tp[{i - 1}]",
                verdict.verdict == expected,
                detail=f"expected {expected}, got {verdict.verdict}",
            )
    report.add_table("tower", rows)
    report.provenance["tower"] = "rank of the induced map on H(-;Q_m) per shared column; bottom window column skipped"


def _identity_checks(report: Report, verdict: TowerVerdict, stable: Dict[int, Dict[int, int]]):
    """Columns below i-1 are E³ on both sides, so the tower map is the identity there."""
    for k, degrees in sorted(verdict.certified_degrees.items()):
        if k >= verdict.i - 1:
            continue
        dims = stable.get(k, {})
        want = sum(dims.get(d, 0) for d in degrees)
        got = verdict.column_ranks.get(k, 0)
        report.add_verdict(
            f"tc-[{verdict.i}] col{k} identity",
            got == want,
            detail=f"rank {got}, Margolis dim {want}",
        )


def _tcminus_tower(config: RunConfig, report: Report):
    n, m, (lo, hi) = _tower_args(config)
    N = config.max_degree
    limits, towers, patterns = [], [], []
    previous: Optional[Dict[int, int]] = None
    for i in range(max(lo, 0), hi + 1):
        table = tcminus_limit_margolis(n, m, i, N)
        limits.append(table.to_dict())
        if table.reports:
            report.add_verdict(f"lim H(TC-[{i}];Q{m})", table.equal, detail=f"{len(table.reports)} columns")
        if i >= 1:
            verdict = tower_margolis_verdict(n, m, i, N, side="tcminus")
            towers.append(verdict.to_dict())
            _identity_checks(report, verdict, table.machine)
        if m == n and i >= 1:
            stable, edge = k_input_pattern(n, i, N)
            expected = hfp_torsion_closed(n).expand(0, N)
            pattern = compare_dicts(stable, expected, sorted(stable), f"K({n}) input TC-[{i}]")
            report.add_dim_report(pattern, f"k_input[{i}]")
            patterns.append({
                "i": i,
                "stable": {str(d): v for d, v in sorted(stable.items()) if v},
                "edge_transient": {str(d): v for d, v in sorted(edge.items()) if v},
            })
            if previous is not None:
                shared = sorted(set(previous) & set(stable))
                constant = all(previous[d] == stable[d] for d in shared)
                report.add_verdict(f"k_input constant {i - 1}->{i}", constant)
            previous = stable
    report.add_table("limits", limits)
    if towers:
        report.add_table("tower", towers)
    if patterns:
        report.add_table("k_input", patterns)
        report.provenance["k_input"] = "stable columns below the edge; the edge V(i) is listed separately"
    if m == n:
        report.provenance["open"] = f"K({n})_*(TC-(y({n}))) is left open; the nonzero E2 pattern is reported"


def cmd_tower(config: RunConfig) -> Report:
    report = Report(config.to_dict())
    report.certified_window = {
        "max_degree": config.max_degree,
        "rule": "cells certified on both pages, d + q_m <= N",
    }
    if config.side == "tp":
        _tp_tower(config, report)
    else:
        _tcminus_tower(config, report)
    return report
