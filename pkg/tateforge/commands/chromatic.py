"""
chromatic command: for one height n, the m ↦ vanishing table for y(n), TP(y(n)) and TC⁻(y(n)).
"""
from typing import Dict, List

from tateforge.commands.tower import expected_tp_verdict
from tateforge.exceptions import InvalidRunConfig
from tateforge.logging_config import get_logger
from tateforge.margolis import localized_e2
from tateforge.reports import Report
from tateforge.sseq import tcminus_limit_margolis, tower_margolis_verdict
from tateforge.steenrod import SpaceId, SpaceKind, catalog
from tateforge.validators import RunConfig

logger = get_logger(__name__)


def _tp_row(n: int, m: int, i_range, config: RunConfig) -> Dict:
    lo, hi = i_range
    verdicts = [
        tower_margolis_verdict(n, m, i, config.max_degree, config.window, side="tp").verdict
        for i in range(lo, hi + 1)
    ]
    return {"verdicts": verdicts, "pro_trivial": all(v == "ZERO" for v in verdicts)}


def cmd_chromatic(config: RunConfig) -> Report:
    if config.n is None or config.n_inf or config.n < 1:
        raise InvalidRunConfig("chromatic needs a finite --n >= 1")
    n, N = config.n, config.max_degree
    i_range = config.i_range or (0, 3)
    i_limit = max(i_range[1], 1)
    y = catalog(SpaceId(SpaceKind.Y, n), N)

    report = Report(config.to_dict())
    report.certified_window = {"max_degree": N, "tower_i": list(i_range), "limit_i": i_limit}
    rows: List[Dict] = []
    for m in range(config.m_max + 1):
        e2 = localized_e2(y, m, N)
        y_vanishes = e2.provenance["vanishes"] == "true"
        report.add_verdict(f"y({n}) m={m}", y_vanishes == (m < n), detail=f"vanishes={y_vanishes}")

        tp = _tp_row(n, m, i_range, config)
        expected = expected_tp_verdict(n, m)
        if expected == "ZERO":
            report.add_verdict(f"TP(y({n})) m={m}", tp["pro_trivial"])
        elif expected == "NONZERO":
            report.add_verdict(f"TP(y({n})) m={m}", not tp["pro_trivial"], detail="control")
        else:
            report.add_verdict(f"TP(y({n})) m={m}", True, certified=False, detail=",".join(tp["verdicts"]))

        limit = tcminus_limit_margolis(n, m, i_limit, N)
        limit_zero = not any(v for dims in limit.machine.values() for v in dims.values())
        if 1 <= m <= n - 1:
            report.add_verdict(f"TC-(y({n})) m={m}", limit_zero and limit.equal)
        else:
            report.add_verdict(f"TC-(y({n})) m={m}", limit.equal, detail="open" if m == n else "")

        rows.append({
            "m": m,
            "y_localized_e2_vanishes": y_vanishes,
            "tp_verdicts": tp["verdicts"],
            "tp_pro_trivial": tp["pro_trivial"],
            "tcminus_limit_zero": limit_zero,
            "tcminus_matches_closed_form": limit.equal,
        })
    report.add_table("chromatic", rows)
    report.provenance["tcminus"] = f"limit read off TC-[{i_limit}] columns below the edge"
    return report
