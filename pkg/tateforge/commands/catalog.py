"""
catalog / hochschild commands: comodule audit dumps and the bar-complex oracle.
"""
from tateforge.commands.margolis import space_from_config
from tateforge.exceptions import InvalidRunConfig
from tateforge.logging_config import ComputationEvents, get_logger, log_computation_event
from tateforge.oracles import hochschild_bar, hochschild_closed, oracle_algebra
from tateforge.reports import Report
from tateforge.series import compare_dicts
from tateforge.steenrod import catalog
from tateforge.validators import RunConfig

logger = get_logger(__name__)


def cmd_catalog(config: RunConfig) -> Report:
    """Generators, degrees, coactions and exotic rules of a catalog comodule."""
    space = space_from_config(config)
    if space.is_page_model:
        raise InvalidRunConfig("catalog dumps algebraic comodules only", {"space": space.label})
    N = config.max_degree
    c = catalog(space, N)
    report = Report(config.to_dict())
    report.certified_window = {"lo": 0, "hi": N}
    report.add_table("comodule", c.to_dict())
    report.add_table("dims", [{"degree": d, "dim": c.dim(d)} for d in range(N + 1)])
    report.provenance["steenrod_generators"] = c.steenrod.rank
    log_computation_event(ComputationEvents.CATALOG_BUILT, space=space.label, dumped=True)
    return report


def cmd_hochschild(config: RunConfig) -> Report:
    """HH_* from the normalized bar complex against the tensor-with-exterior closed form."""
    if config.algebra is None:
        raise InvalidRunConfig("hochschild needs --algebra")
    a = oracle_algebra(config.algebra)
    dims = hochschild_bar(a, config.max_degree, config.s_max)
    report = Report(config.to_dict())
    report.certified_window = {"lo": 0, "hi": dims.certified_total, "rule": "total degree below the first missing bar length"}
    report.add_table("bigraded", dims.bigraded)
    expected = hochschild_closed(a).expand(0, dims.max_degree)
    machine = dict(enumerate(dims.total))
    report.add_dim_report(
        compare_dicts(machine, expected, range(0, dims.certified_total + 1), f"HH({a.name})"),
        "closed_form",
    )
    return report
