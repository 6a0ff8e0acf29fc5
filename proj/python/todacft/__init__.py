"""sl3 Toda structure constants, conformal blocks and GMC estimators."""

import json

from ._core import (
    TodaError,
    block,
    dozz,
    fateev_litvinov,
    hyper_3f2,
    l_func,
    log_gamma,
    mc_liouville_dozz,
    mc_toda,
    suite_names,
    upsilon,
    upsilon_log,
)


def run_suite(name, all_checks=False):
    """Run a verification suite and return its report as a dict."""
    from ._core import run_suite_json

    return json.loads(run_suite_json(name, all_checks))


__all__ = [
    "TodaError",
    "block",
    "dozz",
    "fateev_litvinov",
    "hyper_3f2",
    "l_func",
    "log_gamma",
    "mc_liouville_dozz",
    "mc_toda",
    "run_suite",
    "suite_names",
    "upsilon",
    "upsilon_log",
]
