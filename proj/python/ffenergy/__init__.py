"""Exact additive energies, bilinear character sums and residue-class counts
over F_q[X]/F(X)."""

import json

from ._core import (
    CSV_HEADER,
    Field,
    __version__,
    b_exponent,
    bilinear_inv,
    bilinear_sqrt,
    charsum,
    count_irreducibles,
    count_N,
    count_N_squarefree,
    count_Q,
    count_suv,
    energy_inv,
    energy_inv_main_term,
    energy_sqrt,
    energy_sqrt_bruteforce,
    energy_sqrt_main_term,
    energy_sqrt_weighted,
    enumerate_irreducibles,
    find_M_alpha,
    fourth_moment_check,
    psi_smooth,
    random_weight,
    selftest,
    vinogradov_sum,
)
from ._core import run_sweep as _run_sweep


def run_sweep(spec, workers=None):
    """Run a sweep given as a dict or JSON text. Returns (csv, report_dict, exit_code)."""
    text = spec if isinstance(spec, str) else json.dumps(spec)
    csv, report, code = _run_sweep(text, workers)
    return csv, json.loads(report), code


__all__ = [name for name in dir() if not name.startswith("_")]
