"""Exact q-series tools for k-colored generalized Frobenius partitions."""
from .builders import (CharacterSpec, EtaQuotientSpec, eisenstein, eta, eta_quotient, fgh_ell, gen_eta,
                       jacobi_f, nu, partition, partition_progression, pochhammer, theta,
                       twisted_eisenstein)
from .engine import (BivariateTable, binary_qf_theta, cphi, cphi_series, cphi_values, dual_theta,
                     frobenius_theta, refined_cphi_ct)
from .expr import evaluate, parse
from .frobenius import FrobeniusSymbol, enumerate_phi, enumerate_symbols, overline_via_mobius, refined_counts
from .harness import CheckResult, CheckSpec, load_registry, run_check, run_suite
from .series import InvalidInput, OutOfPrecision, PuiseuxSeries

__version__ = "0.1.0"
