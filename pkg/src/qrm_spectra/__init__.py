"""Quantum Rabi model spectra: exact diagonalization, adiabatic-type approximations
and Juddian (exact level-crossing) points."""

from .approx import (
    PairSpectrum,
    aa_pair,
    aa_tunneling,
    approx_levels,
    gaa_pair,
    gaa_tunneling,
    grwa_spectrum,
    pair_spectrum,
)
from .crossings import JuddianPoint, crossing_count_certificate, find_crossings, zero_coupling_degeneracies
from .exact import ExactSpectrum, Parity, TridiagonalBlock, build_parity_block, exact_spectrum
from .oscillator import coherent_overlap, displaced_energy
from .params import Method, ModelParams
from .polynomials import (
    PolyEvalSettings,
    constraint_at_zero_coupling,
    constraint_poly,
    corrected_displacement_sq,
    laguerre,
    normalized_constraint,
)
from .scan import ScanRequest, SpectrumScan, emit_figure_data, report_crossings, run_scan

__version__ = "0.1.0"
