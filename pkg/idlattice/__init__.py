import os
from idlattice.idanalysis.idanalysis import test_id, factorize, compose, convolution_root, detect_shift
from idlattice.pmfcore.pmf import Pmf, pmf_from_weights, convolve, convolve_power, pgf_eval
from idlattice.supportanalysis.supportanalysis import support_report, check_gap_theorem, semigroup_closure


__version__ = open(os.path.join(os.path.dirname(__file__), 'VERSION.txt')).read().strip()
__all__ = [
    'Pmf', 'pmf_from_weights', 'convolve', 'convolve_power', 'pgf_eval', 'test_id', 'factorize', 'compose',
    'convolution_root', 'detect_shift', 'support_report', 'check_gap_theorem', 'semigroup_closure', '__version__',
]
