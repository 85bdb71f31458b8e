import json
import math
from typing import Any, Dict

from idlattice.exceptions import IdLatticeError, PmfFileError
from idlattice.pmfcore.pmf import Pmf, pmf_from_weights
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES


def pmf_to_dict(p: Pmf) -> Dict[str, Any]:
    # Python floats serialize with their round-trip repr, so loading gives back the same doubles
    return {
        'truncation': p.truncation,
        'probs': [float(v) for v in p.probs],
        'tail_bound': p.tail_bound,
    }


def pmf_from_dict(content: Dict[str, Any], tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    if not isinstance(content, dict) or 'probs' not in content or 'truncation' not in content:
        raise PmfFileError('A pmf file must be a JSON object with the fields "truncation" and "probs"')
    probs = content['probs']
    truncation = content['truncation']
    if not isinstance(probs, list) or not all(isinstance(v, (int, float)) for v in probs):
        raise PmfFileError('"probs" must be an array of numbers')
    if not isinstance(truncation, int) or truncation != len(probs) - 1:
        raise PmfFileError(f'"truncation" ({truncation}) must equal the number of probabilities minus one '
                           f'({len(probs) - 1})')
    tail_bound = content.get('tail_bound', None)
    if tail_bound is None:
        tail_bound = max(0.0, 1.0 - math.fsum(probs))
    try:
        p = pmf_from_weights(probs, tail_bound, tol)
    except IdLatticeError as e:
        raise PmfFileError(f'Invalid pmf: {e}') from e
    if not p.is_normalized(tol):
        raise PmfFileError(f'Masses and tail bound sum to {p.stored_mass() + p.tail_bound:.12g}, not 1')
    return p


def save_pmf(p: Pmf, file_name: str):
    with open(file_name, 'w') as fp:
        json.dump(pmf_to_dict(p), fp, indent=2)


def load_pmf(file_name: str, tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    try:
        with open(file_name) as fp:
            content = json.load(fp)
    except (OSError, json.JSONDecodeError) as e:
        raise PmfFileError(f'Could not read pmf file {file_name}: {e}') from e
    return pmf_from_dict(content, tol)
