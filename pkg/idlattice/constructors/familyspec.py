from typing import Callable, Dict, List, Tuple

from idlattice.constructors import families
from idlattice.exceptions import DomainError, FamilySpecError
from idlattice.pmfcore.pmf import Pmf


def _int(value: float, what: str) -> int:
    if value != int(value):
        raise FamilySpecError(f'{what} must be an integer, got {value}')
    return int(value)


def _geometric(args: List[float], truncation: int) -> Pmf:
    start = _int(args[1], 'start') if len(args) > 1 else 0
    return families.geometric(args[0], start, truncation)


def _negbin(args: List[float], truncation: int) -> Pmf:
    return families.negbin_lattice(args[0], _int(args[1], 'k'), args[2], truncation)


def _ex1(args: List[float], truncation: int) -> Pmf:
    k = _int(args[1], 'k')
    if k < 2:
        raise FamilySpecError(f'ex1 needs a lattice step k > 1, got {k}')
    return families.negbin_lattice(args[0], k, args[2], truncation)


# name -> (allowed argument counts, constructor)
_FAMILIES: Dict[str, Tuple[Tuple[int, ...], Callable[[List[float], int], Pmf]]] = {
    'poisson': ((1,), lambda a, n: families.poisson(a[0], n)),
    'geometric': ((1, 2), _geometric),
    'binomial': ((2,), lambda a, n: families.binomial(_int(a[0], 'n'), a[1])),
    'negbin': ((3,), _negbin),
    'ex1': ((3,), _ex1),
    'ex2': ((3,), lambda a, n: families.shifted_negbin_lattice(a[0], _int(a[1], 'k'), a[2], n)),
    'logarithmic': ((1,), lambda a, n: families.logarithmic(a[0], n)),
    'delta': ((1,), lambda a, n: families.degenerate(_int(a[0], 'a'), n)),
}


def family_names() -> List[str]:
    return sorted(_FAMILIES)


def parse_family(spec: str, truncation: int) -> Pmf:
    """
    Builds a pmf from a family specification `name:arg1,arg2,...`:

    - poisson:lam
    - geometric:p[,start]
    - binomial:n,p (stored up to n, whatever the truncation)
    - negbin:p,k,t and its alias ex1:p,k,t with k > 1, generating function (p / (1 - q s^k))^t
    - ex2:p,k,t, generating function s (p / (1 - q s^k))^t
    - logarithmic:p
    - delta:a

    :raises FamilySpecError: on unknown names, wrong argument counts or invalid parameters
    """
    name, _, arg_text = spec.strip().partition(':')
    name = name.strip().lower()
    if name not in _FAMILIES:
        raise FamilySpecError(f'Unknown family "{name}". Known families: {", ".join(family_names())}')
    counts, constructor = _FAMILIES[name]
    try:
        args = [float(a) for a in arg_text.split(',')] if arg_text.strip() else []
    except ValueError as e:
        raise FamilySpecError(f'Could not parse the arguments of "{spec}": {e}') from e
    if len(args) not in counts:
        raise FamilySpecError(f'Family "{name}" takes {" or ".join(str(c) for c in counts)} argument(s), '
                              f'got {len(args)}')
    try:
        return constructor(args, truncation)
    except DomainError as e:
        raise FamilySpecError(f'Invalid parameters for "{spec}": {e}') from e
