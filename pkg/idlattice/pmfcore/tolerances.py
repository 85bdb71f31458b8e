import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """
    Numerical thresholds shared by all operations.

    :param eps_neg: Negative values above -eps_neg are numerical dust and clamped to 0, values below are errors
    :param eps_mass: Allowed deviation of (sum of masses + tail bound) from 1
    :param negativity: Smallest magnitude of a negative jump mass l_m / lam, or of a negative mass of a candidate root,
        that counts as a witness
    :param support: A mass strictly above this value is an atom
    :param faint: Atoms with mass at or below this value are flagged as faint
    :param heavy_tail: Tail bounds above this value make the divisibility verdict inconclusive
    :param amplification_floor: An atom at 0 below this value amplifies recursion errors beyond repair
    :param error_safety: Safety factor of the log-series error estimate (recursion rounding and input sensitivity)
    :param visibility_safety: Certified mass bounds must exceed visibility_safety * support
    """
    eps_neg: float = 1e-12
    eps_mass: float = 1e-9
    negativity: float = 1e-9
    support: float = 1e-12
    faint: float = 1e-9
    heavy_tail: float = 1e-6
    amplification_floor: float = 1e-8
    error_safety: float = 16.0
    visibility_safety: float = 10.0

    def updated(self, **overrides: float) -> 'Tolerances':
        names = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ValueError(f'Unknown tolerance name(s): {", ".join(sorted(unknown))}. Valid names are '
                             f'{", ".join(sorted(names))}')
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOLERANCES = Tolerances()
