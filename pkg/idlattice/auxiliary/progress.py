from typing import Iterable, TypeVar

T = TypeVar('T')


def progress(itr: Iterable[T], enabled: bool = True, **kwargs) -> Iterable[T]:
    # Progress bar on standard error when tqdm is installed, the plain iterable otherwise
    if not enabled:
        return itr
    try:
        import tqdm
        return tqdm.tqdm(itr, leave=False, **kwargs)
    except ImportError:
        return itr
