from fractions import Fraction
from typing import Iterable, Sequence, Set

from .error_utils import QuiverError, StabilityError

BAR_SUFFIX: str = "_bar"
OMEGA_PREFIX: str = "omega_"
FRAME_PREFIX: str = "frame_"
FRAMING_VERTEX: str = "inf"
TYPE_A_EDGE_PREFIX: str = "a_"
ASSUMPTION_A_WEIGHT: int = 2


def bar_id(edge_id: str) -> str:
    return f"{edge_id}{BAR_SUFFIX}"


def omega_id(vertex: str) -> str:
    return f"{OMEGA_PREFIX}{vertex}"


def frame_id(vertex: str, k: int) -> str:
    return f"{FRAME_PREFIX}{vertex}_{k}"


def require_unique(ids: Iterable[str], what: str) -> Set[str]:
    seen: Set[str] = set()
    for ident in ids:
        if not isinstance(ident, str) or not ident:
            raise QuiverError(f"{what} ids must be nonempty strings, got {ident!r}")
        if ident in seen:
            raise QuiverError(f"duplicate {what} id {ident!r}")
        seen.add(ident)
    return seen


def require_dimension_entries(entries: Sequence[int]) -> None:
    for value in entries:
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise QuiverError(f"dimension vector entries must be nonnegative integers, got {value!r}")


def require_positive_epsilon(eps: Fraction) -> None:
    if eps <= 0:
        raise StabilityError(f"epsilon must be positive, got {eps}")


def is_strictly_increasing(values: Sequence[Fraction]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def is_strictly_decreasing(values: Sequence[Fraction]) -> bool:
    return all(a > b for a, b in zip(values, values[1:]))
