"""Resource caps for dense enumeration.

The cap bounds the vertex count ``n`` for anything that materialises all
(n-1)!/2 Hamiltonian cycles.  It defaults to 10, can be overridden with the
``TSPLIFT_DENSE_CAP`` environment variable, and can be set programmatically
with :func:`set_dense_cap` (the CLI does this for ``--dense-cap``).
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

from .errors import PreconditionError, ResourceCapError

DEFAULT_DENSE_CAP = 10
MAX_DENSE_CAP = 12
ENV_VAR = "TSPLIFT_DENSE_CAP"

# largest n for the exact Q_k program: k = 1, then every k >= 2
QK_DEFAULT_CAPS = (8, 7)

_override: int | None = None
_qk_override: int | None = None


def _validate(cap: int) -> int:
    if not 3 <= cap <= MAX_DENSE_CAP:
        raise PreconditionError(f"dense cap must lie in [3, {MAX_DENSE_CAP}], got {cap}")
    return cap


def get_dense_cap() -> int:
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_DENSE_CAP
    try:
        return _validate(int(raw))
    except ValueError as exc:
        raise PreconditionError(f"{ENV_VAR}={raw!r} is not a valid cap") from exc


def set_dense_cap(cap: int | None) -> None:
    """Set (or with ``None`` clear) the process-wide cap override."""
    global _override
    _override = None if cap is None else _validate(int(cap))


@contextmanager
def dense_cap(cap: int) -> Iterator[None]:
    global _override
    previous = _override
    set_dense_cap(cap)
    try:
        yield
    finally:
        _override = previous


def require_dense(n: int, what: str = "dense enumeration") -> None:
    cap = get_dense_cap()
    if n > cap:
        raise ResourceCapError(f"{what} at n={n} exceeds the dense cap {cap}")


def get_qk_cap(k: int) -> int:
    if _qk_override is not None:
        return _qk_override
    return min(get_dense_cap(), QK_DEFAULT_CAPS[0] if k == 1 else QK_DEFAULT_CAPS[1])


def set_qk_cap(cap: int | None) -> None:
    """Override (or with ``None`` restore) the Q_k instance cap; the dense cap still applies."""
    global _qk_override
    _qk_override = None if cap is None else _validate(int(cap))


def require_qk(n: int, k: int) -> None:
    require_dense(n, "Q_k membership")
    cap = get_qk_cap(k)
    if n > cap:
        raise ResourceCapError(f"Q_k membership at n={n}, k={k} exceeds the instance cap {cap}")
