"""Bounded worker pool; results always come back in input order."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV = "ANDREADAKIS_WORKERS"


def workers() -> int:
    try:
        return max(1, int(os.environ.get(ENV, "1")))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    w = min(workers(), len(items))
    if w <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))
