# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import heapq
from dataclasses import dataclass, field
from typing import Callable, Generic, TypeVar

T = TypeVar("T")


@dataclass(order=True)
class Event(Generic[T]):
    at: int
    seq: int
    item: T = field(compare=False)


class EventQueue(Generic[T]):
    """
    Min-heap of events ordered by (tick, insertion sequence). Two events at
    the same tick come out in the order they were pushed.
    """

    def __init__(self) -> None:
        self._heap: list[Event[T]] = []
        self._seq = 0

    def push(self, at: int, item: T) -> Event[T]:
        ev = Event(at, self._seq, item)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def pop(self) -> Event[T]:
        return heapq.heappop(self._heap)

    def peek(self) -> Event[T] | None:
        return self._heap[0] if self._heap else None

    def remove_if(self, pred: Callable[[T], bool]) -> list[T]:
        kept, removed = [], []
        for ev in self._heap:
            (removed if pred(ev.item) else kept).append(ev)
        if removed:
            heapq.heapify(kept)
            self._heap = kept
        return [ev.item for ev in sorted(removed)]

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
