"""Binary min-heap whose entries can be removed through a handle."""

from __future__ import annotations


class Handle:
    __slots__ = ("key", "item", "pos")

    def __init__(self, key, item):
        self.key = key
        self.item = item
        self.pos = -1


class IndexedHeap:
    def __init__(self):
        self._a: list[Handle] = []

    def __len__(self):
        return len(self._a)

    def push(self, key, item) -> Handle:
        h = Handle(key, item)
        h.pos = len(self._a)
        self._a.append(h)
        self._up(h.pos)
        return h

    def peek(self) -> Handle:
        if not self._a:
            raise IndexError("peek at an empty heap")
        return self._a[0]

    def remove(self, h: Handle) -> None:
        i = h.pos
        if i < 0 or i >= len(self._a) or self._a[i] is not h:
            raise KeyError("handle not in heap")
        last = self._a.pop()
        h.pos = -1
        if i < len(self._a):
            self._a[i] = last
            last.pos = i
            self._up(i)
            self._down(last.pos)

    def pop(self) -> Handle:
        h = self.peek()
        self.remove(h)
        return h

    def _swap(self, i, j):
        a = self._a
        a[i], a[j] = a[j], a[i]
        a[i].pos = i
        a[j].pos = j

    def _up(self, i):
        a = self._a
        while i > 0:
            parent = (i - 1) >> 1
            if a[i].key < a[parent].key:
                self._swap(i, parent)
                i = parent
            else:
                break

    def _down(self, i):
        a = self._a
        n = len(a)
        while True:
            small = i
            for c in (2 * i + 1, 2 * i + 2):
                if c < n and a[c].key < a[small].key:
                    small = c
            if small == i:
                return
            self._swap(i, small)
            i = small
