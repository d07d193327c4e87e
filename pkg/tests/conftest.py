import pytest

from fillkern.graph import DynamicGraph


def cycle(n):
    return DynamicGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return DynamicGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return DynamicGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(k):
    return DynamicGraph(k + 1, [(0, i) for i in range(1, k + 1)])


@pytest.fixture
def c4():
    return cycle(4)
