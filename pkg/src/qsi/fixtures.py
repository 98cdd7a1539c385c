"""The three small quivers used throughout the tests and demos."""

from .quiver import Arrow, Quiver


def kronecker() -> Quiver:
    """K2: vertices 1, 2 and two arrows a, b: 1 -> 2."""
    return Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "1", "2")))


def loop(n_loops: int = 1) -> Quiver:
    """L1: one vertex with loop l (extra loops are m, n, ...)."""
    names = ["l", "m", "n", "o", "p"][:n_loops]
    return Quiver(("1",), tuple(Arrow(x, "1", "1") for x in names))


def a3() -> Quiver:
    """A3: 1 -a-> 2 -b-> 3."""
    return Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3")))


K2 = kronecker()
L1 = loop()
A3 = a3()
