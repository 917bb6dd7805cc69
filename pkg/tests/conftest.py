from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from numauto.epwords import NumSystem
from numauto.quadfield import QuadExt

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SYSTEMS = {
    "power:phi": "power:(1+sqrt5)/2",
    "power:1+sqrt2": "power:1+sqrt2",
    "power:3+2sqrt2": "power:3+2sqrt2",
    "ostrowski:phi": "ostrowski:(1+sqrt5)/2",
    "ostrowski:sqrt2": "ostrowski:sqrt2",
}


def system(name: str) -> NumSystem:
    return NumSystem.parse(SYSTEMS.get(name, name))


@pytest.fixture(params=sorted(SYSTEMS))
def any_system(request) -> NumSystem:
    return system(request.param)


def field_elements(d: int, max_int: int = 40, max_den: int = 12):
    """Nonnegative elements (a + b*sqrt(d)) / c of Q(sqrt d)."""

    @st.composite
    def build(draw):
        a = draw(st.integers(0, max_int))
        b = draw(st.integers(-max_int // 2, max_int // 2))
        c = draw(st.integers(1, max_den))
        x = (QuadExt(a) + QuadExt.sqrt(d) * b) / c
        return -x if x < 0 else x

    return build()


def rationals(limit: int = 50):
    return st.builds(Fraction, st.integers(-limit, limit), st.integers(1, limit))


def random_value(S: NumSystem, rng, max_int: int = 30, max_den: int = 8) -> QuadExt:
    """A nonnegative element of the field of S, seeded through ``rng``."""
    a = rng.randint(0, max_int)
    b = rng.randint(-max_int // 2, max_int // 2)
    x = (QuadExt(a) + QuadExt.sqrt(S.d) * b) / rng.randint(1, max_den)
    return -x if x < 0 else x


# closed sentences with their truth values over the nonnegative reals
SENTENCES = [
    ("A x. A y. (x+y=y+x)", True),
    ("E x. (x<x)", False),
    ("A x. E y. (x<y)", True),
    ("E x. (x+x=U0)", True),
    ("E x. (x+x=x & U0<x)", False),
    ("A x. A y. (x<y | x=y | y<x)", True),
    ("E x. E y. (x<y & y<x)", False),
    ("A x. E y. (y+y=x)", True),
    ("E x. (x+U0=x)", False),
    ("A x. A y. (x<y -> E z. (x+z=y))", True),
    ("E x. E y. (x+y=U0 & x=y)", True),
    ("A x. (U0<x | x<U0)", False),
]
