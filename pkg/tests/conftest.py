import pytest

from abasolve import parse_framework

EX1_TEXT = """\
# three assumptions, preference of c over a
a a
a b
a c
c a a_c
c b x
c c y
r x a
r y a
p c a
"""

F2_TEXT = """\
a a
a b
c a x
c b y
r x b
r y a
r z a
r z b
"""

F0_TEXT = """\
a a
c a x
"""


@pytest.fixture
def ex1():
    """Two rules from one assumption, preference reverses one attack;
    admissible family {{}, {c}, {b,c}}, sole complete set {b,c}."""
    return parse_framework(EX1_TEXT)


@pytest.fixture
def ex1_noprefs():
    return parse_framework(EX1_TEXT.replace("p c a\n", ""))


@pytest.fixture
def f2():
    """Mutual attack cycle between a and b, both deriving z."""
    return parse_framework(F2_TEXT)


@pytest.fixture
def f0():
    """Single unattacked assumption."""
    return parse_framework(F0_TEXT)


def names(fw, sets):
    """Readable form: frozensets of ids -> sorted name tuples."""
    if sets is None:
        return None
    if isinstance(sets, frozenset):
        return tuple(sorted(fw.name_of(s) for s in sets))
    return [tuple(sorted(fw.name_of(s) for s in one)) for one in sets]
