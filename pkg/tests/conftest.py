import sys
import pathlib

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from cuspkit.presentations import structure_from_dict


F2_DOC = {"generators": ["a", "b"], "relators": [], "parabolics": [],
          "delta": 1}

Z2_DOC = {"generators": ["a", "b"], "relators": ["a b A B"],
          "oracle": {"kind": "abelian"}, "parabolics": [], "delta": 1}

Z2xZ2_DOC = {
    "generators": ["a", "b", "c", "d"],
    "relators": ["a b A B", "c d C D"],
    "oracle": {"kind": "free-product-of-abelians",
               "rules": [["a", "b"], ["c", "d"]]},
    "parabolics": [
        {"generators": ["a", "b"], "A1": ["a", "b"], "A2": []},
        {"generators": ["c", "d"], "A1": ["c", "d"], "A2": []},
    ],
    "delta": 1,
}

# Z/2 * Z, with the finite factor first
Z2FREE_DOC = {
    "generators": ["a", "b"],
    "relators": ["a a"],
    "oracle": {"kind": "free-product-of-abelians", "rules": [["a"], ["b"]]},
    "parabolics": [],
    "delta": 1,
}

# (Z x Z/4) * Z2: a parabolic with torsion
ZT_DOC = {
    "generators": ["s", "t", "c", "d"],
    "relators": ["s t S T", "t t t t", "c d C D"],
    "oracle": {"kind": "free-product-of-abelians",
               "rules": [["s", "t"], ["c", "d"]]},
    "parabolics": [
        {"generators": ["s", "t"], "A1": ["s"], "A2": ["t"]},
        {"generators": ["c", "d"], "A1": ["c", "d"], "A2": []},
    ],
    "delta": 1,
}


@pytest.fixture(scope="session")
def s_f2():
    return structure_from_dict(F2_DOC)


@pytest.fixture(scope="session")
def s_z2():
    return structure_from_dict(Z2_DOC)


@pytest.fixture(scope="session")
def s_z2xz2():
    return structure_from_dict(Z2xZ2_DOC)


@pytest.fixture(scope="session")
def s_z2free():
    return structure_from_dict(Z2FREE_DOC)


@pytest.fixture(scope="session")
def s_zt():
    return structure_from_dict(ZT_DOC)
