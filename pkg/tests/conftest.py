import pytest

from rsc.model import SimplicialComplex


@pytest.fixture
def triangle_boundary():
    return SimplicialComplex.from_faces(3, 2, [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def filled_triangle():
    return SimplicialComplex.from_faces(
        3, 2, [(1, 2, 3)], close=True
    )


@pytest.fixture
def k4():
    faces = [(v,) for v in range(1, 5)] + [
        (a, b) for a in range(1, 5) for b in range(a + 1, 5)
    ]
    return SimplicialComplex.from_faces(4, 1, faces)
