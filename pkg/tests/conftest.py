import random
from fractions import Fraction
from pathlib import Path

import pytest

from conevlp import formats
from conevlp.linalg import mat, rank, transpose, vec
from conevlp.projection import ConeHRep
from conevlp.vlp import (
    InfeasibleProblemError,
    VlpInstance,
    VlpValidationError,
    dual_is_feasible,
    make_instance,
)

INSTANCE_DIR = Path(__file__).resolve().parents[1] / "instances"


def load_vlp(name: str) -> VlpInstance:
    return formats.parse_vlp_file((INSTANCE_DIR / name).read_text())


def load_cone(name: str) -> ConeHRep:
    return formats.parse_cone_file((INSTANCE_DIR / name).read_text())


@pytest.fixture(scope="session")
def ex1():
    return load_vlp("ex1.vlp")


@pytest.fixture(scope="session")
def ex2_cone():
    return load_cone("ex2.cone")


@pytest.fixture(scope="session")
def ex3():
    return load_vlp("ex3.vlp")


@pytest.fixture(scope="session")
def ex4():
    return load_vlp("ex4.vlp")


@pytest.fixture(scope="session")
def ex5():
    return load_vlp("ex5.vlp")


@pytest.fixture(scope="session")
def ex6():
    return load_vlp("ex6.vlp")


def random_cone(rng: random.Random) -> ConeHRep:
    k = rng.randint(1, 8)
    n = rng.randint(0, 3)
    p = rng.randint(2, 4)
    g = mat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)])
    h = mat([[rng.randint(-3, 3) for _ in range(p)] for _ in range(k)])
    return ConeHRep(g, h)


def random_cones(count: int, seed: int = 20240) -> list[ConeHRep]:
    rng = random.Random(seed)
    return [random_cone(rng) for _ in range(count)]


def _random_pointed_z(rng: random.Random, q: int):
    """Z with {y : Z^T y >= 0} pointed; occasionally a flat (empty-interior) cone."""
    style = rng.random()
    if style < 0.4:
        return mat([[1 if i == j else 0 for j in range(q)] for i in range(q)])
    if style < 0.8:
        while True:
            z = mat([[rng.randint(-2, 2) for _ in range(q)] for _ in range(q)])
            if rank(z) == q:
                return z
    # flat cone: one coordinate pinned to zero
    rows = [[1 if i == j else 0 for j in range(q)] for i in range(q)]
    pin = rng.randrange(q)
    rows.append([-1 if j == pin else 0 for j in range(q)])
    return transpose(mat(rows))


def random_vlps(count: int, seed: int = 77, require_dual: bool = True) -> list[VlpInstance]:
    rng = random.Random(seed)
    out: list[VlpInstance] = []
    while len(out) < count:
        q = rng.choice([2, 2, 3])
        n = rng.randint(1, 3)
        m = rng.randint(1, 4)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        p = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(q)]
        z = _random_pointed_z(rng, q)
        x0 = [rng.randint(-2, 2) for _ in range(n)]
        b = [
            sum(a[i][j] * x0[j] for j in range(n)) - rng.randint(0, 2)
            for i in range(m)
        ]
        try:
            inst = make_instance(a, b, p, z)
        except (VlpValidationError, InfeasibleProblemError):
            continue
        if require_dual and not dual_is_feasible(inst):
            continue
        out.append(inst)
    return out


@pytest.fixture(scope="session")
def vlp_corpus(ex1, ex3, ex5, ex6):
    return [ex1, ex3, ex5, ex6] + random_vlps(16)


@pytest.fixture(scope="session")
def cone_corpus():
    return random_cones(50)
