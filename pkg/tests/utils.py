import json
import pathlib
import random
import typing
from fractions import Fraction

from classical_drg.exceptions import InfeasibleParameters
from classical_drg.params import ClassicalParams, IntersectionArray, SpectralTable, intersection_array, spectral_table


def get_fixtures_data():
    file = pathlib.Path(__file__).parent / "fixtures.json"
    with open(file) as f:
        return json.loads(f.read())


def fractions(values: typing.Iterable) -> typing.Tuple[Fraction, ...]:
    return tuple(Fraction(value) for value in values)


def build_cp(data: dict) -> ClassicalParams:
    d, b, alpha, beta = data["cp"]
    return ClassicalParams.build(d, b, alpha, beta)


def random_tables(
    count: int,
    seed: int = 0,
) -> typing.List[typing.Tuple[ClassicalParams, IntersectionArray, SpectralTable]]:
    """
    `count` parameter sets with b in {-3, -2, 2, 3} and d <= 8 whose tables exist
    and whose eigenvalues are distinct
    """
    rng = random.Random(seed)
    tables = []
    while len(tables) < count:
        d = rng.randint(1, 8)
        b = rng.choice((-3, -2, 2, 3))
        alpha = Fraction(rng.randint(-4, 6), rng.choice((1, 1, 2, 3)))
        beta = Fraction(rng.randint(1, 40), rng.choice((1, 1, 2)))
        try:
            cp = ClassicalParams.build(d, b, alpha, beta)
            ia = intersection_array(cp)
            st = spectral_table(cp, ia)
        except InfeasibleParameters:
            continue
        if len(set(st.theta)) != len(st.theta) or ia.vertex_count == 0:
            continue
        tables.append((cp, ia, st))
    return tables
