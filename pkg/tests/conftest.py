import pytest

import ekrlab
from ekrlab import constructions


@pytest.fixture(scope='session')
def sz8_group(tmp_path_factory):
    # Exercises the group file round trip on the way
    degree, gens = ekrlab.sz_ovoid_generators(3)
    path = tmp_path_factory.mktemp('sz8') / 'sz8.grp'
    ekrlab.GroupFile(path).write(degree, gens, comments=['Sz(8) on the ovoid'])
    gfile = ekrlab.GroupFile(path)
    gfile.read()
    return ekrlab.close_group(gfile.degree, gfile.generators)


@pytest.fixture(scope='session')
def psl2_4():
    return constructions.build_psl2_even(2)


@pytest.fixture(scope='session')
def agl1_9():
    return constructions.build_agl1_sharply_transitive(9)


@pytest.fixture(scope='session')
def s4_natural():
    # S4 on 4 points, generated by a 4-cycle and a transposition
    group = ekrlab.close_group(4, [[1, 2, 3, 0], [1, 0, 2, 3]])
    return ekrlab.natural_action(group, 0)
