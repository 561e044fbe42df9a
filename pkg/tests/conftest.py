"""Session-scoped pipeline fixtures shared across the test modules."""

import pytest

from smcert.localfield import find_valuation_pattern, splitting_field_generator
from smcert.numfield import label_conjugates, pair_orbit
from smcert.quadforms import hilbert_class_poly

PREC = 256

CASES = {
    23: (-92, -23),
    31: (-124, -31),
}


def _build_pairing(case_id):
    dx, dy = CASES[case_id]
    return pair_orbit(
        label_conjugates(hilbert_class_poly(dx, PREC), PREC),
        label_conjugates(hilbert_class_poly(dy, PREC), PREC),
    )


@pytest.fixture(scope="session")
def case1_pairing():
    return _build_pairing(23)


@pytest.fixture(scope="session")
def case2_pairing():
    return _build_pairing(31)


@pytest.fixture(scope="session")
def case1_sf(case1_pairing):
    return splitting_field_generator(case1_pairing)


@pytest.fixture(scope="session")
def case2_sf(case2_pairing):
    return splitting_field_generator(case2_pairing)


@pytest.fixture(scope="session")
def case1_pattern(case1_sf):
    return find_valuation_pattern(case1_sf)


@pytest.fixture(scope="session")
def case2_pattern(case2_sf):
    return find_valuation_pattern(case2_sf)


@pytest.fixture(scope="session")
def case1_run():
    from smcert.pipeline import RunConfig, run_case

    return run_case(23, RunConfig(case_selector="23"))


@pytest.fixture(scope="session")
def case2_run():
    from smcert.pipeline import RunConfig, run_case

    return run_case(31, RunConfig(case_selector="31"))
