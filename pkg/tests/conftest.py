import pytest
from hypothesis import settings

from qshuffle.cartan import CartanDatum
from qshuffle.exact.field import CyclotomicField, GenericField

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F():
    return GenericField()


@pytest.fixture(scope="session")
def K3():
    return CyclotomicField(3)


@pytest.fixture(scope="session")
def K5():
    return CyclotomicField(5)


@pytest.fixture(params=["generic", 3, 5, 7], scope="session")
def any_field(request):
    return GenericField() if request.param == "generic" else CyclotomicField(request.param)


@pytest.fixture(scope="session")
def sl2():
    return CartanDatum.of_type("A", 1)


@pytest.fixture(scope="session")
def sl3():
    return CartanDatum.of_type("A", 2)


@pytest.fixture(scope="session")
def b2():
    return CartanDatum.of_type("B", 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if RESULTS[n] else 'FAIL'}")
