import numpy as np
import pytest

from braces import trivial_brace
from braces.core import direct_product
from braces.families import (
    GeneralizedData,
    HYPERBOLIC,
    MatchedData,
    MatchedFactor,
    _block_diag,
    build_b3,
    build_concrete,
    build_generalized,
    build_H,
    build_H_prime_and_phi,
    build_matched_and_phi_prime,
    build_perfect_not_simple,
    build_wreath_simple,
    cyclotomic_matrices,
    trivial_t_instances,
    wreath_simple_parts,
)
from braces.modular import QuadraticFormSpec, identity

XY = QuadraticFormSpec(2, 1, 2, [[0, 1], [0, 0]])  # Q(x, y) = x y over F_2
ID2 = np.eye(2, dtype=int)


def block_data() -> GeneralizedData:
    """p = 2, l = (3), n_1 = 4: cyclotomic block plus an inert hyperbolic plane."""
    c, f, b = cyclotomic_matrices(2, 3, 2)
    return GeneralizedData(
        2,
        [3],
        [_block_diag([b, HYPERBOLIC])],
        [_block_diag([c, identity(2)])],
        [_block_diag([f, identity(2)])],
    )


def matched72_data() -> MatchedData:
    f1 = MatchedFactor(QuadraticFormSpec(3, 1, 1, [[1]]), [[1]], [[2]])
    f2 = MatchedFactor(XY, ID2, [[0, 1], [1, 1]])
    return MatchedData([f1, f2], [0, 1])


@pytest.fixture(scope="session")
def b3():
    return build_b3()


@pytest.fixture(scope="session")
def b24():
    return build_wreath_simple(3, 2)


@pytest.fixture(scope="session")
def b24_parts():
    return wreath_simple_parts(3, 2)


@pytest.fixture(scope="session")
def h8():
    return build_H(XY, ID2)


@pytest.fixture(scope="session")
def matched72():
    return build_matched_and_phi_prime(matched72_data())


@pytest.fixture(scope="session")
def b288():
    return build_concrete(2, [3, 3])


@pytest.fixture(scope="session")
def corpus(b3, b24, h8, matched72, b288):
    """Named braces of orders 2 to 288 used by the property sweeps."""
    perfect = build_perfect_not_simple(b24)
    hp, _ = build_H_prime_and_phi(XY, ID2)
    items = {
        "trivial_2": trivial_brace([2]),
        "trivial_3": trivial_brace([3]),
        "trivial_2x2": trivial_brace([2, 2]),
        "trivial_4": trivial_brace([4]),
        "b3": b3,
        "h8": h8,
        "h8_prime": hp,
        "b24": b24,
        "b3_x_z2": direct_product(b3, trivial_brace([2])),
        "matched72": matched72.matched,
        "matched72_product": matched72.product,
        "perfect72": perfect,
        "block96": build_generalized(block_data()).brace,
        "trivial_t96": trivial_t_instances(b24)[0].product(),
        "b144": direct_product(b3, b3),
        "b160": build_wreath_simple(5, 2),
        "b288": b288,
    }
    return items


# --------------------------------------------------------------------------
# one summary line per acceptance criterion

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when != "call" and not report.failed:
        return
    name = report.nodeid.split("::test_criterion_")[1]
    number, _, slug = name.partition("_")
    verdict = "PASS" if report.passed else "FAIL"
    _CRITERIA[int(number)] = (slug.replace("_", " "), verdict)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        slug, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {slug}")
