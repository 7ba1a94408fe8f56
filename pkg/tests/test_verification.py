import pytest

from modules.errors import InterpolationError
from modules.hall_algebra import HallAlgebra
from modules.hall_numbers import HallCounter
from modules.orbits import OrbitCatalog
from modules.quiver import parse_quiver
from modules.verification import SUITES, Verifier, dims_up_to


@pytest.fixture(scope="module")
def a2_verifier(a2_algebra):
    return Verifier(a2_algebra, max_total_dim=3)


def test_dims_up_to():
    assert dims_up_to(2, 1) == [(0, 1), (1, 0)]
    assert len(dims_up_to(3, 2)) == 9
    assert (0, 0, 0) not in dims_up_to(3, 2)


@pytest.mark.parametrize("suite", [s for s in SUITES if s not in ("riedtmann", "hall-assoc")])
def test_suites_pass_on_a2(a2_verifier, suite):
    report = a2_verifier.run(suite)
    assert report.cases
    assert report.ok, [(c.case, c.detail) for c in report.failures]


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["riedtmann", "hall-assoc"])
def test_expensive_suites_pass_on_a2(a2_verifier, suite):
    assert a2_verifier.run(suite).ok


def test_three_routes_agree_on_a3(a3_algebra):
    verifier = Verifier(a3_algebra, dims=[(1, 1, 1), (0, 2, 1)], census_primes=(2, 3))
    report = verifier.run("three-route")
    assert report.ok, [(c.case, c.detail) for c in report.failures]
    assert len(report.cases) == 2 * (4 + 2)


def test_summary(a2_verifier):
    report = a2_verifier.run("row-sum")
    assert report.summary() == f"row-sum: {len(report.cases)}/{len(report.cases)} passed"


def test_unknown_suite(a2_verifier):
    with pytest.raises(ValueError):
        a2_verifier.run("everything")


def test_library_errors_become_failed_cases(a2_verifier):
    def broken():
        raise InterpolationError("holdout mismatch")

    result = a2_verifier._guard("d=(1,1)", broken)
    assert not result.passed
    assert "holdout mismatch" in result.detail


def test_three_route_reports_non_transversal_fiber_over_f2(a3_algebra):
    report = Verifier(a3_algebra, dims=[(1, 2, 1)], census_primes=(2, 3)).run("three-route")
    assert report.ok, [(c.case, c.detail) for c in report.failures]
    noted = {c.case: c.detail for c in report.cases if c.detail}
    assert "P12+P23 p=2" in noted
    assert all(case.endswith("p=2") and "characteristic 2" in detail for case, detail in noted.items())


def test_orthogonality_suite_allows_overlap_only_over_f2(a3_algebra):
    report = Verifier(a3_algebra, dims=[(1, 2, 1)], census_primes=(2, 3, 5)).run("orthogonality")
    assert report.ok, [(c.case, c.detail) for c in report.failures]
    assert any(c.case == "P12+P23 p=2" and c.detail for c in report.cases)


def test_riedtmann_two_layer_cases_use_direct_chains(a2_algebra, monkeypatch):
    calls = []
    counter = a2_algebra.counter
    original = counter.count_filtrations_directly

    def spy(M, chain, p):
        calls.append((M, tuple(chain), p))
        return original(M, chain, p)

    monkeypatch.setattr(counter, "count_filtrations_directly", spy)
    report = Verifier(a2_algebra, dims=[(1, 1)], census_primes=(2, 3)).run("riedtmann")
    assert report.ok
    # two labels, two splittings of (1,1), two primes
    assert len(calls) == 8


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["row-sum", "three-route"])
def test_a3_at_total_dimension_four(a3_algebra, suite):
    dims = [d for d in dims_up_to(3, 4) if sum(d) == 4]
    report = Verifier(a3_algebra, dims=dims, census_primes=(2, 3)).run(suite)
    assert report.ok, [(c.case, c.detail) for c in report.failures]


@pytest.mark.slow
def test_three_route_on_d4(d4_algebra):
    dims = [(1, 1, 1, 1), (1, 1, 0, 2), (1, 0, 1, 2), (0, 1, 1, 2)]
    report = Verifier(d4_algebra, dims=dims, census_primes=(2, 3)).run("three-route")
    assert report.ok, [(c.case, c.detail) for c in report.failures]
    assert any(c.case == "P124+S4 p=2" and c.detail for c in report.cases)


@pytest.mark.slow
def test_three_route_on_a3_with_middle_sink():
    catalog = OrbitCatalog(parse_quiver("vertices: 1 2 3\narrows: 1->2 3->2\n"))
    algebra = HallAlgebra(HallCounter(catalog))
    report = Verifier(algebra, dims=[(1, 2, 1)], census_primes=(2, 3)).run("three-route")
    assert report.ok, [(c.case, c.detail) for c in report.failures]
