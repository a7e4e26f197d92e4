import pytest

from chaosdet.malliavin import ChaosPair, covariance, edet_closed
from chaosdet.tensors import (
    SymTensor,
    contract,
    random_sym_tensor,
    random_unit_tensor,
    symmetrize,
)
from chaosdet.verify import (
    GuardExceeded,
    check_contraction_duality,
    check_contraction_inequality,
    check_density_dichotomy,
    check_det_sum_of_squares,
    check_edet_routes,
    check_last_term_closed_form,
    check_mixed_order_counterexample,
    check_order2_identity,
    check_same_order_decomposition,
    check_slice_contraction,
    check_sym_outer_inner,
    check_t0_contraction_form,
    oracle_edet,
    run_suite,
    suite_failed,
)


class TestOracle:
    def test_proportional_pair(self):
        f = random_unit_tensor(0, 2, 2)
        pair = ChaosPair(f, f.scale(2.0))
        assert oracle_edet(pair) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_elementary_pair(self):
        pair = ChaosPair(
            SymTensor.basis_power(2, 0, 2), SymTensor.basis_power(2, 1, 2)
        )
        assert oracle_edet(pair) == 16

    def test_order_two_identity(self):
        pair = ChaosPair(random_unit_tensor(1, 2, 2), random_unit_tensor(2, 2, 2))
        _, det_c = covariance(pair)
        c1 = contract(pair.f, pair.g, 1)
        r2 = 32 * (c1.norm_sq() - symmetrize(c1).norm_sq())
        assert oracle_edet(pair) == pytest.approx(4 * det_c + r2, rel=1e-9)

    def test_guard(self):
        pair = ChaosPair(random_unit_tensor(0, 6, 2), random_unit_tensor(1, 6, 2))
        with pytest.raises(GuardExceeded, match="Monte Carlo"):
            oracle_edet(pair)
        # unsafe lifts the guard
        value = oracle_edet(pair, unsafe=True)
        assert value == pytest.approx(float(edet_closed(pair)), rel=1e-8)

    def test_exact_mode(self):
        pair = ChaosPair(
            random_sym_tensor(0, 2, 2, dist="int"),
            random_sym_tensor(1, 2, 2, dist="int"),
        )
        assert oracle_edet(pair) == edet_closed(pair)


class TestCheckers:
    CHECKERS = [
        check_contraction_duality,
        check_sym_outer_inner,
        check_slice_contraction,
        check_det_sum_of_squares,
        check_t0_contraction_form,
        check_edet_routes,
        check_contraction_inequality,
    ]

    @pytest.mark.parametrize("checker", CHECKERS)
    def test_passes_and_is_deterministic(self, checker):
        first = checker(42)
        second = checker(42)
        assert first.passed, first.line()
        assert first == second

    def test_equal_order_checkers(self):
        for m in (2, 3, 4):
            assert check_same_order_decomposition(7, 2, m).passed
            assert check_last_term_closed_form(7, 3, m).passed

    def test_fixed_checkers(self):
        assert check_order2_identity(3).passed
        assert check_mixed_order_counterexample().passed
        assert check_density_dichotomy(5).passed

    def test_result_semantics(self):
        res = check_t0_contraction_form(1)
        assert res.abs_err == pytest.approx(abs(res.lhs - res.rhs))
        assert res.passed == (res.rel_err <= res.tol)
        assert res.inputs_seed == 1

    def test_line_format(self):
        line = check_order2_identity(0).line()
        assert line.startswith("PASS") or line.startswith("FAIL")


class TestSuite:
    def test_small_suite_green(self):
        results = run_suite(seeds=[0], grid=[(2, n, m) for n in (1, 2) for m in (1, 2)])
        assert results
        assert not suite_failed(results)
        for r in results:
            assert r.passed, r.line()

    def test_default_suite_green(self):
        # the full default configuration: grid d in {2,3}, orders 1..4, 10 seeds
        results = run_suite()
        assert len(results) > 2000
        failures = [r.line() for r in results if not r.passed]
        assert not failures, failures[:5]

    def test_failed_flag(self):
        results = run_suite(seeds=[0], grid=[(2, 1, 1)])
        results[0].passed = False
        assert suite_failed(results)
