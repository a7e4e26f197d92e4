import math
from fractions import Fraction

import numpy as np
import pytest

from chaosdet.chaos import (
    ChaosExpansion,
    GaussianSample,
    eval_integral,
    eval_integral_many,
    expansion_from_dict,
    expansion_to_dict,
    expectation,
    hermite,
    load_expansion,
    moment_mc,
    product,
    sample,
    sample_chunks,
    save_expansion,
)
from chaosdet.tensors import SymTensor, inner, random_sym_tensor

from dense_reference import dense_eval, sym_to_dense


class TestHermite:
    def test_degree_zero(self):
        for x in (-3.0, 0.0, 2.5):
            assert hermite(0, x) == 1

    def test_low_degrees(self):
        x = 1.7
        assert hermite(2, x) == pytest.approx(x**2 - 1)
        assert hermite(3, x) == pytest.approx(x**3 - 3 * x)

    def test_degree_four_at_two(self):
        assert hermite(4, 2.0) == pytest.approx(2**4 - 6 * 2**2 + 3) == -5

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)

    def test_derivative_recurrence(self):
        # H_n'(x) = n H_{n-1}(x), by central finite differences
        h = 1e-6
        for n in range(1, 7):
            for x in np.linspace(-2, 2, 9):
                numeric = (hermite(n, x + h) - hermite(n, x - h)) / (2 * h)
                assert numeric == pytest.approx(n * hermite(n - 1, x), abs=1e-4)

    def test_exact_arguments(self):
        assert hermite(3, Fraction(1, 2)) == Fraction(1, 8) - Fraction(3, 2)


class TestEvalIntegral:
    def test_power_tensor_gives_hermite(self):
        for n in range(1, 5):
            f = SymTensor.basis_power(2, 0, n)
            x = 0.83
            s = GaussianSample((x, -1.2))
            assert eval_integral(f, s) == pytest.approx(hermite(n, x))

    def test_symmetrized_pair_gives_product(self):
        f = SymTensor(2, 2, {(1, 1): 0.5})
        s = GaussianSample((1.3, -0.7))
        assert eval_integral(f, s) == pytest.approx(1.3 * -0.7)

    def test_zero_tensor(self):
        z = SymTensor.zeros(3, 2)
        assert eval_integral(z, sample(0, 3)) == 0

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            eval_integral(SymTensor.zeros(3, 2), GaussianSample((0.0, 0.0)))

    def test_matches_dense_oracle(self):
        for seed in range(5):
            f = random_sym_tensor(seed, 2, 3)
            s = sample(seed, 2)
            dense = dense_eval(sym_to_dense(f), s.xi)
            assert eval_integral(f, s) == pytest.approx(dense, rel=1e-10)

    def test_batch_matches_scalar(self):
        f = random_sym_tensor(3, 3, 3)
        xs = np.asarray([sample(s, 3).xi for s in range(20)])
        batch = eval_integral_many(f, xs)
        for row, x in zip(batch, xs):
            assert row == pytest.approx(eval_integral(f, GaussianSample(tuple(x))))


class TestProduct:
    def test_first_order_square(self):
        x = ChaosExpansion.of(SymTensor.basis(2, 0))
        p = product(x, x)
        # H_1(x)^2 = H_2(x) + 1
        assert p.term(2).get((2, 0)) == 1
        assert p.term(0).get((0, 0)) == 1
        assert p.orders() == [0, 2]

    def test_constant_scales(self):
        y = ChaosExpansion.of(random_sym_tensor(1, 2, 2))
        c = ChaosExpansion.constant(2, 2.5)
        assert product(c, y) == y.scale(2.5)

    def test_pointwise_multiplicativity(self):
        for d, n, m in [(2, 2, 2), (3, 2, 3), (2, 1, 3), (3, 3, 3)]:
            x = ChaosExpansion.of(random_sym_tensor(d * 10 + n, d, n))
            y = ChaosExpansion.of(random_sym_tensor(d * 10 + m + 50, d, m))
            p = product(x, y)
            for j in range(100):
                s = sample(j, d)
                lhs = x.eval(s) * y.eval(s)
                assert p.eval(s) == pytest.approx(lhs, rel=1e-9, abs=1e-11)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            product(ChaosExpansion.constant(2, 1.0), ChaosExpansion.constant(3, 1.0))


class TestExpectation:
    def test_pure_integrals_are_centered(self):
        for n in range(1, 4):
            x = ChaosExpansion.of(random_sym_tensor(n, 2, n))
            assert expectation(x) == 0

    def test_isometry(self):
        for d in (2, 3, 4):
            for n in (1, 2, 3, 4):
                f = random_sym_tensor(d * 100 + n, d, n)
                g = random_sym_tensor(d * 100 + n + 7, d, n)
                p = product(ChaosExpansion.of(f), ChaosExpansion.of(g))
                assert expectation(p) == pytest.approx(
                    math.factorial(n) * inner(f, g), rel=1e-10
                )

    def test_cross_order_orthogonality_is_exact(self):
        # distinct orders cannot produce an order-0 term at all
        f = random_sym_tensor(0, 3, 2)
        g = random_sym_tensor(1, 3, 3)
        p = product(ChaosExpansion.of(f), ChaosExpansion.of(g))
        assert 0 not in p.orders()
        assert expectation(p) == 0


class TestSampling:
    def test_sample_determinism(self):
        assert sample(7, 3) == sample(7, 3)
        assert sample(7, 3) != sample(8, 3)

    def test_chunks_cover_and_repeat(self):
        blocks = list(sample_chunks(5, 10000, 2, chunk_size=4096))
        assert [len(b) for b in blocks] == [4096, 4096, 1808]
        again = list(sample_chunks(5, 10000, 2, chunk_size=4096))
        for a, b in zip(blocks, again):
            np.testing.assert_array_equal(a, b)

    def test_rejects_negative_seed(self):
        with pytest.raises(ValueError):
            sample(-1, 2)

    def test_moment_mc_constant(self):
        c = ChaosExpansion.constant(2, 5.0)
        assert moment_mc(c, 1000, seed=0) == pytest.approx(5.0)

    def test_moment_mc_centered(self):
        x = ChaosExpansion.of(SymTensor.basis_power(2, 0, 2))
        n = 100_000
        mean = moment_mc(x, n, seed=3)
        # var H_2 = 2, so stderr = sqrt(2/n)
        assert abs(mean) < 4 * math.sqrt(2 / n)

    def test_moment_mc_second_moment(self):
        # E H_2(xi)^2 = 2! = 2
        x = ChaosExpansion.of(SymTensor.basis_power(2, 0, 2))
        sq = product(x, x)
        n = 100_000
        mean = moment_mc(sq, n, seed=4)
        # var(H_2^2) = E H_2^4 - 4 = 60 - 4
        assert abs(mean - 2.0) < 4 * math.sqrt(56 / n)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        x = ChaosExpansion.of(random_sym_tensor(0, 2, 2)) + ChaosExpansion.constant(
            2, 1.5
        )
        path = tmp_path / "x.json"
        save_expansion(x, path)
        assert load_expansion(path) == x

    def test_blocks_carry_order_key(self):
        x = ChaosExpansion.of(random_sym_tensor(0, 2, 2))
        obj = expansion_to_dict(x)
        assert obj["terms"][0]["order"] == 2

    def test_duplicate_order_rejected(self):
        obj = {
            "dim": 2,
            "terms": [
                {"order": 1, "entries": [{"occupation": [1, 0], "coeff": 1.0}]},
                {"order": 1, "entries": [{"occupation": [0, 1], "coeff": 1.0}]},
            ],
        }
        with pytest.raises(ValueError, match="duplicate"):
            expansion_from_dict(obj)
