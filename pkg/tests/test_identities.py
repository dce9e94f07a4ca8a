import math

import pytest

from thetahyp import (
    BaileyParams,
    FTParams,
    Multi1Params,
    Multi2Params,
    Nome,
    bailey_from_ft,
    bailey_map,
    general_multi_coefficient,
    ModularPair,
    sample_bailey,
    sample_ft,
    sample_multi1,
    sample_multi2,
    verify_bailey,
    verify_ft_sum,
    verify_multi1,
    verify_multi2,
)
from thetahyp.identities import _multi1_coefficient, _multi2_coefficient
from thetahyp.series import DEFAULT_POLICY

NOME = Nome(0.35 + 0.1j, 0.25 + 0.05j)


class TestFTSum:
    def test_random_draws(self):
        for i in range(15):
            params = sample_ft(seed=100 + i, N=1 + i % 4, nome=NOME)
            rep = verify_ft_sum(params, tol=1e-8)
            assert rep.passed, f"seed {100 + i}: rel={rep.rel_err}"

    def test_trivial_truncation(self):
        params = sample_ft(seed=7, N=0, nome=NOME)
        rep = verify_ft_sum(params, tol=1e-10)
        assert rep.passed
        assert abs(rep.lhs - 1.0) < 1e-12  # single unit term

    def test_json_round_trip(self):
        params = sample_ft(seed=3, N=2, nome=NOME)
        back = FTParams.from_json(params.to_json())
        assert back == params

    def test_constraint_violation(self):
        params = sample_ft(seed=3, N=2, nome=NOME)
        bad = list(params.t)
        bad[1] *= 1.05
        with pytest.raises(ValueError):
            FTParams(tuple(bad), NOME, 2)

    def test_sampler_determinism(self):
        a = sample_ft(seed=42, N=3, nome=NOME)
        b = sample_ft(seed=42, N=3, nome=NOME)
        assert a == b


class TestBailey:
    def test_random_draws(self):
        for i in range(10):
            params = sample_bailey(seed=200 + i, N=1 + i % 3, nome=NOME)
            rep = verify_bailey(params, tol=1e-8)
            assert rep.passed, f"seed {200 + i}: rel={rep.rel_err}"

    def test_s_map_balancing(self):
        params = sample_bailey(seed=5, N=2, nome=NOME)
        s = bailey_map(params.t, NOME)
        q = NOME.q
        # the image parameters satisfy the same constraints
        assert abs(math.prod(s, start=1 + 0j) - q * q) < 1e-10 * abs(q * q)
        assert abs(s[0] * s[6] - q**-2) < 1e-10 * abs(q**-2)

    def test_root_sign_flip_also_works(self):
        params = sample_bailey(seed=9, N=2, nome=NOME)
        rep = verify_bailey(params, tol=1e-8, root_sign=-1)
        assert rep.passed

    def test_ft_embedding(self):
        ft = sample_ft(seed=11, N=3, nome=NOME)
        bl = bailey_from_ft(ft, x=0.55 + 0.22j)
        rep_b = verify_bailey(bl, tol=1e-8)
        rep_f = verify_ft_sum(ft, tol=1e-8)
        assert rep_b.passed and rep_f.passed
        # with t2 t3 = q the 12E11 left side collapses to the 10E9 sum
        assert abs(rep_b.lhs - rep_f.lhs) <= 1e-9 * abs(rep_f.lhs)

    def test_json_round_trip(self):
        params = sample_bailey(seed=4, N=1, nome=NOME)
        assert BaileyParams.from_json(params.to_json()) == params

    def test_constraint_violation(self):
        params = sample_bailey(seed=4, N=1, nome=NOME)
        bad = list(params.t)
        bad[2] *= 1.05
        with pytest.raises(ValueError):
            BaileyParams(tuple(bad), NOME, 1)


class TestMulti1:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_draws(self, n):
        for i in range(6):
            params = sample_multi1(seed=300 + 10 * n + i, n=n, N=1 + i % 3, nome=NOME)
            rep = verify_multi1(params, tol=1e-7)
            assert rep.passed, f"n={n} seed {300 + 10 * n + i}: rel={rep.rel_err}"

    def test_rank_one_matches_ft(self):
        ft = sample_ft(seed=21, N=3, nome=NOME)
        m1 = Multi1Params(1, 0.7 + 0.1j, ft.t, 3, NOME)  # t unused at n=1
        rep_m = verify_multi1(m1, tol=1e-9)
        rep_f = verify_ft_sum(ft, tol=1e-9)
        assert rep_m.passed and rep_f.passed
        assert abs(rep_m.lhs - rep_f.lhs) <= 1e-10 * abs(rep_f.lhs)

    def test_ordered_tuple_boundary_zero(self):
        # the coefficient vanishes structurally just above the diagonal,
        # which is why the sum runs over ordered tuples only
        params = sample_multi1(seed=8, n=2, N=2, nome=NOME)
        c = _multi1_coefficient(params, (2, 1), DEFAULT_POLICY)
        assert c.is_zero

    def test_json_round_trip(self):
        params = sample_multi1(seed=6, n=2, N=2, nome=NOME)
        assert Multi1Params.from_json(params.to_json()) == params

    def test_constraint_violation(self):
        params = sample_multi1(seed=6, n=2, N=2, nome=NOME)
        with pytest.raises(ValueError):
            Multi1Params(params.n, params.t * 1.03, params.t6, params.N, NOME)


class TestMulti2:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_draws(self, n):
        for i in range(4):
            Ns = tuple(1 + (i + j) % 2 for j in range(n))
            params = sample_multi2(seed=400 + 10 * n + i, n=n, Ns=Ns, nome=NOME)
            rep = verify_multi2(params, tol=1e-7)
            assert rep.passed, f"n={n} seed {400 + 10 * n + i}: rel={rep.rel_err}"

    def test_corner_coefficient_is_one(self):
        params = sample_multi2(seed=9, n=2, Ns=(2, 1), nome=NOME)
        c = _multi2_coefficient(params, (0, 0), DEFAULT_POLICY)
        assert abs(c.value - 1.0) < 1e-14

    def test_json_round_trip(self):
        params = sample_multi2(seed=10, n=2, Ns=(1, 2), nome=NOME)
        assert Multi2Params.from_json(params.to_json()) == params

    def test_constraint_violation(self):
        params = sample_multi2(seed=10, n=2, Ns=(1, 2), nome=NOME)
        bad = list(params.t)
        bad[0] *= 1.02
        with pytest.raises(ValueError):
            Multi2Params(params.n, tuple(bad), params.Ns, NOME)


class TestGeneralCoefficient:
    def test_balance_enforced(self):
        pair = ModularPair(0.04 + 0.3j, 0.08 + 0.45j)
        with pytest.raises(ValueError):
            general_multi_coefficient([[0.3 + 0j]], [[0.9 + 0j]], [1 + 0j], pair, (1,))

    def test_rank_one_reduces_to_factorial_ratio(self):
        from thetahyp import elliptic_factorial

        pair = ModularPair(0.04 + 0.3j, 0.08 + 0.45j)
        u, z = 0.31 - 0.12j, 0.6 + 0.2j
        got = general_multi_coefficient([[u, -u]], [[0.5 + 0.1j, u - u - 0.5 - 0.1j + 0j]], [z], pair, (2,))
        num = (elliptic_factorial(u, pair, 2) * elliptic_factorial(-u, pair, 2)).value
        den = (
            elliptic_factorial(0.5 + 0.1j, pair, 2) * elliptic_factorial(-0.5 - 0.1j, pair, 2)
        ).value
        assert abs(got - num / den * z**2) <= 1e-12 * abs(got)
