import cmath
import math

import numpy as np
import pytest

from thetahyp import (
    HForm,
    ModularPair,
    Nome,
    ThetaSeriesSpec,
    check_ellipticity,
    check_modularity,
    check_total_ellipticity_multi1,
    check_total_ellipticity_multi2,
    check_total_ellipticity_wp,
    h_eval,
    multipliers,
    sample_multi1,
    sample_multi2,
    term_ratio_at,
    vwp_canonical_h,
)

NOME = Nome(0.35 + 0.1j, 0.25 + 0.05j)
PAIR = ModularPair(0.04 + 0.3j, 0.08 + 0.45j)
S_PAIR = ModularPair(-0.2 + 0.3j, 0.1 + 0.6j)


def balanced_spec(rng):
    """An elliptic-balanced series: r+1 numerator and r denominator
    parameters (the q is implicit) with matching products."""
    q = NOME.q
    num = [complex(rng.uniform(0.3, 0.8), rng.uniform(-0.3, 0.3)) for _ in range(3)]
    den = [complex(rng.uniform(0.3, 0.8), rng.uniform(-0.3, 0.3)) for _ in range(1)]
    den.append(math.prod(num, start=1 + 0j) / (q * den[0]))
    return ThetaSeriesSpec("unilateral_E", tuple(num), tuple(den), 0, 0.4 + 0.1j, NOME)


class TestHForm:
    def test_trivial_form_is_constant(self):
        form = HForm((), (), 0j, 2.5 + 0j, PAIR)
        assert h_eval(form, 0.37 - 0.2j) == 2.5 + 0j

    def test_multiplier_laws(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            r = int(rng.integers(1, 4))
            s = int(rng.integers(1, 4))
            zeros = tuple(complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2)) for _ in range(r))
            poles = tuple(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 0.9)) for _ in range(s))
            beta = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
            form = HForm(zeros, poles, beta, 1.3 - 0.4j, PAIR)
            a, b, gamma = multipliers(form)
            x = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.15, 0.15))
            base = h_eval(form, x)
            got_a = h_eval(form, x + 1 / PAIR.sigma)
            assert abs(got_a - a * base) <= 1e-10 * abs(a * base)
            got_b = h_eval(form, x + PAIR.tau / PAIR.sigma)
            expect = b * cmath.exp(2j * math.pi * PAIR.sigma * gamma * x) * base
            assert abs(got_b - expect) <= 1e-9 * abs(expect)

    def test_elliptic_when_balanced(self):
        # equal counts, beta = 0, equal sums -> both multipliers are 1
        zeros = (0.3 + 0.1j, -0.2 + 0.05j)
        poles = (0.25 + 0.1j, -0.15 + 0.05j)
        form = HForm(zeros, poles, 0j, 1.0 + 0j, PAIR)
        a, b, gamma = multipliers(form)
        assert abs(a - 1) < 1e-14 and abs(b - 1) < 1e-14 and gamma == 0


class TestEllipticityCheck:
    def test_balanced_series_passes(self):
        rng = np.random.default_rng(1)
        for _ in range(3):
            spec = balanced_spec(rng)
            rep = check_ellipticity(lambda w: term_ratio_at(spec, w), NOME, samples=15, tol=1e-9)
            assert rep.passed, rep.max_rel_dev

    def test_unbalanced_series_fails(self):
        rng = np.random.default_rng(2)
        spec = balanced_spec(rng)
        den = spec.denominator
        bad = ThetaSeriesSpec(
            spec.kind, spec.numerator, (den[0], den[1] * 1.1), spec.alpha, spec.z, NOME
        )
        rep = check_ellipticity(lambda w: term_ratio_at(bad, w), NOME, samples=15, tol=1e-9)
        assert not rep.passed
        assert rep.max_rel_dev > 1e-3


class TestTotalEllipticityWP:
    def test_canonical_form_passes(self):
        us = [0.31 + 0.07j, -0.22 + 0.11j, 0.14 - 0.09j, 0.05 + 0.02j]
        reports = check_total_ellipticity_wp(0.2 - 0.1j, us, 0.6 + 0.3j, PAIR, samples=6, tol=1e-9)
        assert len(reports) == 2 + len(us)  # index, u0, each u_m
        for rep in reports:
            assert rep.passed, f"{rep.shift_kind}: {rep.max_rel_dev}"

    def test_no_parameters_reduces_to_constant(self):
        val = vwp_canonical_h(0.2 + 0.1j, [], 0.7 - 0.2j, PAIR, 0.13 + 0.05j)
        assert abs(val - (0.7 - 0.2j)) < 1e-14


class TestTotalEllipticityMulti:
    @pytest.mark.parametrize("n", [1, 2])
    def test_multi1(self, n):
        params = sample_multi1(seed=50 + n, n=n, N=2, nome=NOME)
        reports = check_total_ellipticity_multi1(params, samples=5, tol=1e-9)
        assert reports
        for rep in reports:
            assert rep.passed, f"{rep.shift_kind}: {rep.max_rel_dev}"

    @pytest.mark.parametrize("n", [1, 2])
    def test_multi2(self, n):
        params = sample_multi2(seed=60 + n, n=n, Ns=(2,) * n, nome=NOME)
        reports = check_total_ellipticity_multi2(params, samples=5, tol=1e-9)
        assert reports
        for rep in reports:
            assert rep.passed, f"{rep.shift_kind}: {rep.max_rel_dev}"


def wp_hform(u0, us, z, pair):
    usum = sum(us, 0j)
    zeros = tuple(u0 + u for u in us) + (u0 - usum,)
    poles = tuple(u0 - u for u in us) + (u0 + usum,)
    return HForm(zeros, poles, 0j, z, pair)


class TestModularity:
    def test_wp_form_passes(self):
        us = [0.21 + 0.05j, -0.13 + 0.08j, 0.09 - 0.04j]
        form = wp_hform(0.15 - 0.06j, us, 0.5 + 0.2j, S_PAIR)
        structural, rep = check_modularity(form, tol=1e-8)
        assert structural
        assert rep.passed, rep.max_rel_dev

    def test_equal_sums_unequal_squares_fails(self):
        # sum of zeros equals sum of poles (elliptic), but squared sums
        # differ, so the S-transform comparison must fail both gates
        zeros = (0.3 + 0.1j, -0.2 + 0.05j)
        poles = (0.4 + 0.1j, -0.3 + 0.05j)
        form = HForm(zeros, poles, 0j, 1.0 + 0j, S_PAIR)
        structural, rep = check_modularity(form, tol=1e-8)
        assert not structural
        assert not rep.passed
        assert rep.max_rel_dev > 1e-3
