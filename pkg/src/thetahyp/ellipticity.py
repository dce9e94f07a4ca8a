"""Numeric quasiperiodicity, ellipticity, total-ellipticity and
modular-invariance checkers for term ratios.

The index shift is tested multiplicatively (w -> p w, equivalent to
x -> x + tau/sigma since q^{tau/sigma} = p); the sigma^{-1} shift is a
structural identity of the multiplicative form. Parameter shifts for the
canonical well-poised balanced form and for the two multivariable
families follow the shift rules under which the balancing condition is
preserved (the dependent parameter co-shifts where it appears
explicitly).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PoleError
from .report import EllipticityReport, rel_err
from .theta import (
    DEFAULT_POLICY,
    ModularPair,
    Nome,
    PrecisionPolicy,
    apply_modular,
    elliptic_number,
)
from .identities import Multi1Params, Multi2Params
from .factorials import theta_factor


@dataclass(frozen=True)
class HForm:
    """Term ratio h(x) = prod [x+u_m] / prod [x+v_m] * q^{beta x} * y."""

    zeros: tuple[complex, ...]
    poles: tuple[complex, ...]
    beta: complex
    y: complex
    pair: ModularPair

    def __post_init__(self) -> None:
        object.__setattr__(self, "zeros", tuple(complex(u) for u in self.zeros))
        object.__setattr__(self, "poles", tuple(complex(v) for v in self.poles))


def h_eval(form: HForm, x: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    num = 1.0 + 0j
    for u in form.zeros:
        num *= elliptic_number(x + u, form.pair, policy)
    den = 1.0 + 0j
    for v in form.poles:
        den *= elliptic_number(x + v, form.pair, policy)
    if den == 0:
        raise PoleError(f"h(x) pole at x = {x}")
    qbx = cmath.exp(2j * math.pi * form.pair.sigma * form.beta * x)
    return num / den * qbx * form.y


def multipliers(form: HForm) -> tuple[complex, complex, complex]:
    """Closed-form quasiperiodicity multipliers (a, b, gamma):
    h(x + 1/sigma) = a h(x), h(x + tau/sigma) = b e^{2 pi i sigma gamma x} h(x)."""
    r, s = len(form.zeros), len(form.poles)
    sigma, tau = form.pair.sigma, form.pair.tau
    sign = (-1.0) ** (r - s)
    a = sign * cmath.exp(2j * math.pi * form.beta)
    gamma = complex(s - r)
    b = sign * cmath.exp(1j * math.pi * tau * (s - r + 2 * form.beta)) * cmath.exp(
        2j * math.pi * sigma * (sum(form.poles, 0j) - sum(form.zeros, 0j))
    )
    return a, b, gamma


def _sample_points(rng: np.random.Generator, count: int) -> list[complex]:
    return [
        complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.25, 0.25)) for _ in range(count)
    ]


def _max_dev(fn_pairs, samples: int, rng: np.random.Generator, max_retries: int = 200) -> tuple[float, int]:
    """Max relative deviation of fn_pairs(x) = (shifted, reference) over
    random sample points, resampling on pole collisions / tiny references."""
    dev = 0.0
    done = 0
    tries = 0
    while done < samples and tries < samples + max_retries:
        tries += 1
        x = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.25, 0.25))
        try:
            shifted, ref = fn_pairs(x)
        except (PoleError, ZeroDivisionError, OverflowError):
            continue
        if abs(ref) < 1e-12 or abs(ref) > 1e12:
            continue
        dev = max(dev, rel_err(shifted, ref))
        done += 1
    if done < samples:
        raise RuntimeError("could not gather enough pole-free sample points")
    return dev, done


def check_ellipticity(
    term_ratio_fn: Callable[[complex], complex],
    nome: Nome,
    samples: int = 20,
    tol: float = 1e-9,
    seed: int = 0,
) -> EllipticityReport:
    """Invariance of a multiplicative-argument term ratio under w -> p w.

    The sigma^{-1} shift (w unchanged) is automatic in this form and is
    not sampled.
    """
    rng = np.random.default_rng(seed)
    p = nome.p

    def pairs(x: complex) -> tuple[complex, complex]:
        w = cmath.exp(2j * math.pi * x) * 0.7  # generic annulus point
        return term_ratio_fn(p * w), term_ratio_fn(w)

    dev, done = _max_dev(pairs, samples, rng)
    return EllipticityReport("index_p_shift", dev, done, dev <= tol)


def vwp_canonical_h(
    u0: complex,
    us: list[complex],
    z: complex,
    pair: ModularPair,
    x: complex,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> complex:
    """Canonical term ratio of the well-poised balanced series:
    prod_m [x+u0+u_m]/[x+u0-u_m] * [x+u0-sum u]/[x+u0+sum u] * z."""
    usum = sum(us, 0j)
    num = 1.0 + 0j
    den = 1.0 + 0j
    for u in us:
        num *= elliptic_number(x + u0 + u, pair, policy)
        den *= elliptic_number(x + u0 - u, pair, policy)
    num *= elliptic_number(x + u0 - usum, pair, policy)
    den *= elliptic_number(x + u0 + usum, pair, policy)
    if den == 0:
        raise PoleError(f"vwp_canonical_h pole at x = {x}")
    return num / den * z


def check_total_ellipticity_wp(
    u0: complex,
    us: list[complex],
    z: complex,
    pair: ModularPair,
    samples: int = 10,
    tol: float = 1e-9,
    seed: int = 0,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> list[EllipticityReport]:
    """Total ellipticity of the canonical well-poised balanced term ratio:
    one report for the index shift, one for u0 and one per u_m, all shifts
    by the quasiperiod tau/sigma."""
    shift = pair.tau / pair.sigma
    reports: list[EllipticityReport] = []
    rng = np.random.default_rng(seed)

    def run(kind: str, fn) -> None:
        dev, done = _max_dev(fn, samples, rng)
        reports.append(EllipticityReport(kind, dev, done, dev <= tol))

    run(
        "index_p_shift",
        lambda x: (
            vwp_canonical_h(u0, us, z, pair, x + shift, policy),
            vwp_canonical_h(u0, us, z, pair, x, policy),
        ),
    )
    run(
        "param_p_shift:u0",
        lambda x: (
            vwp_canonical_h(u0 + shift, us, z, pair, x, policy),
            vwp_canonical_h(u0, us, z, pair, x, policy),
        ),
    )
    for m in range(len(us)):
        shifted_us = list(us)
        shifted_us[m] = us[m] + shift
        run(
            f"param_p_shift:u{m + 1}",
            lambda x, sus=shifted_us: (
                vwp_canonical_h(u0, sus, z, pair, x, policy),
                vwp_canonical_h(u0, us, z, pair, x, policy),
            ),
        )
    return reports


# ---------------------------------------------------------------------------
# multivariable term ratios (forward-shift ratios of the series coefficients)


def multi1_h(
    params: Multi1Params,
    l: int,
    lam_mult: list[complex],
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> complex:
    """Coefficient forward-shift ratio h_l for the ordered-tuple family,
    with the summation indices continued multiplicatively: lam_mult[j]
    stands for q^{lambda_j}."""
    nome = params.nome
    q, p = nome.q, nome.p
    t = params.t
    n = params.n
    taus = params.taus
    xl = lam_mult[l - 1]
    out = 1.0 + 0j
    for j in range(1, l):
        xj = lam_mult[j - 1]
        num = (
            theta_factor(taus[j - 1] * taus[l - 1] * xj * xl * q, p, policy).value
            * theta_factor(taus[l - 1] / taus[j - 1] * xl * q / xj, p, policy).value
            * theta_factor(t * taus[j - 1] * taus[l - 1] * xj * xl, p, policy).value
            * theta_factor(t * taus[l - 1] / taus[j - 1] * xl / xj, p, policy).value
        )
        den = (
            theta_factor(taus[j - 1] * taus[l - 1] * xj * xl, p, policy).value
            * theta_factor(taus[l - 1] / taus[j - 1] * xl / xj, p, policy).value
            * theta_factor(taus[j - 1] * taus[l - 1] * xj * xl * q / t, p, policy).value
            * theta_factor(taus[l - 1] / taus[j - 1] * xl * q / (xj * t), p, policy).value
        )
        out *= num / den
    for k in range(l + 1, n + 1):
        xk = lam_mult[k - 1]
        num = (
            theta_factor(taus[k - 1] * taus[l - 1] * xk * xl * q, p, policy).value
            * theta_factor(taus[k - 1] / taus[l - 1] * xk / (xl * q), p, policy).value
            * theta_factor(t * taus[k - 1] * taus[l - 1] * xk * xl, p, policy).value
            * theta_factor(taus[k - 1] / (t * taus[l - 1]) * xk / xl, p, policy).value
        )
        den = (
            theta_factor(taus[k - 1] * taus[l - 1] * xk * xl, p, policy).value
            * theta_factor(taus[k - 1] / taus[l - 1] * xk / xl, p, policy).value
            * theta_factor(taus[k - 1] * taus[l - 1] * xk * xl * q / t, p, policy).value
            * theta_factor(t * taus[k - 1] / taus[l - 1] * xk / (xl * q), p, policy).value
        )
        out *= num / den
    # head ratio theta(tau_l^2 x_l^2 q^2) / theta(tau_l^2 x_l^2): the
    # coefficient's own-index forward ratio (the lambda_l = 0 specialization
    # of the denominator would break ellipticity in lambda_l)
    rest = q * t ** (2 * (n - l)) * theta_factor(
        taus[l - 1] ** 2 * xl**2 * q**2, p, policy
    ).value / theta_factor(taus[l - 1] ** 2 * xl**2, p, policy).value
    for tm in params.t6:
        rest *= (
            theta_factor(tm * taus[l - 1] * xl, p, policy).value
            / theta_factor(taus[l - 1] * xl * q / tm, p, policy).value
        )
    return out * rest


def multi2_h(
    params: Multi2Params,
    l: int,
    lam_mult: list[complex],
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> complex:
    """Coefficient forward-shift ratio h_l for the box-lattice family."""
    nome = params.nome
    q, p = nome.q, nome.p
    t = params.t
    n = params.n
    xl = lam_mult[l - 1]
    out = 1.0 + 0j
    for j in range(1, l):
        xj = lam_mult[j - 1]
        num = (
            theta_factor(t[j] * t[l] * xj * xl * q, p, policy).value
            * theta_factor(t[j] / t[l] * xj / (xl * q), p, policy).value
        )
        den = (
            theta_factor(t[j] * t[l] * xj * xl, p, policy).value
            * theta_factor(t[j] / t[l] * xj / xl, p, policy).value
        )
        out *= num / den
    for k in range(l + 1, n + 1):
        xk = lam_mult[k - 1]
        num = (
            theta_factor(t[l] * t[k] * xl * xk * q, p, policy).value
            * theta_factor(t[l] / t[k] * xl * q / xk, p, policy).value
        )
        den = (
            theta_factor(t[l] * t[k] * xl * xk, p, policy).value
            * theta_factor(t[l] / t[k] * xl / xk, p, policy).value
        )
        out *= num / den
    rest = q**l * theta_factor(t[l] ** 2 * xl**2 * q**2, p, policy).value / theta_factor(
        t[l] ** 2 * xl**2, p, policy
    ).value
    for m in range(2 * n + 4):
        rest *= (
            theta_factor(t[l] * t[m] * xl, p, policy).value
            / theta_factor(t[l] * xl * q / t[m], p, policy).value
        )
    return out * rest


def _rand_mult_args(rng: np.random.Generator, n: int) -> list[complex]:
    return [
        0.8 * cmath.exp(2j * math.pi * complex(rng.uniform(0, 1), rng.uniform(-0.05, 0.05)))
        for _ in range(n)
    ]


def _multi_dev(ref_fn, shifted_fn, samples: int, rng, n: int) -> tuple[float, int]:
    dev = 0.0
    done = 0
    tries = 0
    while done < samples and tries < samples + 200:
        tries += 1
        lam = _rand_mult_args(rng, n)
        try:
            ref = ref_fn(lam)
            shf = shifted_fn(lam)
        except (PoleError, ZeroDivisionError):
            continue
        if abs(ref) < 1e-12 or abs(ref) > 1e12:
            continue
        dev = max(dev, rel_err(shf, ref))
        done += 1
    if done < samples:
        raise RuntimeError("could not gather enough pole-free sample points")
    return dev, done


def check_total_ellipticity_multi1(
    params: Multi1Params,
    samples: int = 8,
    tol: float = 1e-9,
    seed: int = 0,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> list[EllipticityReport]:
    """p-shift invariance of every h_l in the summation indices and in the
    free parameters t_0..t_4 and t (t_5 is the balancing-dependent
    parameter and co-shifts where required)."""
    p = params.nome.p
    n = params.n
    rng = np.random.default_rng(seed)
    reports: list[EllipticityReport] = []

    def run(kind: str, shifted_params: Multi1Params | None, lam_shift_idx: int | None, l: int) -> None:
        sp = shifted_params if shifted_params is not None else params

        def shifted(lam):
            lam2 = list(lam)
            if lam_shift_idx is not None:
                lam2[lam_shift_idx] = lam2[lam_shift_idx] * p
            return multi1_h(sp, l, lam2, policy)

        dev, done = _multi_dev(lambda lam: multi1_h(params, l, lam, policy), shifted, samples, rng, n)
        reports.append(EllipticityReport(kind, dev, done, dev <= tol))

    l_mid = max(1, (n + 1) // 2)
    for i in range(1, n + 1):
        run(f"index_p_shift:lambda{i}@h{l_mid}", None, i - 1, l_mid)

    def with_t6(new_t6, new_t=None) -> Multi1Params:
        # the shifted parameter set breaks the truncation invariant by
        # construction (it only holds modulo p), so bypass validation
        sp = object.__new__(Multi1Params)
        object.__setattr__(sp, "n", params.n)
        object.__setattr__(sp, "t", new_t if new_t is not None else params.t)
        object.__setattr__(sp, "t6", tuple(new_t6))
        object.__setattr__(sp, "N", params.N)
        object.__setattr__(sp, "nome", params.nome)
        return sp

    for m in range(5):  # t_0..t_4 free; t_5 co-shifts to keep balancing
        t6 = list(params.t6)
        t6[m] = t6[m] * p
        t6[5] = t6[5] / p
        run(f"param_p_shift:t{m}@h{l_mid}", with_t6(t6), None, l_mid)
    t6 = list(params.t6)
    t6[5] = t6[5] / p ** (2 * n - 2)
    run(f"param_p_shift:t@h{l_mid}", with_t6(t6, new_t=params.t * p), None, l_mid)
    return reports


def check_total_ellipticity_multi2(
    params: Multi2Params,
    samples: int = 8,
    tol: float = 1e-9,
    seed: int = 0,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> list[EllipticityReport]:
    """p-shift invariance of every h_l in the summation indices and in the
    parameters t_0..t_{2n+2} (the last parameter co-shifts to keep the
    balancing condition)."""
    p = params.nome.p
    n = params.n
    rng = np.random.default_rng(seed)
    reports: list[EllipticityReport] = []

    def run(kind: str, shifted_params: Multi2Params | None, lam_shift_idx: int | None, l: int) -> None:
        sp = shifted_params if shifted_params is not None else params

        def shifted(lam):
            lam2 = list(lam)
            if lam_shift_idx is not None:
                lam2[lam_shift_idx] = lam2[lam_shift_idx] * p
            return multi2_h(sp, l, lam2, policy)

        dev, done = _multi_dev(lambda lam: multi2_h(params, l, lam, policy), shifted, samples, rng, n)
        reports.append(EllipticityReport(kind, dev, done, dev <= tol))

    l_mid = max(1, (n + 1) // 2)
    for i in range(1, n + 1):
        run(f"index_p_shift:lambda{i}@h{l_mid}", None, i - 1, l_mid)

    last = 2 * n + 3
    for m in range(last):
        t = list(params.t)
        t[m] = t[m] * p
        t[last] = t[last] / p
        # the shifted parameter set violates the truncation invariants by
        # construction, so bypass the dataclass validation
        sp = object.__new__(Multi2Params)
        object.__setattr__(sp, "n", params.n)
        object.__setattr__(sp, "t", tuple(t))
        object.__setattr__(sp, "Ns", params.Ns)
        object.__setattr__(sp, "nome", params.nome)
        run(f"param_p_shift:t{m}@h{l_mid}", sp, None, l_mid)
    return reports


# ---------------------------------------------------------------------------
# modularity


def check_modularity(
    form: HForm,
    tol: float = 1e-8,
    struct_rtol: float = 1e-10,
    kind: str = "G",
    n_values: tuple[int, ...] = (0, 1, 2, 3),
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> tuple[bool, EllipticityReport]:
    """Structural sum-of-squares constraint plus the numeric comparison of
    h under (sigma, tau) -> (sigma/tau, -1/tau).

    kind="E" reads the pole list as excluding the implicit v = 1 entry and
    adds the 1 to the squared sum; kind="G" compares the sums directly.
    Returns (structural_pass, numeric report).
    """
    usq = sum(u * u for u in form.zeros)
    vsq = sum(v * v for v in form.poles)
    if kind == "E":
        vsq = vsq + 1.0
    scale = max(abs(usq), abs(vsq), 1.0)
    structural = abs(usq - vsq) <= struct_rtol * scale

    pair2 = apply_modular(form.pair, 0, -1, 1, 0)
    form2 = HForm(form.zeros, form.poles, form.beta, form.y, pair2)
    dev = 0.0
    count = 0
    for nn in n_values:
        try:
            ref = h_eval(form, complex(nn), policy)
            alt = h_eval(form2, complex(nn), policy)
        except (PoleError, ZeroDivisionError):
            continue
        if abs(ref) < 1e-12:
            continue
        dev = max(dev, rel_err(alt, ref))
        count += 1
    report = EllipticityReport("modular_S", dev, count, count > 0 and dev <= tol)
    return structural, report
