"""Theta hypergeometric series evaluators and classifiers.

Covers the unilateral E-type series, the bilateral G-type series, their
very-well-poised simplified forms (multiplicative and additive), the
G-to-E two-series split, the p -> 0 degenerations to basic (q-)series,
and the balanced / well-poised / very-well-poised / modular classifiers.

Coefficients are assembled through FactorialValue products so that
structural zeros and poles are resolved exactly rather than through
divisions by numerically tiny theta values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import PoleError, ThetaDomainError
from .factorials import (
    ONE,
    FactorialValue,
    theta_factor,
    theta_factorial_multi,
)
from .report import VerificationReport, complex_from_json, complex_to_json
from .theta import DEFAULT_POLICY, ModularPair, Nome, PrecisionPolicy

REL_TOL = 1e-10  # classifier tolerance for multiplicative constraints

UNILATERAL_E = "unilateral_E"
BILATERAL_G = "bilateral_G"


def _check_params(params: list[complex], label: str) -> None:
    for t in params:
        t = complex(t)
        if t == 0 or not (math.isfinite(t.real) and math.isfinite(t.imag)):
            raise ThetaDomainError(f"{label} parameter must be finite and nonzero, got {t}")


@dataclass(frozen=True)
class ThetaSeriesSpec:
    """Full description of an E- or G-type theta hypergeometric series.

    For the E kind the implicit theta(q; p; q)_n denominator factor is
    inserted by the evaluator, not stored, so a G spec with an extra
    denominator parameter w = q round-trips into the matching E spec.
    """

    kind: str
    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]
    alpha: complex
    z: complex
    nome: Nome

    def __post_init__(self) -> None:
        if self.kind not in (UNILATERAL_E, BILATERAL_G):
            raise ValueError(f"unknown series kind {self.kind!r}")
        object.__setattr__(self, "numerator", tuple(complex(t) for t in self.numerator))
        object.__setattr__(self, "denominator", tuple(complex(w) for w in self.denominator))
        _check_params(list(self.numerator), "numerator")
        _check_params(list(self.denominator), "denominator")

    def effective_denominator(self) -> tuple[complex, ...]:
        if self.kind == UNILATERAL_E:
            return (self.nome.q,) + self.denominator
        return self.denominator

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "numerator": [complex_to_json(t) for t in self.numerator],
            "denominator": [complex_to_json(w) for w in self.denominator],
            "alpha": complex_to_json(self.alpha),
            "z": complex_to_json(self.z),
            "q": complex_to_json(self.nome.q),
            "p": complex_to_json(self.nome.p),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ThetaSeriesSpec":
        return cls(
            kind=obj["kind"],
            numerator=tuple(complex_from_json(t) for t in obj["numerator"]),
            denominator=tuple(complex_from_json(w) for w in obj["denominator"]),
            alpha=complex_from_json(obj["alpha"]),
            z=complex_from_json(obj["z"]),
            nome=Nome(complex_from_json(obj["q"]), complex_from_json(obj["p"])),
        )


@dataclass(frozen=True)
class VwpSpec:
    """Very-well-poised series in the simplified (t0; t1, ...) form."""

    t0: complex
    ts: tuple[complex, ...]
    z: complex
    nome: Nome
    kind: str = "unilateral"

    def __post_init__(self) -> None:
        if self.kind not in ("unilateral", "bilateral"):
            raise ValueError(f"unknown vwp kind {self.kind!r}")
        object.__setattr__(self, "ts", tuple(complex(t) for t in self.ts))
        _check_params([self.t0, *self.ts], "vwp")

    @property
    def r(self) -> int:
        return len(self.ts) + 4

    def to_json(self) -> dict:
        return {
            "kind": f"vwp_{self.kind}",
            "t0": complex_to_json(self.t0),
            "ts": [complex_to_json(t) for t in self.ts],
            "z": complex_to_json(self.z),
            "q": complex_to_json(self.nome.q),
            "p": complex_to_json(self.nome.p),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "VwpSpec":
        kind = obj["kind"]
        if not kind.startswith("vwp_"):
            raise ValueError(f"not a vwp spec: kind={kind!r}")
        return cls(
            t0=complex_from_json(obj["t0"]),
            ts=tuple(complex_from_json(t) for t in obj["ts"]),
            z=complex_from_json(obj["z"]),
            nome=Nome(complex_from_json(obj["q"]), complex_from_json(obj["p"])),
            kind=kind[4:],
        )


@dataclass(frozen=True)
class TruncationDecl:
    """Declares that numerator parameter param_index equals q^{-N} p^{-M}."""

    param_index: int
    N: int
    M: int = 0

    def validate(self, spec: ThetaSeriesSpec, rtol: float = 1e-12) -> None:
        t = spec.numerator[self.param_index]
        target = spec.nome.q ** (-self.N) * spec.nome.p ** (-self.M)
        if abs(t - target) > rtol * abs(target):
            raise ValueError(
                f"parameter {self.param_index} is not q^-{self.N} p^-{self.M} within {rtol}"
            )


@dataclass
class SeriesValue:
    value: complex
    terms_used: int
    terminated: bool
    tail_estimate: float

    def to_json(self) -> dict:
        return {
            "value": complex_to_json(self.value),
            "terms_used": self.terms_used,
            "terminated": self.terminated,
            "tail_estimate": self.tail_estimate,
        }


def spec_from_json(obj: dict) -> ThetaSeriesSpec | VwpSpec:
    kind = obj.get("kind")
    if isinstance(kind, str) and kind.startswith("vwp_"):
        return VwpSpec.from_json(obj)
    return ThetaSeriesSpec.from_json(obj)


# ---------------------------------------------------------------------------
# coefficients and term ratios


def coefficient(spec: ThetaSeriesSpec, n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> FactorialValue:
    """Coefficient c_n of the series as a FactorialValue (c_0 = 1)."""
    nome = spec.nome
    num = theta_factorial_multi(list(spec.numerator), nome, n, policy)
    den = theta_factorial_multi(list(spec.effective_denominator()), nome, n, policy)
    scalar = nome.q ** (spec.alpha * n * (n - 1) / 2.0) * spec.z**n
    return (num / den) * scalar


def term_ratio(spec: ThetaSeriesSpec, n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """h(n) = c_{n+1}/c_n built from single theta factors."""
    return term_ratio_at(spec, spec.nome.q**n, policy, n=n)


def term_ratio_at(
    spec: ThetaSeriesSpec,
    w: complex,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    n: int | None = None,
) -> complex:
    """h evaluated at a multiplicative argument w (w = q^n analytically
    continued). Requires integer alpha unless n is supplied."""
    nome = spec.nome
    num = ONE
    for t in spec.numerator:
        num = num * theta_factor(t * w, nome.p, policy)
    den = ONE
    for wk in spec.effective_denominator():
        den = den * theta_factor(wk * w, nome.p, policy)
    if n is not None:
        expo = nome.q ** (spec.alpha * n)
    elif spec.alpha == 0:
        expo = 1.0
    elif complex(spec.alpha).imag == 0 and float(complex(spec.alpha).real).is_integer():
        expo = w ** int(complex(spec.alpha).real)
    else:
        raise ValueError("term_ratio_at requires integer alpha for non-integer arguments")
    return (num / den).value * expo * spec.z


# ---------------------------------------------------------------------------
# evaluators


def _sum_unilateral(
    coeff_fn,
    trunc: TruncationDecl | int | None,
    policy: PrecisionPolicy,
) -> SeriesValue:
    """Sum coeff_fn(n) for n >= 0. trunc as a TruncationDecl or an explicit
    last index sums exactly that many terms; None caps at max_terms with a
    last-term tail heuristic."""
    if isinstance(trunc, TruncationDecl):
        last = trunc.N
    elif isinstance(trunc, int):
        last = trunc
    else:
        last = None

    total = 0j
    small_streak = 0
    n = 0
    cap = policy.max_terms if last is None else last + 1
    terminated = last is not None
    tail = 0.0
    while n < cap:
        c = coeff_fn(n)
        if c.is_zero:
            # a numerator lattice zero persists in every later coefficient
            terminated = True
            tail = 0.0
            break
        val = c.value
        total += val
        if last is None:
            if abs(val) < policy.series_tol * max(1.0, abs(total)):
                small_streak += 1
                if small_streak >= 2:
                    tail = abs(val)
                    break
            else:
                small_streak = 0
                tail = abs(val)
        n += 1
    return SeriesValue(total, min(n + 1, cap), terminated, 0.0 if terminated else tail)


def eval_E(
    spec: ThetaSeriesSpec,
    trunc: TruncationDecl | int | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Unilateral series sum_{n>=0} c_n."""
    if spec.kind != UNILATERAL_E:
        raise ValueError("eval_E expects a unilateral_E spec")
    if isinstance(trunc, TruncationDecl):
        trunc.validate(spec)
    return _sum_unilateral(lambda n: coefficient(spec, n, policy), trunc, policy)


def eval_G(
    spec: ThetaSeriesSpec,
    window: tuple[int, int],
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Bilateral series as a windowed partial sum over n in [n_min, n_max]."""
    if spec.kind != BILATERAL_G:
        raise ValueError("eval_G expects a bilateral_G spec")
    n_min, n_max = window
    if n_min > n_max:
        raise ValueError(f"empty window {window}")
    total = 0j
    edge = 0.0
    used = 0
    for n in range(n_min, n_max + 1):
        c = coefficient(spec, n, policy)
        if c.is_zero:
            continue
        val = c.value  # raises PoleError when unresolved
        total += val
        used += 1
        if n in (n_min, n_max):
            edge = max(edge, abs(val))
    return SeriesValue(total, used, False, edge)


def vwp_coefficient(spec: VwpSpec, n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> FactorialValue:
    """Coefficient of the simplified very-well-poised series at index n."""
    q, p = spec.nome.q, spec.nome.p
    t0 = spec.t0
    head = theta_factor(t0 * t0 * q ** (2 * n), p, policy) / theta_factor(t0 * t0, p, policy)
    ms = (t0,) + spec.ts if spec.kind == "unilateral" else spec.ts
    num = theta_factorial_multi([t0 * t for t in ms], spec.nome, n, policy)
    den = theta_factorial_multi([q * t0 / t for t in ms], spec.nome, n, policy)
    return head * (num / den) * (q * spec.z) ** n


def eval_vwp(
    spec: VwpSpec,
    trunc: TruncationDecl | int | None = None,
    window: tuple[int, int] | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Evaluate the simplified very-well-poised series (multiplicative form)."""
    if spec.kind == "unilateral":
        last = trunc.N if isinstance(trunc, TruncationDecl) else trunc
        return _sum_unilateral(lambda n: vwp_coefficient(spec, n, policy), last, policy)
    if window is None:
        raise ValueError("bilateral vwp evaluation needs a finite window")
    n_min, n_max = window
    total = 0j
    used = 0
    edge = 0.0
    for n in range(n_min, n_max + 1):
        c = vwp_coefficient(spec, n, policy)
        if c.is_zero:
            continue
        val = c.value
        total += val
        used += 1
        if n in (n_min, n_max):
            edge = max(edge, abs(val))
    return SeriesValue(total, used, False, edge)


def eval_vwp_additive(
    u0: complex,
    us: list[complex],
    pair: ModularPair,
    z: complex,
    trunc: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Additive form of the unilateral very-well-poised series.

    Includes the trailing factor q^{n (sum_m u_m - (r-7)/2)} with the sum
    running over m = 0..r-4 (u_0 itself included); for balanced parameters
    that factor is identically 1.
    """
    from .factorials import elliptic_factor, elliptic_factorial_multi

    r = len(us) + 4
    usum = u0 + sum(us)
    expo_step = cmath.exp(2j * math.pi * pair.sigma * (usum - (r - 7) / 2.0))
    head_den = elliptic_factor(2 * u0, pair, policy)
    total = 0j
    terminated = True
    n = 0
    for n in range(trunc + 1):
        head = elliptic_factor(2 * u0 + 2 * n, pair, policy) / head_den
        num = elliptic_factorial_multi([u0 + u0] + [u0 + u for u in us], pair, n, policy)
        den = elliptic_factorial_multi([u0 + 1 - u0] + [u0 + 1 - u for u in us], pair, n, policy)
        c = head * (num / den) * (z**n * expo_step**n)
        if c.is_zero:
            break
        total += c.value
    return SeriesValue(total, n + 1, terminated, 0.0)


# ---------------------------------------------------------------------------
# classification


@dataclass
class SeriesClass:
    balanced: bool
    well_poised: bool
    very_well_poised: bool
    modular_constraint: bool
    elliptic: bool
    vwp_root_sign: int = 0  # +1 / -1 when VWP matched, 0 otherwise

    def to_json(self) -> dict:
        return {
            "balanced": self.balanced,
            "well_poised": self.well_poised,
            "very_well_poised": self.very_well_poised,
            "modular_constraint": self.modular_constraint,
            "elliptic": self.elliptic,
        }


def _close(a: complex, b: complex, rtol: float = REL_TOL) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def _match_multiset(values: list[complex], targets: list[complex], rtol: float = REL_TOL) -> bool:
    pool = list(values)
    for tgt in targets:
        for i, v in enumerate(pool):
            if _close(v, tgt, rtol):
                del pool[i]
                break
        else:
            return False
    return True


def _additive_params(ts: tuple[complex, ...], q: complex) -> list[complex]:
    lq = cmath.log(q)
    return [cmath.log(t) / lq for t in ts]


def classify(spec: ThetaSeriesSpec | VwpSpec) -> SeriesClass:
    """Test the balanced / well-poised / very-well-poised / modular flags.

    All constraints are checked multiplicatively to rel 1e-10; the modular
    sum-of-squares check uses principal-branch additive parameters
    log(t)/log(q) and is meaningful when the parameters were built from
    small additive values.
    """
    if isinstance(spec, VwpSpec):
        return _classify_vwp(spec)
    q = spec.nome.q
    num = spec.numerator
    den = spec.denominator
    r, s = len(num), len(den)
    if spec.kind == UNILATERAL_E:
        dims_ok = s == r - 1
        prod_num = math.prod(num, start=1.0 + 0j)
        prod_den = math.prod(den, start=1.0 + 0j)
        balanced = dims_ok and _close(prod_num, q * prod_den)
        well_poised = dims_ok and r >= 2 and all(
            _close(q * num[0], num[m] * den[m - 1]) for m in range(1, r)
        )
        vwp, sign = _detect_vwp(num[0], list(num[1:]), q, spec.nome.p) if well_poised else (False, 0)
        u = _additive_params(num, q)
        v = _additive_params(den, q)
        modular = (
            dims_ok
            and balanced
            and _close(sum(x * x for x in u), 1.0 + sum(x * x for x in v))
        )
    else:
        dims_ok = s == r
        prod_num = math.prod(num, start=1.0 + 0j)
        prod_den = math.prod(den, start=1.0 + 0j)
        balanced = dims_ok and _close(prod_num, prod_den)
        pairs_ok = dims_ok and r >= 1
        well_poised = pairs_ok and all(
            _close(num[m] * den[m], num[0] * den[0]) for m in range(r)
        )
        if well_poised and r >= 1:
            t0 = num[0] * den[0] / q
            vwp, sign = _detect_vwp(t0, list(num), q, spec.nome.p)
        else:
            vwp, sign = False, 0
        u = _additive_params(num, q)
        v = _additive_params(den, q)
        modular = (
            dims_ok
            and balanced
            and _close(sum(x * x for x in u), sum(x * x for x in v))
        )
    return SeriesClass(balanced, well_poised, vwp, modular, balanced and dims_ok, sign)


def _detect_vwp(t0: complex, candidates: list[complex], q: complex, p: complex) -> tuple[bool, int]:
    if len(candidates) < 4 or p == 0:
        return False, 0
    root = cmath.sqrt(t0)
    ps = cmath.sqrt(p)
    for sign in (1, -1):
        rt = sign * root
        targets = [rt * q, -rt * q, rt * q / ps, -rt * q * ps]
        if _match_multiset(candidates, targets):
            return True, sign
    return False, 0


def _classify_vwp(spec: VwpSpec) -> SeriesClass:
    q = spec.nome.q
    r = spec.r if spec.kind == "unilateral" else len(spec.ts) + 4
    if spec.kind == "unilateral":
        prod = spec.t0 * math.prod(spec.ts, start=1.0 + 0j)
        target = q ** ((r - 7) / 2.0)
    else:
        prod = math.prod(spec.ts, start=1.0 + 0j)
        target = q ** ((r - 8) / 2.0)
    balanced = _close(prod, target) or _close(prod, -target)
    return SeriesClass(
        balanced=balanced,
        well_poised=True,
        very_well_poised=True,
        modular_constraint=balanced,
        elliptic=balanced,
        vwp_root_sign=1,
    )


# ---------------------------------------------------------------------------
# G/E split


def ge_split_check(
    spec: VwpSpec,
    window_M: int,
    window_Mp: int | None = None,
    tol: float = 1e-10,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> VerificationReport:
    """Finite-window reassembly of a bilateral vwp series from two
    unilateral ones: the n in [-M, M'] window of the G series equals the
    [0, M'] partial sum of the first E series plus a theta prefactor times
    the [0, M-1] partial sum of the second E series at the reflected
    argument."""
    if spec.kind != "bilateral":
        raise ValueError("ge_split_check expects a bilateral vwp spec")
    q, p = spec.nome.q, spec.nome.p
    t0, ts, z = spec.t0, spec.ts, spec.z
    r = len(ts) + 4
    m_prod = math.prod((t * t for t in ts), start=1.0 + 0j)

    lhs = eval_vwp(spec, window=(-window_M, window_Mp if window_Mp is not None else window_M), policy=policy).value

    e1 = VwpSpec(t0, ts + (q / t0,), z, spec.nome, "unilateral")
    first = eval_vwp(e1, trunc=window_Mp if window_Mp is not None else window_M, policy=policy).value

    if window_M == 0:
        rhs = first
    else:
        pref = (
            q ** (r - 7)
            / (z * m_prod)
            * theta_factor(q * q / (t0 * t0), p, policy).value
            / theta_factor(1.0 / (t0 * t0), p, policy).value
        )
        for t in ts:
            pref *= theta_factor(t / t0, p, policy).value / theta_factor(q / (t0 * t), p, policy).value
        z2 = q ** (r - 8) / (z * m_prod)
        e2 = VwpSpec(q / t0, ts + (t0,), z2, spec.nome, "unilateral")
        second = eval_vwp(e2, trunc=window_M - 1, policy=policy).value
        rhs = first + pref * second
    return VerificationReport.compare(lhs, rhs, tol, params_echo=spec.to_json())


# ---------------------------------------------------------------------------
# independent basic (p = 0) evaluators


def _qp_factor(a: complex, rtol: float = 1e-12) -> FactorialValue:
    if abs(a - 1.0) <= rtol:
        return FactorialValue(1.0 + 0j, zero_order=1)
    return FactorialValue(1.0 - a)


def _qp_factorial(a: complex, q: complex, n: int) -> FactorialValue:
    """q-Pochhammer (a; q)_n with exact-zero bookkeeping, any integer n."""
    if n < 0:
        return _qp_factorial(a * q**n, q, -n).inverse()
    out = ONE
    arg = complex(a)
    for _ in range(n):
        out = out * _qp_factor(arg)
        arg *= q
    return out


def _qp_multi(ts, q, n):
    out = ONE
    for t in ts:
        out = out * _qp_factorial(t, q, n)
    return out


def eval_basic(
    kind: str,
    numerator: list[complex] | None = None,
    denominator: list[complex] | None = None,
    q: complex = 0j,
    alpha: complex = 0,
    z: complex = 0j,
    trunc: int | None = None,
    window: tuple[int, int] | None = None,
    t0: complex | None = None,
    ts: list[complex] | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Independent basic hypergeometric evaluator (p = 0 degenerations).

    kind="phi": unilateral with implicit (q; q)_n denominator factor;
    kind="psi": bilateral over the given window;
    kind="vwp_phi": very-well-poised basic series in the (t0; ts) form.
    Uses q-Pochhammer products only.
    """
    if abs(q) >= 1.0:
        raise ThetaDomainError("eval_basic needs |q| < 1")
    if kind == "phi":
        def coeff(n: int) -> FactorialValue:
            num = _qp_multi(numerator, q, n)
            den = _qp_multi([q] + list(denominator), q, n)
            return (num / den) * (q ** (alpha * n * (n - 1) / 2.0) * z**n)

        return _sum_unilateral(coeff, trunc, policy)
    if kind == "psi":
        if window is None:
            raise ValueError("psi evaluation needs a finite window")
        total = 0j
        used = 0
        for n in range(window[0], window[1] + 1):
            c = (_qp_multi(numerator, q, n) / _qp_multi(denominator, q, n)) * z**n
            if c.is_zero:
                continue
            total += c.value
            used += 1
        return SeriesValue(total, used, False, 0.0)
    if kind == "vwp_phi":
        def coeff(n: int) -> FactorialValue:
            head = _qp_factor(t0 * t0 * q ** (2 * n)) / _qp_factor(t0 * t0)
            ms = [t0] + list(ts)
            num = _qp_multi([t0 * t for t in ms], q, n)
            den = _qp_multi([q * t0 / t for t in ms], q, n)
            return head * (num / den) * (q * z) ** n

        return _sum_unilateral(coeff, trunc, policy)
    raise ValueError(f"unknown basic series kind {kind!r}")
