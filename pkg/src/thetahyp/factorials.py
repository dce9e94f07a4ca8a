"""Elliptic shifted factorials with structural zero/pole bookkeeping.

``theta_factorial(t, nome, n)`` is the multiplicative form
``theta(t; p; q)_n = prod_{m=0}^{n-1} theta(t q^m; p)`` and
``elliptic_factorial(u, pair, n)`` its additive counterpart
``[u]_n = [u][u+1]...[u+n-1]``. Negative indices invert:
``theta(t;p;q)_{-n} = 1/theta(t q^{-n};p;q)_n`` and ``[u]_{-n} = 1/[u-n]_n``.

Factors landing exactly on a lattice zero are not multiplied into the
scalar value; they are counted in ``zero_order`` / ``pole_order`` so that
ratios of factorials can resolve 0/inf structurally instead of dividing
by numerically tiny values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PoleError
from .theta import (
    DEFAULT_POLICY,
    ModularPair,
    Nome,
    PrecisionPolicy,
    elliptic_number,
    elliptic_number_zero_index,
    theta,
    theta_zero_index,
)


@dataclass(frozen=True)
class FactorialValue:
    """A factorial value split into a finite part and exact zero/pole orders.

    The represented quantity is ``finite_part * 0**(zero_order - pole_order)``
    read structurally: net zero order > 0 means an exact zero, net order < 0
    an exact pole, net order 0 the plain scalar ``finite_part``.
    """

    finite_part: complex
    zero_order: int = 0
    pole_order: int = 0

    @property
    def net_order(self) -> int:
        return self.zero_order - self.pole_order

    @property
    def is_zero(self) -> bool:
        return self.net_order > 0

    @property
    def is_pole(self) -> bool:
        return self.net_order < 0

    @property
    def value(self) -> complex:
        """The plain scalar; raises PoleError on a net pole."""
        if self.is_pole:
            raise PoleError(f"factorial value is infinite (pole order {-self.net_order})")
        if self.is_zero:
            return 0j
        return self.finite_part

    def __mul__(self, other: "FactorialValue | complex") -> "FactorialValue":
        if isinstance(other, FactorialValue):
            return FactorialValue(
                self.finite_part * other.finite_part,
                self.zero_order + other.zero_order,
                self.pole_order + other.pole_order,
            )
        return FactorialValue(self.finite_part * other, self.zero_order, self.pole_order)

    __rmul__ = __mul__

    def __truediv__(self, other: "FactorialValue | complex") -> "FactorialValue":
        if isinstance(other, FactorialValue):
            return FactorialValue(
                self.finite_part / other.finite_part,
                self.zero_order + other.pole_order,
                self.pole_order + other.zero_order,
            )
        return FactorialValue(self.finite_part / other, self.zero_order, self.pole_order)

    def inverse(self) -> "FactorialValue":
        return FactorialValue(1.0 / self.finite_part, self.pole_order, self.zero_order)


ONE = FactorialValue(1.0 + 0j)


def theta_factor(t: complex, p: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> FactorialValue:
    """A single theta(t; p) factor with its exact-zero flag."""
    if theta_zero_index(t, p) is not None:
        return FactorialValue(1.0 + 0j, zero_order=1)
    return FactorialValue(theta(t, p, policy))


def theta_factorial(
    t: complex,
    nome: Nome,
    n: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> FactorialValue:
    """theta(t; p; q)_n for any integer n."""
    q, p = nome.q, nome.p
    if n < 0:
        return theta_factorial(t * q**n, nome, -n, policy).inverse()
    out = ONE
    arg = complex(t)
    for _ in range(n):
        out = out * theta_factor(arg, p, policy)
        arg *= q
    return out


def theta_factorial_multi(
    ts: list[complex],
    nome: Nome,
    n: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> FactorialValue:
    """Product of theta_factorial over a parameter list (empty list -> 1)."""
    out = ONE
    for t in ts:
        out = out * theta_factorial(t, nome, n, policy)
    return out


def elliptic_factor(u: complex, pair: ModularPair, policy: PrecisionPolicy = DEFAULT_POLICY) -> FactorialValue:
    """A single elliptic number [u] with its exact-zero flag."""
    if elliptic_number_zero_index(u, pair) is not None:
        return FactorialValue(1.0 + 0j, zero_order=1)
    return FactorialValue(elliptic_number(u, pair, policy))


def elliptic_factorial(
    u: complex,
    pair: ModularPair,
    n: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> FactorialValue:
    """[u]_n = [u][u+1]...[u+n-1]; [u]_{-n} = 1/[u-n]_n."""
    if n < 0:
        return elliptic_factorial(u + n, pair, -n, policy).inverse()
    out = ONE
    for m in range(n):
        out = out * elliptic_factor(u + m, pair, policy)
    return out


def elliptic_factorial_multi(
    us: list[complex],
    pair: ModularPair,
    n: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> FactorialValue:
    out = ONE
    for u in us:
        out = out * elliptic_factorial(u, pair, n, policy)
    return out
