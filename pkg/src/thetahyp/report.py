"""Verification report types and JSON helpers shared by series/identities/cli.

All JSON surfaces serialize a complex scalar as a two-element array
``[re, im]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"expected [re, im] pair, got {v!r}")


def rel_err(lhs: complex, rhs: complex) -> float:
    """Relative error |lhs - rhs| / |rhs|, falling back to absolute error
    when the reference is numerically zero."""
    a = abs(lhs - rhs)
    scale = abs(rhs)
    if scale < 1e-20:
        return a
    return a / scale


@dataclass
class VerificationReport:
    """Both-sides comparison of an identity at one parameter point."""

    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    params_echo: dict = field(default_factory=dict)
    terms_summed: int = 0

    @classmethod
    def compare(
        cls,
        lhs: complex,
        rhs: complex,
        tol: float,
        params_echo: dict | None = None,
        terms_summed: int = 0,
    ) -> "VerificationReport":
        r = rel_err(lhs, rhs)
        return cls(
            lhs=complex(lhs),
            rhs=complex(rhs),
            abs_err=abs(lhs - rhs),
            rel_err=r,
            passed=r <= tol,
            params_echo=params_echo or {},
            terms_summed=terms_summed,
        )

    def to_json(self) -> dict:
        return {
            "lhs": complex_to_json(self.lhs),
            "rhs": complex_to_json(self.rhs),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "pass": self.passed,
            "params_echo": self.params_echo,
            "terms_summed": self.terms_summed,
        }


@dataclass
class EllipticityReport:
    """Outcome of one invariance check of a term ratio under a shift."""

    shift_kind: str
    max_rel_dev: float
    sample_count: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "shift_kind": self.shift_kind,
            "max_rel_dev": self.max_rel_dev,
            "sample_count": self.sample_count,
            "pass": self.passed,
        }
