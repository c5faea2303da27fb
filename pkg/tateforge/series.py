"""
Poincaré series, closed-form products and dimension comparison reports.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field


@dataclass(frozen=True)
class Factor:
    """1/(1 - q^d) for a polynomial factor, (1 + q^d) for an exterior one."""

    kind: str
    degree: int

    def label(self) -> str:
        return f"1/(1-q^{self.degree})" if self.kind == "poly" else f"(1+q^{self.degree})"


def P(*degrees: int) -> Tuple[Factor, ...]:
    return tuple(Factor("poly", d) for d in degrees)


def E(*degrees: int) -> Tuple[Factor, ...]:
    return tuple(Factor("ext", d) for d in degrees)


@dataclass(frozen=True)
class Term:
    coefficient: int
    shift: int
    factors: Tuple[Factor, ...]


@dataclass(frozen=True)
class ClosedForm:
    """A finite signed sum of q^shift · ∏ factors."""

    terms: Tuple[Term, ...]
    label: str = ""

    @classmethod
    def product(cls, *factors: Factor, shift: int = 0, label: str = "") -> "ClosedForm":
        return cls((Term(1, shift, tuple(factors)),), label)

    @classmethod
    def zero(cls) -> "ClosedForm":
        return cls((), "0")

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        label = " + ".join(x for x in (self.label, other.label) if x)
        return ClosedForm(self.terms + other.terms, label)

    def __sub__(self, other: "ClosedForm") -> "ClosedForm":
        negated = tuple(Term(-t.coefficient, t.shift, t.factors) for t in other.terms)
        return ClosedForm(self.terms + negated, f"{self.label} - {other.label}")

    def shifted(self, k: int) -> "ClosedForm":
        return ClosedForm(tuple(Term(t.coefficient, t.shift + k, t.factors) for t in self.terms), self.label)

    def times(self, *factors: Factor) -> "ClosedForm":
        return ClosedForm(tuple(Term(t.coefficient, t.shift, t.factors + tuple(factors)) for t in self.terms), self.label)

    def expand(self, lo: int, hi: int) -> Dict[int, int]:
        """Coefficients of q^d for lo <= d <= hi."""
        out = {d: 0 for d in range(lo, hi + 1)}
        for term in self.terms:
            span = hi - term.shift
            if span < 0:
                continue
            coeffs = [0] * (span + 1)
            coeffs[0] = 1
            for f in term.factors:
                if f.kind == "poly":
                    for d in range(f.degree, span + 1):
                        coeffs[d] += coeffs[d - f.degree]
                else:
                    for d in range(span, f.degree - 1, -1):
                        coeffs[d] += coeffs[d - f.degree]
            for d, c in enumerate(coeffs):
                deg = d + term.shift
                if lo <= deg <= hi:
                    out[deg] += term.coefficient * c
        return out


@dataclass(frozen=True)
class PoincareSeries:
    coefficients: Dict[int, int]
    closed_form: Optional[ClosedForm] = None
    provenance: str = "machine"

    @classmethod
    def from_dims(cls, dims: Sequence[int], provenance: str = "machine") -> "PoincareSeries":
        return cls({d: v for d, v in enumerate(dims)}, None, provenance)

    @classmethod
    def from_closed_form(cls, form: ClosedForm, lo: int, hi: int, provenance: str = "closed_form") -> "PoincareSeries":
        return cls(form.expand(lo, hi), form, provenance)

    def dims(self, lo: int, hi: int) -> List[int]:
        return [self.coefficients.get(d, 0) for d in range(lo, hi + 1)]


class DimMismatch(BaseModel):
    model_config = ConfigDict(extra='forbid')

    degree: int
    machine: int
    expected: int


class DimReport(BaseModel):
    """Per-degree comparison of machine dimensions against an expected series."""

    model_config = ConfigDict(extra='forbid')

    label: str
    lo: int
    hi: int
    machine: List[int]
    expected: List[int]
    equal: bool
    first_mismatch: Optional[DimMismatch] = None
    provenance: Dict[str, str] = Field(default_factory=dict)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)


def poincare_compare(
    machine: PoincareSeries,
    closed: PoincareSeries,
    N: int,
    lo: int = 0,
    label: str = "",
) -> DimReport:
    """Degreewise equality verdict for lo <= d <= N with the first mismatch highlighted."""
    got = machine.dims(lo, N)
    want = closed.dims(lo, N)
    mismatch = None
    for d, (g, w) in enumerate(zip(got, want), start=lo):
        if g != w:
            mismatch = DimMismatch(degree=d, machine=g, expected=w)
            break
    provenance = {"machine": machine.provenance, "expected": closed.provenance}
    if closed.closed_form is not None:
        provenance["closed_form"] = closed.closed_form.label or describe(closed.closed_form)
    return DimReport(
        label=label,
        lo=lo,
        hi=N,
        machine=got,
        expected=want,
        equal=mismatch is None,
        first_mismatch=mismatch,
        provenance=provenance,
    )


def describe(form: ClosedForm) -> str:
    parts = []
    for t in form.terms:
        sign = "-" if t.coefficient < 0 else ""
        body = "·".join(f.label() for f in t.factors) or "1"
        shift = f"q^{t.shift}·" if t.shift else ""
        parts.append(f"{sign}{shift}{body}")
    return " + ".join(parts) or "0"


def compare_dicts(machine: Dict[int, int], expected: Dict[int, int], degrees: Sequence[int], label: str = "") -> DimReport:
    """Comparison over an explicit degree list (used for total degrees, which may be negative)."""
    degrees = list(degrees)
    lo, hi = (min(degrees), max(degrees)) if degrees else (0, -1)
    return poincare_compare(
        PoincareSeries(machine),
        PoincareSeries(expected, provenance="closed_form"),
        hi,
        lo=lo,
        label=label,
    )
