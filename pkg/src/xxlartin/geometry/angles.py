"""Two layers of angle arithmetic.

Layer 1, ``RationalAngle``: exact rational multiples of pi with a flag saying
the true quantity strictly exceeds the stored value. All verdicts are made
here.

Layer 2, ``CertifiedAngle``: outward-rounded intervals in radians, used to
check Layer 1 constants against the explicit product geometry for concrete
m and alpha.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

from mpmath import iv, mp, mpf
from mpmath.libmp import libmpi

DEFAULT_ALPHA = Fraction(1, 10)
DEFAULT_PRECISION = 128
MAX_PRECISION = 1024


class PrecisionExhausted(ArithmeticError):
    pass


@total_ordering
@dataclass(frozen=True)
class RationalAngle:
    """``coef * pi``; ``strict`` means the quantity is strictly larger."""

    coef: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.coef + other.coef, self.strict or other.strict)

    def __mul__(self, n: int) -> "RationalAngle":
        return RationalAngle(self.coef * n, self.strict and n > 0)

    __rmul__ = __mul__

    def key(self) -> tuple:
        # non-strict sorts first at equal value: it is the weaker guarantee
        return (self.coef, self.strict)

    def __lt__(self, other: "RationalAngle") -> bool:
        return self.key() < other.key()

    def at_least(self, bound: "RationalAngle") -> bool:
        """True iff the quantity is certainly >= ``bound``."""
        return self.coef >= bound.coef

    def exceeds(self, bound: "RationalAngle") -> bool:
        """True iff the quantity is certainly > ``bound``."""
        return self.coef > bound.coef or (self.coef == bound.coef and self.strict)

    def radians(self) -> float:
        return float(self.coef) * math.pi

    def __str__(self) -> str:
        text = pi_string(self.coef)
        return f"{text} (strict)" if self.strict else text


def pi_string(coef: Fraction) -> str:
    coef = Fraction(coef)
    if coef == 0:
        return "0"
    num, den = coef.numerator, coef.denominator
    head = "π" if num == 1 else ("-π" if num == -1 else f"{num}π")
    return head if den == 1 else f"{head}/{den}"


def pi_frac(num: int, den: int = 1, strict: bool = False) -> RationalAngle:
    return RationalAngle(Fraction(num, den), strict)


PI = pi_frac(1)
TWO_PI = pi_frac(2)
INFINITE = None  # horizontal distance between directions in different polygons


@contextmanager
def _workprec(bits: int):
    # the interval context keeps precision as global state
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


# -- alpha -----------------------------------------------------------------------


def _tan_pi_10(prec: int):
    with _workprec(prec):
        s5 = iv.sqrt(iv.mpf(5))
        return iv.sqrt(iv.mpf(25) - 10 * s5) / 5


@dataclass(frozen=True)
class Alpha:
    """The vertical translation length; must satisfy 0 < value < tan(pi/10)."""

    value: Fraction
    precision: int = DEFAULT_PRECISION
    checked: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if not self.checked:
            return
        if self.value <= 0:
            raise ValueError(f"alpha must be positive, got {self.value}")
        prec = self.precision
        while True:
            with _workprec(prec):
                bound = _tan_pi_10(prec)
                q_lo, q_hi = _ends(iv.mpf(self.value.numerator) / self.value.denominator)
                b_lo, b_hi = _ends(bound)
                if q_hi < b_lo:
                    return
                if q_lo > b_hi:
                    raise ValueError(f"alpha = {self.value} is not below tan(pi/10) ~ 0.3249")
            prec *= 2
            if prec > MAX_PRECISION:
                raise PrecisionExhausted(f"cannot separate alpha = {self.value} from tan(pi/10)")

    @classmethod
    def unchecked(cls, value, precision: int = DEFAULT_PRECISION) -> "Alpha":
        """Skip the range check (for negative controls)."""
        return cls(Fraction(value), precision, checked=False)

    def __str__(self) -> str:
        return str(self.value)


def parse_alpha(text: str, precision: int = DEFAULT_PRECISION) -> Alpha:
    return Alpha(Fraction(text), precision)


# -- intervals -------------------------------------------------------------------


def _ends(x) -> tuple[mpf, mpf]:
    a, b = x._mpi_
    return mp.make_mpf(a), mp.make_mpf(b)


def _iv_atan(x):
    return iv.make_mpf(libmpi.mpi_atan(x._mpi_, iv.prec))


def _iv_clip(x, lo, hi):
    a, b = _ends(x)
    return iv.mpf([max(a, mpf(lo)), min(b, mpf(hi))])


def _iv_acos(x):
    x = _iv_clip(x, -1, 1)
    xa, xb = _ends(x)
    # half-angle forms stay sharp near the ends of [-1, 1]
    if xb <= 0:
        r = iv.sqrt(_iv_clip((1 + x) / (1 - x), 0, math.inf))
        return iv.pi - 2 * _iv_atan(r)
    if xa >= 0:
        r = iv.sqrt(_iv_clip((1 - x) / (1 + x), 0, math.inf))
        return 2 * _iv_atan(r)
    # acos is decreasing
    lo = _ends(_iv_acos(iv.mpf([xb, xb])))[0]
    hi = _ends(_iv_acos(iv.mpf([xa, xa])))[1]
    return iv.mpf([lo, hi])


def _slope_name(s: int) -> str:
    return {1: "+φ", 0: "0", -1: "-φ"}[s]


def _closed_form(d: Fraction | None, s1: int, s2: int) -> tuple[str, RationalAngle | None]:
    """Closed form of the product angle, and its exact value when rational."""
    horizontal = Fraction(1) if d is None or d >= 1 else d
    if s1 == 0 and s2 == 0:
        return pi_string(horizontal), RationalAngle(horizontal)
    if horizontal == 1:
        if s1 == -s2:
            return "π", PI
        if s1 == s2:
            return "π - 2·arctan α", None
        return "π - arctan α", None
    return f"arccos(cos({pi_string(horizontal)})·cos φ₁·cos φ₂ + sin φ₁·sin φ₂)", None


@dataclass(frozen=True)
class CertifiedAngle:
    """An angle enclosed in ``[lo, hi]`` radians.

    The defining data (horizontal distance, slopes, alpha) is kept so that
    comparisons can re-evaluate at higher precision when an interval
    straddles the bound.
    """

    horizontal: Fraction | None
    slope1: int
    slope2: int
    alpha: Fraction
    precision: int
    lo: mpf
    hi: mpf
    provenance: str
    exact: RationalAngle | None = None

    @property
    def width(self) -> mpf:
        return self.hi - self.lo

    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def at_precision(self, precision: int) -> "CertifiedAngle":
        return product_angle(self.horizontal, self.slope1, self.slope2, self.alpha, precision)

    def compare(self, bound: RationalAngle) -> int:
        """Sign of (angle - bound): +1, -1, or 0 only for exact equality.

        Raises ``PrecisionExhausted`` when the interval cannot be separated
        from the bound within the precision ladder.
        """
        if self.exact is not None:
            diff = self.exact.coef - bound.coef
            return (diff > 0) - (diff < 0)
        angle = self
        while True:
            with _workprec(angle.precision):
                b_lo, b_hi = _ends(iv.pi * iv.mpf(bound.coef.numerator) / bound.coef.denominator)
                if angle.lo > b_hi:
                    return 1
                if angle.hi < b_lo:
                    return -1
            if angle.precision * 2 > MAX_PRECISION:
                raise PrecisionExhausted(f"{angle.provenance} vs {bound}")
            angle = angle.at_precision(angle.precision * 2)

    def exceeds(self, bound: RationalAngle) -> bool:
        return self.compare(bound) > 0

    def at_least(self, bound: RationalAngle) -> bool:
        return self.compare(bound) >= 0

    def lower_bound(self, max_den: int = 10**6) -> RationalAngle:
        """A rational multiple of pi certified to lie below the angle.

        The lower endpoint divided by pi is snapped down to the grid
        ``1/max_den``; the flag is strict unless the angle is exactly that
        value.
        """
        if self.exact is not None:
            return self.exact
        with _workprec(self.precision):
            lower = _to_fraction(_ends(iv.mpf([self.lo, self.lo]) / iv.pi)[0])
        snapped = Fraction(math.floor(lower * max_den), max_den)
        return RationalAngle(snapped, strict=snapped < lower)

    def __str__(self) -> str:
        return f"{self.provenance} ∈ [{mpf_str(self.lo)}, {mpf_str(self.hi)}]"


def _to_fraction(x: mpf) -> Fraction:
    man, exp = x.man_exp
    return Fraction(man) * (Fraction(2) ** exp)


def mpf_str(x: mpf, digits: int = 20) -> str:
    from mpmath import nstr

    return nstr(x, digits)


def product_angle(
    horizontal: Fraction | RationalAngle | None,
    slope1: int,
    slope2: int,
    alpha: Alpha | Fraction,
    precision: int = DEFAULT_PRECISION,
) -> CertifiedAngle:
    """Angle in the link of a product T x R between two directions.

    ``horizontal`` is the link distance of the T-components as a multiple of
    pi (``None`` for infinite); it is truncated at pi. ``slope1``/``slope2``
    are in {-1, 0, +1}, meaning vertical slope -phi, 0, +phi with
    phi = arctan(alpha). The angle satisfies
    cos = cos(d) cos(phi1) cos(phi2) + sin(phi1) sin(phi2).
    """
    if isinstance(horizontal, RationalAngle):
        horizontal = horizontal.coef
    if slope1 not in (-1, 0, 1) or slope2 not in (-1, 0, 1):
        raise ValueError("slopes must be -1, 0 or +1 (multiples of arctan alpha)")
    a = alpha.value if isinstance(alpha, Alpha) else Fraction(alpha)
    d = Fraction(1) if horizontal is None or horizontal >= 1 else Fraction(horizontal)
    if d < 0:
        raise ValueError("horizontal distance must be non-negative")
    provenance, exact = _closed_form(d, slope1, slope2)
    with _workprec(precision):
        if exact is not None:
            val = iv.pi * iv.mpf(exact.coef.numerator) / exact.coef.denominator
        else:
            q = iv.mpf(a.numerator) / a.denominator
            norm = iv.sqrt(1 + q * q)
            c, s = 1 / norm, q / norm  # cos(phi), sin(phi)
            if d == 1:
                cos_d = iv.mpf(-1)
            else:
                cos_d = iv.cos(iv.pi * iv.mpf(d.numerator) / d.denominator)
            c1 = c if slope1 else iv.mpf(1)
            c2 = c if slope2 else iv.mpf(1)
            x = cos_d * c1 * c2 + (slope1 * s) * (slope2 * s)
            val = _iv_acos(x)
        lo, hi = _ends(val)
    return CertifiedAngle(d if horizontal is not None else None, slope1, slope2, a, precision,
                          lo, hi, provenance, exact)
