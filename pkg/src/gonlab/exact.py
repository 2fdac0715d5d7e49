"""Exact reals of the form ``log(r)/n + q`` with rational ``r > 0`` and ``q``.

Every logarithmic quantity the engine produces (log successive minima, their
partial sums, box widths, the log-covolume shift) lives in this class.  The
set is a vector space over Q, so sums and rational multiples stay exact, and
the sign of any element is decidable: ``log(R) + B`` vanishes only when
``R == 1`` and ``B == 0`` (``e^B`` is irrational for rational ``B != 0``), so
interval refinement always terminates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "LogReal",
    "as_fraction",
    "format_logreal",
    "format_rational",
    "iv_context",
    "log_of",
    "parse_logreal",
    "parse_rational",
]

_FLOAT_MARGIN = 1e-9
_MAX_PREC = 1 << 16


@lru_cache(maxsize=None)
def iv_context(prec: int) -> MPIntervalContext:
    """Interval context fixed at ``prec`` bits; cached and never mutated afterwards."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected a rational value, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pow(r: Fraction, e: int) -> Fraction:
    return r**e if e >= 0 else (1 / r) ** (-e)


def _flog(r: Fraction) -> float:
    return math.log(r.numerator) - math.log(r.denominator)


class LogReal:
    """The exact real ``log(r)/n + q``.

    Parameters
    ----------
    r : positive rational
    n : positive integer divisor of the logarithm
    q : rational offset
    """

    __slots__ = ("r", "n", "q", "_f")

    def __init__(self, r=1, n: int = 1, q=0):
        r = as_fraction(r)
        q = as_fraction(q)
        if r <= 0:
            raise ValueError("log argument must be positive")
        if n <= 0:
            raise ValueError("log divisor must be positive")
        if r == 1:
            n = 1
        self.r = r
        self.n = int(n)
        self.q = q
        self._f = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q) -> "LogReal":
        return cls(1, 1, q)

    @classmethod
    def coerce(cls, x) -> "LogReal":
        if isinstance(x, LogReal):
            return x
        return cls(1, 1, as_fraction(x))

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            other = LogReal.coerce(other)
        except TypeError:
            return NotImplemented
        if other.r == 1:
            return LogReal(self.r, self.n, self.q + other.q)
        if self.r == 1:
            return LogReal(other.r, other.n, self.q + other.q)
        n = math.lcm(self.n, other.n)
        r = _pow(self.r, n // self.n) * _pow(other.r, n // other.n)
        return LogReal(r, n, self.q + other.q)

    __radd__ = __add__

    def __neg__(self):
        return LogReal(1 / self.r, self.n, -self.q)

    def __sub__(self, other):
        try:
            other = LogReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LogReal.coerce(other) - self

    def __mul__(self, c):
        if isinstance(c, LogReal):
            if c.r != 1:
                return NotImplemented
            c = c.q
        try:
            c = as_fraction(c)
        except TypeError:
            return NotImplemented
        if c == 0:
            return LogReal()
        r = _pow(self.r, c.numerator)
        return LogReal(r, self.n * c.denominator, self.q * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / as_fraction(c))

    # -- decisions ---------------------------------------------------------
    def is_rational(self) -> bool:
        return self.r == 1

    def sign(self) -> int:
        """Exact sign of the value."""
        b = self.n * self.q
        if self.r == 1:
            return (b > 0) - (b < 0)
        if b == 0:
            return 1 if self.r > 1 else -1
        lr = _flog(self.r)
        fb = float(b)
        v = lr + fb
        if abs(v) > _FLOAT_MARGIN * (1.0 + abs(lr) + abs(fb)):
            return 1 if v > 0 else -1
        prec = 128
        while prec <= _MAX_PREC:
            ctx = iv_context(prec)
            val = (
                ctx.log(ctx.mpf(self.r.numerator))
                - ctx.log(ctx.mpf(self.r.denominator))
                + ctx.mpf(b.numerator) / ctx.mpf(b.denominator)
            )
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
            prec *= 2
        raise ArithmeticError("sign refinement did not terminate")

    def _cmp(self, other) -> int:
        return (self - LogReal.coerce(other)).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        if isinstance(other, float):
            return float(self) < other
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, float):
            return float(self) <= other
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, float):
            return float(self) > other
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, float):
            return float(self) >= other
        return self._cmp(other) >= 0

    __hash__ = None

    # -- evaluation --------------------------------------------------------
    def __float__(self):
        if self._f is None:
            lr = 0.0 if self.r == 1 else _flog(self.r) / self.n
            self._f = lr + float(self.q)
        return self._f

    def interval(self, prec: int = 128):
        """Enclosing mpmath interval at ``prec`` bits."""
        ctx = iv_context(prec)
        q = ctx.mpf(self.q.numerator) / ctx.mpf(self.q.denominator)
        if self.r == 1:
            return q
        lg = ctx.log(ctx.mpf(self.r.numerator)) - ctx.log(ctx.mpf(self.r.denominator))
        return lg / self.n + q

    def width(self, prec: int = 128) -> float:
        iv = self.interval(prec)
        return float(iv.b - iv.a)

    def to_string(self, digits: int = 30) -> str:
        import mpmath

        iv = self.interval(max(64, int(digits * 3.33) + 32))
        return mpmath.nstr(mpmath.mpf(iv.mid), digits)

    def __repr__(self):
        if self.r == 1:
            return f"LogReal({format_rational(self.q)})"
        head = f"log({format_rational(self.r)})"
        if self.n != 1:
            head += f"/{self.n}"
        if self.q:
            head += f" + {format_rational(self.q)}"
        return f"LogReal[{head} ~ {float(self):.12g}]"


def log_of(x) -> LogReal:
    """``log(x)`` for a positive rational ``x``."""
    return LogReal(as_fraction(x))


def format_logreal(x: LogReal) -> str:
    """Lossless text form: ``"q"``, ``"log(r)"``, ``"log(r)/n"`` or ``"log(r)/n+q"``."""
    if x.r == 1:
        return format_rational(x.q)
    head = f"log({format_rational(x.r)})"
    if x.n != 1:
        head += f"/{x.n}"
    if x.q:
        head += ("+" if x.q > 0 else "") + format_rational(x.q)
    return head


def parse_logreal(text: str) -> LogReal:
    """Inverse of ``format_logreal``."""
    s = text.strip()
    if not s.startswith("log("):
        return LogReal.rational(parse_rational(s))
    close = s.index(")")
    r = parse_rational(s[4:close])
    rest = s[close + 1:]
    n = 1
    if rest.startswith("/"):
        end = 1
        while end < len(rest) and rest[end].isdigit():
            end += 1
        n = int(rest[1:end])
        rest = rest[end:]
    q = parse_rational(rest) if rest else Fraction(0)
    return LogReal(r, n, q)
