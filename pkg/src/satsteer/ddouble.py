"""Double-double arithmetic.

A :class:`DD` value is an unevaluated sum ``hi + lo`` of two doubles with
``|lo| <= ulp(hi)/2``, giving roughly 32 significant decimal digits. Only the
operations needed for the frequency-shift evaluation are provided.
"""

import math

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``s + e == a + b`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """As :func:`two_sum`, assuming ``|a| >= |b|``."""
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``p + e == a * b`` exactly."""
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


class DD:
    """Double-double number.

    Supports ``+``, ``-``, ``*``, ``/`` against other :class:`DD` values and
    plain floats/ints, plus :meth:`sqrt`. Instances are immutable.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=0.0):
        hi, lo = two_sum(float(hi), float(lo)) if lo else (float(hi), 0.0)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)

    def __setattr__(self, name, value):
        raise AttributeError("DD is immutable")

    @staticmethod
    def _coerce(x):
        return x if isinstance(x, DD) else DD(x)

    def __float__(self):
        return self.hi + self.lo

    def __repr__(self):
        return f"DD({self.hi!r}, {self.lo!r})"

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __add__(self, other):
        other = DD._coerce(other)
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e += t
        s, e = quick_two_sum(s, e)
        e += f
        return DD(*quick_two_sum(s, e))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-DD._coerce(other))

    def __rsub__(self, other):
        return DD._coerce(other) + (-self)

    def __mul__(self, other):
        other = DD._coerce(other)
        p, e = two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        return DD(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = DD._coerce(other)
        if other.hi == 0.0:
            raise ZeroDivisionError("DD division by zero")
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        return DD(*quick_two_sum(q1, q2)) + q3

    def __rtruediv__(self, other):
        return DD._coerce(other) / self

    def sqrt(self):
        if self.hi < 0.0:
            raise ValueError("square root of a negative DD value")
        if self.hi == 0.0:
            return DD(0.0)
        q = math.sqrt(self.hi)
        p, e = two_prod(q, q)
        r = self - DD(p, e)
        return DD(*quick_two_sum(q, r.hi / (2.0 * q)))

    def __lt__(self, other):
        d = self - DD._coerce(other)
        return d.hi < 0.0

    def __gt__(self, other):
        d = self - DD._coerce(other)
        return d.hi > 0.0

    def __le__(self, other):
        return not self > other

    def __ge__(self, other):
        return not self < other

    def __eq__(self, other):
        if not isinstance(other, (DD, int, float)):
            return NotImplemented
        other = DD._coerce(other)
        return self.hi == other.hi and self.lo == other.lo

    def __hash__(self):
        return hash((self.hi, self.lo))
