"""Exact integer Laurent polynomials in the indeterminate v.

Every scalar in this package lives in Z[v, v^-1].  The ring Z[u, u^-1] with
u = v^2 is embedded as the polynomials with even support; callers that need
u-membership test it with :meth:`LaurentPoly.is_even_support`.

Coefficients are arbitrary-precision Python integers, storage is dense with
an exponent offset (the polynomials handled here are short and dense), and
values are immutable, so instances can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotDivisible

__all__ = ["LaurentPoly", "ZERO", "ONE", "V", "U", "v_pow", "u_pow"]


class LaurentPoly:
    """An integer Laurent polynomial ``sum(coeffs[i] * v**(min_exp+i))``.

    Stored coefficients are trimmed so the first and last are nonzero; the
    zero polynomial has an empty coefficient tuple and ``min_exp == 0``.

    >>> f = LaurentPoly((1, 0, 1), -1)        # v^-1 + v
    >>> print(f * f)
    v^-2 + 2 + v^2
    >>> print(f.bar())
    v^-1 + v
    """

    __slots__ = ("coeffs", "min_exp")

    def __init__(self, coeffs=(), min_exp=0):
        coeffs = list(coeffs)
        lo, hi = 0, len(coeffs)
        while lo < hi and coeffs[lo] == 0:
            lo += 1
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self.coeffs = ()
            self.min_exp = 0
        else:
            self.coeffs = tuple(coeffs[lo:hi])
            self.min_exp = min_exp + lo

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def max_exp(self):
        if not self.coeffs:
            return 0
        return self.min_exp + len(self.coeffs) - 1

    def coeff(self, exp):
        """Coefficient of v**exp (0 outside the stored window)."""
        i = exp - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self):
        """List of (exponent, coefficient) pairs, ascending, zeros skipped."""
        return [
            (self.min_exp + i, c) for i, c in enumerate(self.coeffs) if c
        ]

    def is_even_support(self):
        """True iff the polynomial lies in Z[u, u^-1], u = v^2."""
        return all(e % 2 == 0 for e, _ in self.terms())

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly((other,), 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.min_exp + i - lo] += c
        for i, c in enumerate(other.coeffs):
            out[other.min_exp + i - lo] += c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly([-c for c in self.coeffs], self.min_exp)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ZERO
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return LaurentPoly(out, self.min_exp + other.min_exp)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs and self.min_exp == other.min_exp

    def __hash__(self):
        return hash((self.coeffs, self.min_exp))

    # -- the operations the tables are built from -------------------------

    def bar(self):
        """Exponent reversal v -> v^-1; an involutive ring automorphism."""
        if self.is_zero:
            return self
        return LaurentPoly(tuple(reversed(self.coeffs)), -self.max_exp)

    def exact_div(self, g):
        """Return q with q*g == self, or raise :class:`NotDivisible`.

        Failure of exact division is used as a runtime theorem check, so the
        exception carries both operands.
        """
        g = self._coerce(g)
        if g is None or g.is_zero:
            raise ZeroDivisionError("division of Laurent polynomial by zero")
        if self.is_zero:
            return ZERO
        fc = list(self.coeffs)
        gc = g.coeffs
        n, m = len(fc), len(gc)
        if n < m:
            raise NotDivisible(f"({self}) is not divisible by ({g})")
        glead = gc[-1]
        q = [0] * (n - m + 1)
        for k in range(n - m, -1, -1):
            c = fc[k + m - 1]
            if c % glead:
                raise NotDivisible(f"({self}) is not divisible by ({g})")
            qk = c // glead
            q[k] = qk
            if qk:
                for j in range(m):
                    fc[k + j] -= qk * gc[j]
        if any(fc):
            raise NotDivisible(f"({self}) is not divisible by ({g})")
        return LaurentPoly(q, self.min_exp - g.min_exp)

    def positive_part(self):
        """The truncation f^+ keeping exponents >= 0 only."""
        if self.min_exp >= 0:
            return self
        return LaurentPoly(self.coeffs[-self.min_exp:], 0)

    def specialize(self, value):
        """Evaluate at v = value (a Fraction, int, or float-free rational)."""
        value = Fraction(value)
        if value == 0 and self.min_exp < 0:
            raise ZeroDivisionError("cannot specialize at v=0: negative exponents")
        total = Fraction(0)
        for e, c in self.terms():
            total += c * value ** e
        return total

    # -- serialization and printing ---------------------------------------

    def to_json_obj(self):
        """JSON encoding: v-exponent (decimal string) -> coefficient string."""
        return {str(e): str(c) for e, c in self.terms()}

    @classmethod
    def from_json_obj(cls, obj):
        terms = sorted((int(e), int(c)) for e, c in obj.items())
        out = ZERO
        for e, c in terms:
            out = out + LaurentPoly((c,), e)
        return out

    def pair_string(self):
        """Compact text encoding ``e:c;e:c`` with ascending exponents."""
        return ";".join(f"{e}:{c}" for e, c in self.terms())

    def _pretty(self, var, step=1):
        parts = []
        for e, c in self.terms():
            k = e // step
            if k == 0:
                body = str(abs(c))
            else:
                head = var if k == 1 else f"{var}^{k}"
                body = head if abs(c) == 1 else f"{abs(c)}*{head}"
            parts.append(("- " if c < 0 else "+ ") + body)
        if not parts:
            return "0"
        first = parts[0]
        first = "-" + first[2:] if first.startswith("- ") else first[2:]
        return " ".join([first] + parts[1:])

    def __str__(self):
        if not self.is_zero and self.is_even_support():
            return self._pretty("u", 2)
        return self._pretty("v", 1)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r}, {self.min_exp!r})"


def v_pow(n):
    """The monomial v**n."""
    return LaurentPoly((1,), n)


def u_pow(n):
    """The monomial u**n = v**(2n)."""
    return LaurentPoly((1,), 2 * n)


ZERO = LaurentPoly()
ONE = LaurentPoly((1,), 0)
V = v_pow(1)
U = u_pow(1)
