"""Exact arithmetic in the cyclotomic field Q(zeta_n), plus q-combinatorics.

The scalar field is Q[x]/(Phi_n(x)) with x mapped to a primitive n-th root
of unity q.  Everything is exact: coefficients are arbitrary-precision
rationals and zero tests are equality of canonical coefficient vectors.
Quantum integers are computed as division-free Laurent sums and both
binomial families by their Pascal-type recursions, so nothing ever divides
by a vanishing q-factorial.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

Rat = Fraction


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Exact division with remainder for polynomials (ascending coefficients)."""
    num = list(num)
    out = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    inv_lead = 1 / den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1] * inv_lead
        if c:
            out[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n (ascending), by exact division of x^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    f = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            f, rem = _poly_divmod(f, list(cyclotomic_polynomial(d)))
            assert rem == [0], "cyclotomic division must be exact"
    return tuple(f)


class CycNumber:
    """An element of Q(zeta_n), stored as its canonical residue mod Phi_n.

    Instances are immutable; ``coeffs`` always has length deg(Phi_n).
    """

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: "CycField", coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _lift(self, other):
        if isinstance(other, CycNumber):
            if other.field is not self.field:
                raise ValueError("mixed cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CycNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CycNumber(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return CycNumber(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.field.zero
            return CycNumber(self.field, tuple(a * other for a in self.coeffs))
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "CycNumber":
        return self.field._inverse(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.n, self.coeffs))
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number: %s" % self)
        return self.coeffs[0]

    def laurent_terms(self) -> list[tuple[int, Fraction]]:
        """Canonical rendering support: (exponent, coefficient) pairs.

        The representative over exponents 0..n-1 is the power-basis lift
        shifted along the all-ones kernel vector (sum of all q^k is 0) so
        that the L1 norm of the coefficients is minimal; ties prefer the
        smaller shift.  This maps q^-1 at n=5 to q^4 rather than to the
        dense power-basis form.
        """
        n = self.field.n
        vals = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        best = None
        for t in sorted({-v for v in vals}):
            norm = sum(abs(v + t) for v in vals)
            key = (norm, abs(t), t)
            if best is None or key < best[0]:
                best = (key, t)
        t = best[1]
        return [(k, v + t) for k, v in enumerate(vals) if v + t]

    def __str__(self):
        terms = self.laurent_terms()
        if not terms:
            return "0"
        parts = []
        for k, c in terms:
            mon = "1" if k == 0 else ("q" if k == 1 else "q^%d" % k)
            if k == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mon
            else:
                body = "%s*%s" % (abs(c), mon)
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __repr__(self):
        return "CycNumber(n=%d, %s)" % (self.field.n, self)


class CycField:
    """The field Q(zeta_n) with cached reduction data and q-power table."""

    _instances: dict[int, "CycField"] = {}

    def __new__(cls, n: int):
        inst = cls._instances.get(n)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(n)
            cls._instances[n] = inst
        return inst

    def _init(self, n: int):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        phi = cyclotomic_polynomial(n)
        self.phi = phi
        d = len(phi) - 1
        self.degree = d
        # reduction[k] = coefficients of x^(d+k) mod Phi_n, for k in 0..d-2
        red = []
        prev = [-c for c in phi[:-1]]
        red.append(tuple(prev))
        for _ in range(d - 2):
            nxt = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            if top:
                for i in range(d):
                    nxt[i] -= top * phi[i]
            red.append(tuple(nxt))
            prev = nxt
        self._reduction = red
        self.zero = CycNumber(self, (Fraction(0),) * d)
        self.one = CycNumber(self, (Fraction(1),) + (Fraction(0),) * (d - 1))
        if d > 1:
            qval = CycNumber(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (d - 2))
        else:
            qval = self.from_rational(-phi[0])
        pows = [self.one]
        for k in range(1, n):
            if k < d:
                coeffs = [Fraction(0)] * d
                coeffs[k] = Fraction(1)
                pows.append(CycNumber(self, tuple(coeffs)))
            else:
                pows.append(self._mul(pows[-1], qval))
        self._q_powers = pows
        self._binom_sym: dict[tuple[int, int, int], CycNumber] = {}
        self._binom_gauss: dict[tuple[int, int, int], CycNumber] = {}

    def from_rational(self, a) -> CycNumber:
        d = self.degree
        return CycNumber(self, (Fraction(a),) + (Fraction(0),) * (d - 1))

    def _mul(self, a: CycNumber, b: CycNumber) -> CycNumber:
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = self._reduction[k - d]
                for i in range(d):
                    if row[i]:
                        out[i] += c * row[i]
        return CycNumber(self, tuple(out))

    def _inverse(self, a: CycNumber) -> CycNumber:
        if not a:
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.n)
        # extended Euclid in Q[x]; Phi_n is irreducible so gcd(a, Phi_n) = 1
        r0, r1 = list(self.phi), list(a.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            quot, rem = _poly_divmod(r0, r1)
            t2 = list(t0) + [Fraction(0)] * max(0, len(quot) + len(t1) - 1 - len(t0))
            for i, qc in enumerate(quot):
                if qc:
                    for j, tc in enumerate(t1):
                        t2[i + j] -= qc * tc
            while len(t2) > 1 and t2[-1] == 0:
                t2.pop()
            r0, r1, t0, t1 = r1, rem, t1, t2
        c = r1[0]
        assert c != 0, "gcd with the irreducible Phi_n must be a nonzero constant"
        inv = [x / c for x in t1]
        if len(inv) > self.degree:
            _, inv = _poly_divmod(inv, list(self.phi))
        inv += [Fraction(0)] * (self.degree - len(inv))
        return CycNumber(self, tuple(inv[: self.degree]))

    # ---- q-combinatorics -------------------------------------------------

    def q_power(self, k: int) -> CycNumber:
        """q^k in canonical form, exponent reduced mod n."""
        return self._q_powers[k % self.n]

    def quantum_integer(self, m: int, e: int = 1) -> CycNumber:
        """[m] at x = q^e as the Laurent sum x^(m-1) + x^(m-3) + ... + x^(1-m)."""
        if m < 0:
            raise ValueError("m must be nonnegative")
        if e == 0:
            raise ValueError("e must be nonzero")
        out = self.zero
        for j in range(m):
            out = out + self.q_power(e * (m - 1 - 2 * j))
        return out

    def quantum_binomial_sym(self, m: int, s: int, e: int = 1) -> CycNumber:
        """Symmetric Gaussian binomial [m s] at x = q^e, by Pascal recursion."""
        if not 0 <= s <= m:
            raise ValueError("need 0 <= s <= m")
        if e == 0:
            raise ValueError("e must be nonzero")
        key = (m, s, e)
        got = self._binom_sym.get(key)
        if got is not None:
            return got
        if s == 0 or s == m:
            val = self.one
        else:
            # [m s] = x^-s [m-1 s] + x^(m-s) [m-1 s-1]
            val = self.q_power(-e * s) * self.quantum_binomial_sym(m - 1, s, e) + self.q_power(
                e * (m - s)
            ) * self.quantum_binomial_sym(m - 1, s - 1, e)
        self._binom_sym[key] = val
        return val

    def gauss_binomial(self, m: int, u: int, e: int) -> CycNumber:
        """One-sided Gaussian binomial (m u) at x = q^e.

        Uses the recursion (m+1 u) = (m u) + x^(m-u+1) (m u-1).
        """
        if not 0 <= u <= m:
            raise ValueError("need 0 <= u <= m")
        key = (m, u, e)
        got = self._binom_gauss.get(key)
        if got is not None:
            return got
        if u == 0 or u == m:
            val = self.one
        else:
            val = self.gauss_binomial(m - 1, u, e) + self.q_power(
                e * (m - u)
            ) * self.gauss_binomial(m - 1, u - 1, e)
        self._binom_gauss[key] = val
        return val

    def character_sum(self, beta: "ResidueVector") -> CycNumber:
        """Sum of q^(alpha.beta) over all alpha in Z_n^t, by enumeration."""
        if beta.n != self.n:
            raise ValueError("residue modulus does not match the field")
        out = self.zero
        for alpha in itertools.product(range(self.n), repeat=len(beta.entries)):
            out = out + self.q_power(sum(a * b for a, b in zip(alpha, beta.entries)))
        return out

    def __repr__(self):
        return "CycField(%d)" % self.n


def ell(n: int) -> int:
    """The nilpotency order: n for odd n, n/2 for even n."""
    return n if n % 2 else n // 2


class ResidueVector:
    """A vector of t residues mod n; componentwise arithmetic wraps mod n."""

    __slots__ = ("entries", "n")

    def __init__(self, entries, n: int):
        self.entries = tuple(e % n for e in entries)
        self.n = n

    def _check(self, other):
        if not isinstance(other, ResidueVector) or other.n != self.n or len(other.entries) != len(self.entries):
            raise ValueError("incompatible residue vectors")

    def __add__(self, other):
        self._check(other)
        return ResidueVector(tuple(a + b for a, b in zip(self.entries, other.entries)), self.n)

    def __sub__(self, other):
        self._check(other)
        return ResidueVector(tuple(a - b for a, b in zip(self.entries, other.entries)), self.n)

    def __neg__(self):
        return ResidueVector(tuple(-a for a in self.entries), self.n)

    def __mul__(self, k: int):
        return ResidueVector(tuple(k * a for a in self.entries), self.n)

    __rmul__ = __mul__

    def dot(self, other) -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.entries, other.entries))

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueVector)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __lt__(self, other):
        self._check(other)
        return self.entries < other.entries

    def __hash__(self):
        return hash((self.entries, self.n))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return "(%s mod %d)" % (",".join(map(str, self.entries)), self.n)
