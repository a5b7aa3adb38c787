"""Exact scalars and linear algebra.

Scalars: ``Fraction`` for the rationals, :class:`CyclotomicElem` for
Q(zeta_n) in the power basis, :class:`QuaternionElem` for rational quaternion
algebras (a, b).  Dense matrices are lists of lists of ``Fraction``; the heavy
lifting elsewhere in the package goes through :class:`EchelonBasis`, an
incrementally grown sparse echelon form kept over the integers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ConductorMismatch, DivisionByZero, NotSquare

Rational = Fraction
SparseVec = dict  # column index -> Fraction (or int)


# ---------------------------------------------------------------------------
# rationals


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def as_int(value) -> int:
    """Read an integer from JSON data; floats and booleans are rejected, not truncated."""
    if isinstance(value, bool):
        raise TypeError("booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    raise TypeError(f"cannot read {value!r} as an integer")


def format_rational(value) -> str:
    q = as_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# cyclotomic fields


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    if n < 1:
        raise ValueError("conductor must be positive")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(out) - 1, -1, -1):
        coeff = num[shift + len(den) - 1]
        if coeff % lead:
            raise ArithmeticError("inexact integer polynomial division")
        q = coeff // lead
        out[shift] = q
        if q:
            for i, d in enumerate(den):
                num[shift + i] -= q * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse power-basis coordinates of zeta_n^k for 0 <= k < n."""
    phi = totient(n)
    cyc = cyclotomic_polynomial(n)
    rows = []
    current = [0] * phi
    current[0] = 1
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(current) if c))
        # multiply by zeta and reduce with zeta^phi = -sum cyc[i] zeta^i
        top = current[-1]
        current = [0] + current[:-1]
        if top:
            for i in range(phi):
                current[i] -= top * cyc[i]
    return tuple(rows)


class CyclotomicElem:
    """An element of Q(zeta_n) with a fixed conductor n."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = ()):
        coeffs = tuple(as_fraction(c) for c in coeffs)
        phi = totient(conductor)
        if len(coeffs) < phi:
            coeffs = coeffs + (Fraction(0),) * (phi - len(coeffs))
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coordinates for conductor {conductor}")
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def rational(cls, conductor: int, value) -> "CyclotomicElem":
        return cls(conductor, [as_fraction(value)])

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "CyclotomicElem":
        vec = [0] * totient(conductor)
        for i, c in _power_table(conductor)[power % conductor]:
            vec[i] = c
        return cls(conductor, vec)

    @classmethod
    def zero(cls, conductor: int) -> "CyclotomicElem":
        return cls(conductor)

    @classmethod
    def one(cls, conductor: int) -> "CyclotomicElem":
        return cls.rational(conductor, 1)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicElem":
        if isinstance(other, CyclotomicElem):
            if other.conductor != self.conductor:
                raise ConductorMismatch(
                    f"conductors {self.conductor} and {other.conductor} differ; lift first"
                )
            return other
        return CyclotomicElem.rational(self.conductor, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicElem(self.conductor, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElem(self.conductor, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CyclotomicElem):
            q = as_fraction(other)
            return CyclotomicElem(self.conductor, [a * q for a in self.coeffs])
        other = self._coerce(other)
        n = self.conductor
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                ab = a * b
                for k, c in table[(i + j) % n]:
                    out[k] += ab * c
        return CyclotomicElem(n, out)

    __rmul__ = __mul__

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x on power-basis coordinates (columns are images)."""
        phi = len(self.coeffs)
        cols = [(self * CyclotomicElem.zeta(self.conductor, k)).coeffs for k in range(phi)]
        return [[cols[c][r] for c in range(phi)] for r in range(phi)]

    def inv(self) -> "CyclotomicElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        sol = mat_solve(self.mult_matrix(), [Fraction(1)] + [Fraction(0)] * (len(self.coeffs) - 1))
        if sol is None:  # pragma: no cover - a field has no zero divisors
            raise DivisionByZero("element is not invertible")
        return CyclotomicElem(self.conductor, sol)

    def __truediv__(self, other):
        if isinstance(other, CyclotomicElem):
            return self * other.inv()
        q = as_fraction(other)
        if q == 0:
            raise DivisionByZero("division by zero")
        return self * (1 / q)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CyclotomicElem.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> "CyclotomicElem":
        """Apply the automorphism zeta -> zeta^k (k a unit mod the conductor)."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        out = CyclotomicElem.zero(n)
        for i, a in enumerate(self.coeffs):
            if a:
                out = out + CyclotomicElem.zeta(n, i * k) * a
        return out

    def conjugate(self) -> "CyclotomicElem":
        return self.galois(-1)

    def trace(self) -> Fraction:
        """Absolute trace Q(zeta_n) -> Q."""
        total = Fraction(0)
        mat = self.mult_matrix()
        for i in range(len(mat)):
            total += mat[i][i]
        return total

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CyclotomicElem):
            return self.conductor == other.conductor and self.coeffs == other.coeffs
        try:
            q = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.is_rational() and self.coeffs[0] == q

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.coeffs)) if not self.is_rational() else hash(self.coeffs[0])
        return self._hash

    def __repr__(self):
        return f"CyclotomicElem({self.conductor}, {self})"

    def __str__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            base = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not base:
                terms.append(format_rational(a))
            elif a == 1:
                terms.append(base)
            elif a == -1:
                terms.append("-" + base)
            else:
                terms.append(f"{format_rational(a)}*{base}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "CyclotomicElem":
        return cls(as_int(data["conductor"]), [as_fraction(c) for c in data["coeffs"]])


def cyc_arith(a: CyclotomicElem, b: CyclotomicElem | None, op: str) -> CyclotomicElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown operation {op!r}")


def conductor_lift(a: CyclotomicElem, target: int) -> CyclotomicElem:
    """Embed Q(zeta_n) into Q(zeta_m) for n | m via zeta_n -> zeta_m^(m/n)."""
    n = a.conductor
    if target % n:
        raise ConductorMismatch(f"{n} does not divide {target}")
    step = target // n
    out = CyclotomicElem.zero(target)
    for i, c in enumerate(a.coeffs):
        if c:
            out = out + CyclotomicElem.zeta(target, i * step) * c
    return out


def common_conductor(*elems: CyclotomicElem) -> int:
    m = 1
    for e in elems:
        m = lcm(m, e.conductor)
    return m


def conjugate(a):
    if isinstance(a, CyclotomicElem):
        return a.conjugate()
    return as_fraction(a)


# ---------------------------------------------------------------------------
# quaternion algebras


class QuaternionElem:
    """x0 + x1 i + x2 j + x3 k in the algebra with i^2 = a, j^2 = b, ij = -ji = k."""

    __slots__ = ("a", "b", "coords")

    def __init__(self, a, b, coords: Sequence = (0, 0, 0, 0)):
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        coords = tuple(as_fraction(c) for c in coords)
        if len(coords) != 4:
            raise ValueError("a quaternion has four coordinates")
        self.coords = coords

    @classmethod
    def basis(cls, a, b, index: int) -> "QuaternionElem":
        vec = [0, 0, 0, 0]
        vec[index] = 1
        return cls(a, b, vec)

    def _check(self, other: "QuaternionElem"):
        if (self.a, self.b) != (other.a, other.b):
            raise ValueError("quaternions from different algebras")

    def __add__(self, other):
        self._check(other)
        return QuaternionElem(self.a, self.b, [x + y for x, y in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return QuaternionElem(self.a, self.b, [x - y for x, y in zip(self.coords, other.coords)])

    def __neg__(self):
        return QuaternionElem(self.a, self.b, [-x for x in self.coords])

    def __mul__(self, other):
        if not isinstance(other, QuaternionElem):
            q = as_fraction(other)
            return QuaternionElem(self.a, self.b, [x * q for x in self.coords])
        self._check(other)
        a, b = self.a, self.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return QuaternionElem(
            a,
            b,
            [
                x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
            ],
        )

    __rmul__ = lambda self, other: self * other  # scalars are central

    def conj(self) -> "QuaternionElem":
        x0, x1, x2, x3 = self.coords
        return QuaternionElem(self.a, self.b, [x0, -x1, -x2, -x3])

    def norm(self) -> Fraction:
        x0, x1, x2, x3 = self.coords
        a, b = self.a, self.b
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inv(self) -> "QuaternionElem":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("quaternion of norm zero is not invertible")
        return self.conj() * (1 / n)

    def __eq__(self, other):
        return (
            isinstance(other, QuaternionElem)
            and (self.a, self.b, self.coords) == (other.a, other.b, other.coords)
        )

    def __hash__(self):
        return hash((self.a, self.b, self.coords))

    def __repr__(self):
        return f"QuaternionElem({self.a}, {self.b}, {list(map(str, self.coords))})"


def _squarefree_integer(q: Fraction) -> int:
    """Integer in the same square class as the nonzero rational q."""
    num = q.numerator * q.denominator  # multiply by den^2
    sign = -1 if num < 0 else 1
    num = abs(num)
    out, p = 1, 2
    while p * p <= num:
        exp = 0
        while num % p == 0:
            num //= p
            exp += 1
        if exp % 2:
            out *= p
        p += 1
    out *= num
    return sign * out


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol (a, b)_p of nonzero rationals; p a prime or the string "inf"."""
    a = _squarefree_integer(as_fraction(a))
    b = _squarefree_integer(as_fraction(b))
    if p == "inf":
        return -1 if a < 0 and b < 0 else 1

    def split(x):
        alpha = 0
        while x % p == 0:
            x //= p
            alpha += 1
        return alpha, x

    alpha, u = split(a)
    beta, v = split(b)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    eps_p = ((p - 1) // 2) % 2
    result = (-1) ** ((alpha * beta * eps_p) % 2)
    if beta % 2:
        result *= _legendre(u, p)
    if alpha % 2:
        result *= _legendre(v, p)
    return result


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def quaternion_is_division(a, b) -> bool:
    """True when (a, b)_Q is a division algebra, i.e. some local Hilbert symbol is -1."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ValueError("quaternion parameters must be nonzero")
    places: list = ["inf", 2]
    for x in (_squarefree_integer(a), _squarefree_integer(b)):
        places.extend(p for p in _prime_factors(x) if p != 2)
    return any(hilbert_symbol(a, b, p) == -1 for p in sorted(set(places), key=str))


# ---------------------------------------------------------------------------
# polynomials


class PolyQ:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyQ([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ([other])
        return self + (-other)

    def __mul__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ([other])
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    def __divmod__(self, other: "PolyQ"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = other.coeffs[-1]
        for shift in range(len(quot) - 1, -1, -1):
            c = rem[shift + len(other.coeffs) - 1] / lead
            quot[shift] = c
            if c:
                for i, d in enumerate(other.coeffs):
                    rem[shift + i] -= c * d
        return PolyQ(quot), PolyQ(rem)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def cyclotomic_factors(self) -> dict[int, int] | None:
        """Multiplicities {k: e} with self = prod Phi_k^e, or None if not such a product."""
        if not self.is_monic():
            return None
        rest = self
        found: dict[int, int] = {}
        bound = 2 * max(1, rest.degree) ** 2 + 2
        for k in range(1, bound + 1):
            if rest.degree <= 0:
                break
            if totient(k) > rest.degree:
                continue
            phi_k = PolyQ(cyclotomic_polynomial(k))
            while True:
                q, r = divmod(rest, phi_k)
                if not r.is_zero():
                    break
                rest = q
                found[k] = found.get(k, 0) + 1
        return found if rest == PolyQ([1]) else None

    def is_irreducible(self) -> bool:
        """Irreducibility over Q by Kronecker's interpolation method (small degrees only)."""
        d = self.degree
        if d < 1:
            return False
        if d == 1:
            return True
        if d > 8:
            raise NotImplementedError("irreducibility test limited to degree <= 8")
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        f = PolyQ([c * den for c in self.coeffs])
        if f.coeffs[0] == 0:
            return False
        for k in range(1, d // 2 + 1):
            if _has_integer_factor(f, k):
                return False
        return True

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self):
        return f"PolyQ({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}{mono}"
            else:
                body = f"({format_rational(mag)}){mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _has_integer_factor(f: PolyQ, k: int) -> bool:
    """Does the integer polynomial f have a factor of exact degree k?"""
    from itertools import product

    points: list[int] = []
    candidate = 0
    while len(points) < k + 1:
        if f(candidate) != 0:
            points.append(candidate)
        candidate = -candidate if candidate > 0 else -candidate + 1
    value_choices = []
    for i, p in enumerate(points):
        divs = _divisors(int(f(p)))
        value_choices.append(divs if i == 0 else divs + [-x for x in divs])
    for values in product(*value_choices):
        g = _lagrange(points, values)
        if g.degree != k or not g.is_integral():
            continue
        if divmod(f, g)[1].is_zero():
            return True
    return False


def _lagrange(xs: Sequence[int], ys: Sequence[int]) -> PolyQ:
    total = PolyQ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = PolyQ([yi])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * PolyQ([Fraction(-xj, xi - xj), Fraction(1, xi - xj)])
        total = total + term
    return total


# ---------------------------------------------------------------------------
# sparse fraction-free echelon forms


def _int_row(vec: Mapping) -> dict[int, int]:
    """Scale a sparse rational vector to a primitive integer vector (same span)."""
    items = [(k, as_fraction(v)) for k, v in vec.items() if v]
    if not items:
        return {}
    den = 1
    for _, v in items:
        den = lcm(den, v.denominator)
    row = {k: v.numerator * (den // v.denominator) for k, v in items}
    return _primitive(row)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class EchelonBasis:
    """Reduced echelon basis of a subspace of Q^n, grown one vector at a time.

    Rows are primitive integer vectors; each row is nonzero at its pivot and
    zero at every other pivot.  The pivot of a new row is its smallest
    column index, so callers steer pivot choice through the column order.
    """

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self.rows: dict[int, dict[int, int]] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def copy(self) -> "EchelonBasis":
        out = EchelonBasis()
        out.rows = {p: dict(r) for p, r in self.rows.items()}
        return out

    def _reduce_int(self, row: dict[int, int]) -> dict[int, int]:
        rows = self.rows
        hits = [p for p in row if p in rows]
        if not hits:
            return row
        row = dict(row)
        for p in hits:
            c = row.get(p)
            if not c:
                continue
            prow = rows[p]
            pc = prow[p]
            g = gcd(pc, c)
            mul_row, mul_p = pc // g, c // g
            if mul_row != 1:
                for k in row:
                    row[k] *= mul_row
            for k, v in prow.items():
                nv = row.get(k, 0) - mul_p * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return _primitive(row) if row else row

    def reduce(self, vec: Mapping) -> dict[int, int]:
        """Integer multiple of the residue of vec modulo the span (empty if in span)."""
        return self._reduce_int(_int_row(vec))

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        self._insert(row)
        return True

    def _insert(self, row: dict[int, int]) -> int:
        piv = min(row)
        if row[piv] < 0:
            row = {k: -v for k, v in row.items()}
        pc = row[piv]
        for p, other in self.rows.items():
            c = other.get(piv)
            if not c:
                continue
            g = gcd(pc, c)
            mo, mr = pc // g, c // g
            new = {}
            for k, v in other.items():
                new[k] = v * mo
            for k, v in row.items():
                nv = new.get(k, 0) - mr * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            new = _primitive(new)
            if new[p] < 0:
                new = {k: -v for k, v in new.items()}
            self.rows[p] = new
        self.rows[piv] = row
        return piv

    def basis(self) -> list[dict[int, Fraction]]:
        """Basis vectors normalised to 1 at their pivot, sorted by pivot."""
        out = []
        for p in sorted(self.rows):
            r = self.rows[p]
            pc = r[p]
            out.append({k: Fraction(v, pc) for k, v in r.items()})
        return out

    def coords(self, vec: Mapping) -> dict[int, Fraction] | None:
        """Coordinates of vec against :meth:`basis` keyed by pivot, or None if outside."""
        if not self.contains(vec):
            return None
        return {p: as_fraction(vec[p]) for p in self.rows if vec.get(p)}

    def residue(self, vec: Mapping) -> dict[int, Fraction]:
        """vec minus its component along the basis; supported off the pivots."""
        out = {k: as_fraction(v) for k, v in vec.items() if v}
        for p in [p for p in out if p in self.rows]:
            c = out.get(p)
            if not c:
                continue
            r = self.rows[p]
            scale = c / r[p]
            for k, v in r.items():
                nv = out.get(k, 0) - scale * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out


def kernel_of_map(images: Sequence[Mapping]) -> list[dict[int, Fraction]]:
    """Basis of {c : sum_i c_i images[i] = 0} as sparse coefficient vectors."""
    offset = 0
    for im in images:
        if im:
            offset = max(offset, max(im) + 1)
    ech = EchelonBasis()
    kernel = []
    for i, im in enumerate(images):
        vec = dict(im)
        vec[offset + i] = 1
        row = ech.reduce(vec)
        if min(row) < offset:
            ech._insert(row)
        else:
            kernel.append({k - offset: Fraction(v) for k, v in row.items()})
    return [_normalise_first(v) for v in kernel]


def _normalise_first(vec: dict[int, Fraction]) -> dict[int, Fraction]:
    lead = vec[max(vec)]
    return {k: v / lead for k, v in vec.items()}


def span_equal(a: EchelonBasis, b: EchelonBasis) -> bool:
    if a.dim != b.dim:
        return False
    return all(a.contains(v) for v in b.basis())


# ---------------------------------------------------------------------------
# dense matrices


Matrix = list  # list of rows of Fractions


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [[as_fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(a: Matrix, q) -> Matrix:
    q = as_fraction(q)
    return [[x * q for x in r] for r in a]


def mat_vec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def _rows_as_sparse(m: Matrix) -> list[dict[int, Fraction]]:
    return [{j: as_fraction(x) for j, x in enumerate(row) if x} for row in m]


def bareiss_rank_det(m: Matrix) -> tuple[int, Fraction]:
    """Rank and (for square input) determinant via fraction-free Bareiss elimination."""
    rows = [list(r) for r in m]
    if not rows or not rows[0]:
        return 0, Fraction(1)
    # clear denominators row by row; track the scale for the determinant
    scale = Fraction(1)
    work = []
    for r in rows:
        den = 1
        for x in r:
            den = lcm(den, as_fraction(x).denominator)
        scale *= den
        work.append([int(as_fraction(x) * den) for x in r])
    n_rows, n_cols = len(work), len(work[0])
    prev = 1
    rank = 0
    sign = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((i for i in range(rank, n_rows) if work[i][col]), None)
        if pivot is None:
            continue
        if pivot != rank:
            work[rank], work[pivot] = work[pivot], work[rank]
            sign = -sign
        pv = work[rank][col]
        for i in range(rank + 1, n_rows):
            wi = work[i]
            factor = wi[col]
            for j in range(col + 1, n_cols):
                wi[j] = (pv * wi[j] - factor * work[rank][j]) // prev
            wi[col] = 0
        prev = pv
        rank += 1
    det = Fraction(0)
    if n_rows == n_cols and rank == n_rows:
        det = Fraction(sign * work[-1][-1]) / scale
    return rank, det


def mat_rank(m: Matrix) -> int:
    return bareiss_rank_det(m)[0]


def mat_det(m: Matrix) -> Fraction:
    if m and len(m) != len(m[0]):
        raise NotSquare("determinant of a non-square matrix")
    if not m:
        return Fraction(1)
    return bareiss_rank_det(m)[1]


def mat_kernel(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel {x : m x = 0}."""
    n_cols = len(m[0]) if m else 0
    ech = EchelonBasis(_rows_as_sparse(m))
    pivots = set(ech.rows)
    out = []
    for free in range(n_cols):
        if free in pivots:
            continue
        x = [Fraction(0)] * n_cols
        x[free] = Fraction(1)
        for p, row in ech.rows.items():
            c = row.get(free)
            if c:
                x[p] = Fraction(-c, row[p])
        out.append(x)
    return out


def mat_solve(m: Matrix, rhs: Sequence) -> list[Fraction] | None:
    """One solution of m x = rhs, or None when the system is inconsistent."""
    n_cols = len(m[0]) if m else 0
    aug = [dict(row) for row in _rows_as_sparse(m)]
    for row, b in zip(aug, rhs):
        if b:
            row[n_cols] = as_fraction(b)
    ech = EchelonBasis(aug)
    if n_cols in ech.rows:
        return None
    x = [Fraction(0)] * n_cols
    for p, row in ech.rows.items():
        c = row.get(n_cols)
        if c:
            x[p] = Fraction(c, row[p])
    return x


def mat_inv(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSquare("inverse of a non-square matrix")
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        sol = mat_solve(m, e)
        if sol is None:
            raise DivisionByZero("matrix is singular")
        cols.append(sol)
    return transpose(cols)


def char_poly(m: Matrix) -> PolyQ:
    """Characteristic polynomial det(tI - m) by the Faddeev-LeVerrier recursion."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSquare("characteristic polynomial of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    prod = zeros(n, n)
    for k in range(1, n + 1):
        prod = mat_mul(m, prod)
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        am = mat_mul(m, prod)
        trace = sum((am[i][i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return PolyQ(coeffs)


def is_positive_semidefinite(m: Matrix) -> bool:
    """Exact test for a symmetric rational matrix by symmetric elimination."""
    work = [[as_fraction(x) for x in row] for row in m]
    n = len(work)
    if any(work[i][j] != work[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not symmetric")
    while work:
        diag = [work[i][i] for i in range(len(work))]
        if any(d < 0 for d in diag):
            return False
        pivot = next((i for i, d in enumerate(diag) if d > 0), None)
        if pivot is None:
            return all(x == 0 for row in work for x in row)
        p = work[pivot][pivot]
        rest = [i for i in range(len(work)) if i != pivot]
        work = [[work[i][j] - work[i][pivot] * work[pivot][j] / p for j in rest] for i in rest]
    return True


def mat_pow(m: Matrix, k: int) -> Matrix:
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def matrix_to_json(m: Matrix) -> list[list]:
    return [[_json_number(x) for x in row] for row in m]


def _json_number(x):
    q = as_fraction(x)
    return q.numerator if q.denominator == 1 else format_rational(q)
