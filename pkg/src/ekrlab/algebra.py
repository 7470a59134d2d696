import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .errors import CompositeCharacteristic, FieldTooLarge, ThetaUndefined

_logger = logging.getLogger(__name__)

FIELD_ORDER_CAP: int = 2 ** 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_factors(n: int) -> List[int]:
    """Returns the distinct prime factors of `n` in increasing order."""
    factors = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            factors.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        factors.append(n)
    return factors


class FiniteField:
    """The finite field GF(p^f) in polynomial basis.

    Elements are handled as integer codes ``sum(c_i * p**i)`` where ``c_i`` is
    the coefficient of ``x**i``. All arithmetic methods accept scalars or
    numpy arrays of codes and broadcast like numpy ufuncs, so the group
    representations in `perm` can apply one field operation to many elements
    at once.

    Attributes:
        p (int): The characteristic.
        f (int): The extension degree.
        order (int): The number of elements ``p**f``.
        modulus (Tuple[int, ...]): Coefficients of the monic irreducible
            modulus, lowest degree first (``f + 1`` values).
        primitive (int): Code of the smallest element of multiplicative
            order ``p**f - 1``.
    """

    def __init__(self, p: int, f: int):
        if not is_prime(p):
            raise CompositeCharacteristic(f'Characteristic {p} is not a prime')
        if f < 1:
            raise ValueError(f'Unsupported extension degree {f}')
        if p ** f > FIELD_ORDER_CAP:
            raise FieldTooLarge(f'Field order {p}^{f} exceeds {FIELD_ORDER_CAP}')

        self.p = p
        self.f = f
        self.order = p ** f
        self._powers = np.array([p ** i for i in range(f)], dtype=np.int64)

        self.modulus = self._find_modulus()
        self.primitive = self._find_primitive()

        # Discrete exp/log tables of the primitive element
        self._exp = np.zeros(max(self.order - 1, 1), dtype=np.int64)
        self._log = np.zeros(self.order, dtype=np.int64)
        value = 1
        for k in range(self.order - 1):
            self._exp[k] = value
            self._log[value] = k
            value = self._poly_mul(value, self.primitive)

        _logger.debug('Created GF(%d^%d) with modulus %s', p, f, self.modulus)

    def __repr__(self):
        return f'GF({self.p}^{self.f})'

    def __eq__(self, other):
        if not isinstance(other, FiniteField):
            return NotImplemented
        return (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    # Polynomial helpers, only used while building the tables

    def _digits(self, code: int) -> List[int]:
        digits = []
        for _ in range(self.f):
            digits.append(code % self.p)
            code //= self.p
        return digits

    def _code(self, digits: Sequence[int]) -> int:
        return sum(int(d) * self.p ** i for i, d in enumerate(digits))

    def _poly_mul(self, a: int, b: int, modulus: Sequence[int] = None) -> int:
        modulus = self.modulus if modulus is None else modulus
        da = self._digits(a)
        db = self._digits(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(len(prod) - 1, self.f - 1, -1):
            c = prod[k] % self.p
            if c:
                for i, m in enumerate(modulus):
                    prod[k - self.f + i] -= c * m
        return self._code([c % self.p for c in prod[:self.f]])

    def _poly_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._poly_mul(result, a)
            a = self._poly_mul(a, a)
            k >>= 1
        return result

    @staticmethod
    def _poly_rem(num: List[int], den: List[int], p: int) -> List[int]:
        num = list(num)
        inv_lead = pow(den[-1], p - 2, p)
        for k in range(len(num) - 1, len(den) - 2, -1):
            c = num[k] * inv_lead % p
            if c:
                shift = k - len(den) + 1
                for i, d in enumerate(den):
                    num[shift + i] = (num[shift + i] - c * d) % p
        return num[:len(den) - 1]

    def _is_irreducible(self, poly: List[int]) -> bool:
        for deg in range(1, self.f // 2 + 1):
            for low in range(self.p ** deg):
                divisor = [(low // self.p ** i) % self.p for i in range(deg)] + [1]
                if not any(self._poly_rem(poly, divisor, self.p)):
                    return False
        return True

    def _find_modulus(self) -> Tuple[int, ...]:
        # Smallest integer encoding, higher degree coefficients more significant
        for low in range(self.p ** self.f):
            poly = [(low // self.p ** i) % self.p for i in range(self.f)] + [1]
            if self.f == 1 or self._is_irreducible(poly):
                return tuple(poly)
        raise AssertionError(f'No irreducible polynomial of degree {self.f}')

    def _find_primitive(self) -> int:
        n = self.order - 1
        factors = prime_factors(n)
        for code in range(1, self.order):
            if all(self._poly_pow(code, n // r) != 1 for r in factors):
                return code
        raise AssertionError('No primitive element found')

    # Vectorized arithmetic on codes

    def add(self, a, b) -> npt.NDArray[int]:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.f == 1:
            return (a + b) % self.p
        result = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._powers:
            result += ((a // pw + b // pw) % self.p) * pw
        return result

    def neg(self, a) -> npt.NDArray[int]:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.f == 1:
            return (-a) % self.p
        result = np.zeros(a.shape, dtype=np.int64)
        for pw in self._powers:
            result += ((-(a // pw)) % self.p) * pw
        return result

    def sub(self, a, b) -> npt.NDArray[int]:
        return self.add(a, self.neg(b))

    def mul(self, a, b) -> npt.NDArray[int]:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64),
                                   np.asarray(b, dtype=np.int64))
        idx = (self._log[a] + self._log[b]) % (self.order - 1)
        return np.where((a != 0) & (b != 0), self._exp[idx], 0)

    def inv(self, a) -> npt.NDArray[int]:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError('Zero has no multiplicative inverse')
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def power(self, a, k: int) -> npt.NDArray[int]:
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones(a.shape, dtype=np.int64)
        if k < 0:
            return self.power(self.inv(a), -k)
        idx = (self._log[a] * k) % (self.order - 1)
        return np.where(a != 0, self._exp[idx], 0)

    def sum(self, a, axis: int = 0) -> npt.NDArray[int]:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.f == 1:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, 0)
        result = np.zeros(a.shape[1:], dtype=np.int64)
        for item in a:
            result = self.add(result, item)
        return result

    def log(self, a) -> npt.NDArray[int]:
        """Returns discrete logarithms to the base of `primitive`."""
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError('Zero has no discrete logarithm')
        return self._log[a]

    def exp(self, k) -> npt.NDArray[int]:
        return self._exp[np.asarray(k, dtype=np.int64) % (self.order - 1)]

    def subfield(self, d: int) -> npt.NDArray[int]:
        """Returns the codes of the subfield GF(p^d), i.e. all x with x^(p^d) = x."""
        if self.f % d != 0:
            raise ValueError(f'GF({self.p}^{d}) is not a subfield of {self}')
        codes = np.arange(self.order, dtype=np.int64)
        return codes[self.power(codes, self.p ** d) == codes]

    def element(self, value: Union[int, Sequence[int]]) -> 'FieldElement':
        if isinstance(value, (int, np.integer)):
            code = int(value)
        else:
            if len(value) > self.f:
                raise ValueError(f'Too many coefficients for {self}')
            code = self._code([c % self.p for c in value])
        if not 0 <= code < self.order:
            raise ValueError(f'Code {code} out of range for {self}')
        return FieldElement(self, code)

    def zero(self) -> 'FieldElement':
        return FieldElement(self, 0)

    def one(self) -> 'FieldElement':
        return FieldElement(self, 1)


@dataclass(frozen=True)
class FieldElement:
    field: FiniteField
    value: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(self.field._digits(self.value))  # pylint: disable=protected-access

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f'Mixing elements of {self.field} and {other.field}')
            return other.value
        if isinstance(other, (int, np.integer)):
            # Integers embed through the prime field
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, code) -> 'FieldElement':
        return FieldElement(self.field, int(code))

    def __add__(self, other):
        b = self._other(other)
        return self._wrap(self.field.add(self.value, b)) if b is not NotImplemented else b

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return self._wrap(self.field.sub(self.value, b)) if b is not NotImplemented else b

    def __rsub__(self, other):
        b = self._other(other)
        return self._wrap(self.field.sub(b, self.value)) if b is not NotImplemented else b

    def __mul__(self, other):
        b = self._other(other)
        return self._wrap(self.field.mul(self.value, b)) if b is not NotImplemented else b

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.mul(self.value, self.field.inv(b)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        return self._wrap(self.field.power(self.value, k))

    def inverse(self) -> 'FieldElement':
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        """Returns the multiplicative order."""
        if self.value == 0:
            raise ZeroDivisionError('Zero has no multiplicative order')
        n = self.field.order - 1
        k = int(self.field.log(self.value))
        return n // math.gcd(n, k)


@functools.lru_cache(maxsize=None)
def field_create(p: int, f: int) -> FiniteField:
    """Returns GF(p^f) with the smallest monic irreducible modulus.

    Fields are immutable, so repeated calls share one instance.
    """
    return FiniteField(p, f)


def primitive_element(field: FiniteField) -> FieldElement:
    return FieldElement(field, field.primitive)


def theta_exponent(field: FiniteField) -> int:
    if field.p != 2 or field.f % 2 == 0:
        raise ThetaUndefined(f'Theta needs characteristic 2 and odd degree, got {field}')
    return 2 ** ((field.f + 1) // 2)


def frobenius_theta(field: FiniteField) -> Callable:
    """Returns the field automorphism x -> x^(2^((e+1)/2)) of GF(2^e), e odd.

    Applying it twice squares the argument. The returned callable accepts a
    `FieldElement` or an array of codes.
    """
    k = theta_exponent(field)

    def theta(x):
        if isinstance(x, FieldElement):
            return x ** k
        return field.power(x, k)

    return theta


@dataclass(frozen=True)
class SmallMatrix:
    """An n x n matrix over a finite field, n up to 4, entries stored as codes."""

    field: FiniteField
    n: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= 4:
            raise ValueError(f'Unsupported matrix dimension {self.n}')
        if len(self.entries) != self.n * self.n:
            raise ValueError(f'Expected {self.n * self.n} entries, got {len(self.entries)}')
        if any(not 0 <= int(e) < self.field.order for e in self.entries):
            raise ValueError(f'Matrix entries out of range for {self.field}')

    @staticmethod
    def from_rows(field: FiniteField, rows: Sequence[Sequence]) -> 'SmallMatrix':
        entries = []
        for row in rows:
            for item in row:
                entries.append(item.value if isinstance(item, FieldElement) else int(item))
        return SmallMatrix(field, len(rows), tuple(entries))

    @staticmethod
    def identity(field: FiniteField, n: int) -> 'SmallMatrix':
        return SmallMatrix(field, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @staticmethod
    def diagonal(field: FiniteField, values: Sequence) -> 'SmallMatrix':
        n = len(values)
        codes = [v.value if isinstance(v, FieldElement) else int(v) for v in values]
        return SmallMatrix(field, n,
                           tuple(codes[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def array(self) -> npt.NDArray[int]:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def __getitem__(self, ij: Tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.entries[i * self.n + j])

    def __matmul__(self, other: 'SmallMatrix') -> 'SmallMatrix':
        if other.field != self.field or other.n != self.n:
            raise ValueError('Incompatible matrices')
        prods = self.field.mul(self.array[:, :, None], other.array[None, :, :])
        return SmallMatrix(self.field, self.n,
                           tuple(int(v) for v in self.field.sum(prods, axis=1).ravel()))

    def _eliminate(self) -> Tuple[int, npt.NDArray[int]]:
        # Gauss-Jordan on [A | I], returns (det, inverse or None-like zeros)
        fld = self.field
        n = self.n
        aug = np.concatenate([self.array, np.eye(n, dtype=np.int64)], axis=1)
        det = 1
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r, col] != 0), None)
            if pivot is None:
                return 0, np.zeros((n, n), dtype=np.int64)
            if pivot != col:
                aug[[col, pivot]] = aug[[pivot, col]]
                det = int(fld.neg(det))
            piv = int(aug[col, col])
            det = int(fld.mul(det, piv))
            aug[col] = fld.mul(aug[col], fld.inv(piv))
            for r in range(n):
                if r != col and aug[r, col] != 0:
                    aug[r] = fld.sub(aug[r], fld.mul(aug[col], aug[r, col]))
        return det, aug[:, n:]

    def det(self) -> FieldElement:
        return FieldElement(self.field, self._eliminate()[0])

    def is_invertible(self) -> bool:
        return self._eliminate()[0] != 0

    def inverse(self) -> 'SmallMatrix':
        det, inv = self._eliminate()
        if det == 0:
            raise ZeroDivisionError('Matrix is singular')
        return SmallMatrix(self.field, self.n, tuple(int(v) for v in inv.ravel()))
