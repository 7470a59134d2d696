import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import FiniteField
from .errors import GroupTooLarge, InvalidGenerator, NotASubgroup

_logger = logging.getLogger(__name__)

GROUP_ORDER_CAP: int = 2 ** 20
LARGE_GROUP_ORDER_CAP: int = 2 ** 21


def set_order_caps(cap: int, large_cap: int) -> None:
    """Sets the default caps of `close`, e.g. from the configuration."""
    global GROUP_ORDER_CAP, LARGE_GROUP_ORDER_CAP  # pylint: disable=global-statement
    if cap < 1 or large_cap < cap:
        raise ValueError(f'Invalid order caps {cap}, {large_cap}')
    GROUP_ORDER_CAP = cap
    LARGE_GROUP_ORDER_CAP = large_cap


def _row_keys(rows: npt.NDArray[int], value_bound: int) -> npt.NDArray[np.int64]:
    """Maps each row to an int64 key, exact whenever a mixed-radix code fits."""
    rows = np.asarray(rows, dtype=np.int64)
    width = rows.shape[1]
    if value_bound ** width < 2 ** 62:
        radix = np.array([value_bound ** i for i in range(width)], dtype=np.int64)
        return rows @ radix
    # Linear hash over Z/2^64, int64 matmul wraps around silently
    rng = np.random.default_rng(0x5EED)
    weights = rng.integers(1, 2 ** 62, size=width, dtype=np.int64) | 1
    return rows @ weights


class Representation(ABC):
    """Concrete encoding of group elements as fixed-width integer rows.

    Products follow right actions: ``compose(a, b)`` is "first a, then b".
    """

    # Affine groups may be enumerated beyond the permutation cap
    large_mode: bool = False

    @property
    @abstractmethod
    def width(self) -> int:
        pass

    @property
    @abstractmethod
    def value_bound(self) -> int:
        pass

    @abstractmethod
    def identity(self) -> npt.NDArray[int]:
        pass

    @abstractmethod
    def compose(self, a: npt.NDArray[int], b: npt.NDArray[int]) -> npt.NDArray[int]:
        pass

    @abstractmethod
    def invert(self, a: npt.NDArray[int]) -> npt.NDArray[int]:
        pass

    @abstractmethod
    def key(self) -> str:
        """Returns a string identifying the encoding, used for cache keys."""

    def validate(self, rows: npt.NDArray[int]) -> None:
        rows = np.asarray(rows)
        if rows.ndim != 2 or rows.shape[1] != self.width:
            raise InvalidGenerator(f'Expected rows of width {self.width}, got {rows.shape}')
        if rows.size and (rows.min() < 0 or rows.max() >= self.value_bound):
            raise InvalidGenerator('Row entries out of range')


class PermutationRepresentation(Representation):
    """Permutations of {0, ..., n-1} as image vectors."""

    def __init__(self, degree: int):
        if degree < 1:
            raise ValueError(f'Unsupported degree {degree}')
        self.degree = degree

    @property
    def width(self) -> int:
        return self.degree

    @property
    def value_bound(self) -> int:
        return self.degree

    def identity(self) -> npt.NDArray[int]:
        return np.arange(self.degree, dtype=np.int64)

    def compose(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        return np.take_along_axis(b, a, axis=1)

    def invert(self, a):
        return np.argsort(np.asarray(a, dtype=np.int64), axis=1)

    def key(self) -> str:
        return f'perm:{self.degree}'

    def validate(self, rows):
        super().validate(rows)
        rows = np.asarray(rows)
        if np.any(np.sort(rows, axis=1) != self.identity()[None, :]):
            raise InvalidGenerator('A generator is not a bijection')


class MatrixRepresentation(Representation):
    """Invertible n x n matrices over a finite field, flattened row-major.

    Vectors are rows and matrices act from the right, so the product of
    rows ``a`` and ``b`` is the matrix product ``a @ b``.
    """

    def __init__(self, fld: FiniteField, n: int):
        if not 1 <= n <= 4:
            raise ValueError(f'Unsupported matrix dimension {n}')
        self.field = fld
        self.n = n

    @property
    def width(self) -> int:
        return self.n * self.n

    @property
    def value_bound(self) -> int:
        return self.field.order

    def identity(self) -> npt.NDArray[int]:
        return np.eye(self.n, dtype=np.int64).ravel()

    def _square(self, a) -> npt.NDArray[int]:
        return np.asarray(a, dtype=np.int64).reshape(-1, self.n, self.n)

    def compose(self, a, b):
        a = self._square(a)
        b = np.broadcast_to(self._square(b), a.shape)
        prods = self.field.mul(a[:, :, :, None], b[:, None, :, :])
        return self.field.sum(prods, axis=2).reshape(-1, self.width)

    def invert(self, a):
        fld = self.field
        n = self.n
        m = self._square(a)
        count = m.shape[0]
        eye = np.broadcast_to(np.eye(n, dtype=np.int64), (count, n, n))
        aug = np.concatenate([m, eye], axis=2)
        ar = np.arange(count)
        for col in range(n):
            nz = aug[:, col:, col] != 0
            if not nz.any(axis=1).all():
                raise InvalidGenerator('Singular matrix')
            piv = col + np.argmax(nz, axis=1)
            row_c = aug[ar, col].copy()
            aug[ar, col] = aug[ar, piv]
            aug[ar, piv] = row_c
            scale = fld.inv(aug[ar, col, col])
            aug[ar, col] = fld.mul(aug[ar, col], scale[:, None])
            for r in range(n):
                if r != col:
                    factor = aug[:, r, col].copy()
                    aug[:, r] = fld.sub(aug[:, r], fld.mul(aug[:, col], factor[:, None]))
        return aug[:, :, n:].reshape(count, self.width)

    def act(self, vectors, a) -> npt.NDArray[int]:
        """Returns ``v @ a`` for a batch of row vectors and matrix rows."""
        vectors = np.asarray(vectors, dtype=np.int64)
        m = np.broadcast_to(self._square(a), (vectors.shape[0], self.n, self.n))
        prods = self.field.mul(vectors[:, :, None], m)
        return self.field.sum(prods, axis=1)

    def key(self) -> str:
        return f'matrix:{self.field.p}^{self.field.f}:{self.n}'


class AffineRepresentation(Representation):
    """Affine maps ``v -> v A + w`` on GF(q)^dim with A from an enumerated group.

    Rows are ``(index of A in the linear group, code of w)`` where a vector
    code is ``sum(v_i * q**i)``. All arithmetic runs through precomputed
    tables, which keeps elements at two integers each and makes this the
    representation used for the largest groups.
    """

    large_mode = True

    def __init__(self, fld: FiniteField, dim: int, linear: 'GroupTable'):
        if not isinstance(linear.rep, MatrixRepresentation) or linear.rep.n != dim:
            raise ValueError(f'Linear group must consist of {dim}x{dim} matrices')
        self.field = fld
        self.dim = dim
        self.linear = linear
        self.space_size = fld.order ** dim

        codes = np.arange(self.space_size, dtype=np.int64)
        self.vectors = np.stack([(codes // fld.order ** i) % fld.order
                                 for i in range(dim)], axis=1)
        self._radix = np.array([fld.order ** i for i in range(dim)], dtype=np.int64)

        self.vadd = self.encode(fld.add(self.vectors[:, None, :], self.vectors[None, :, :]))
        self.vneg = self.encode(fld.neg(self.vectors))
        self.vact = np.empty((self.space_size, linear.order), dtype=np.int64)
        for idx in range(linear.order):
            self.vact[:, idx] = self.encode(linear.rep.act(self.vectors, linear.elements[idx]))
        self.lmul = linear.mul_table()
        self.linv = linear.inverse_of

    def encode(self, vectors) -> npt.NDArray[int]:
        return np.asarray(vectors, dtype=np.int64) @ self._radix

    @property
    def width(self) -> int:
        return 2

    @property
    def value_bound(self) -> int:
        return max(self.linear.order, self.space_size)

    def identity(self) -> npt.NDArray[int]:
        return np.zeros(2, dtype=np.int64)

    def compose(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        lin = self.lmul[a[:, 0], b[:, 0]]
        vec = self.vadd[self.vact[a[:, 1], b[:, 0]], b[:, 1]]
        return np.stack([lin, vec], axis=1)

    def invert(self, a):
        a = np.asarray(a, dtype=np.int64)
        lin = self.linv[a[:, 0]]
        return np.stack([lin, self.vneg[self.vact[a[:, 1], lin]]], axis=1)

    def translation(self, vector: Sequence[int]) -> npt.NDArray[int]:
        return np.array([0, int(self.encode(vector))], dtype=np.int64)

    def linear_part(self, matrix_row: npt.NDArray[int]) -> npt.NDArray[int]:
        return np.array([int(self.linear.lookup(np.asarray(matrix_row)[None, :])[0]), 0],
                        dtype=np.int64)

    def key(self) -> str:
        gens = ','.join(str(int(g)) for g in self.linear.generators)
        return f'affine:{self.field.p}^{self.field.f}:{self.dim}:{self.linear.order}:{gens}'


class GroupTable:
    """A fully enumerated finite group with its conjugacy classes.

    Elements are rows of a `Representation`, sorted lexicographically with
    the identity forced to index 0. Every "first found" rule elsewhere in the
    library keys off this order.

    Attributes:
        rep (Representation): The element encoding.
        elements (npt.NDArray[int]): Element rows, shape (order, width).
        order (int): Number of elements.
        generators (npt.NDArray[int]): Indices of the generators.
        inverse_of (npt.NDArray[int]): Index of the inverse of each element.
        class_of (npt.NDArray[int]): Conjugacy class index of each element,
            classes numbered by their smallest member so class 0 = {identity}.
        class_reps (npt.NDArray[int]): Smallest element index of each class.
        class_sizes (npt.NDArray[int]): Size of each class.
        order_of (npt.NDArray[int]): Multiplicative order of each element.
    """

    MUL_TABLE_MAX_ORDER: int = 1500

    def __init__(self,
                 rep: Representation,
                 elements: npt.NDArray[int],
                 generator_rows: npt.NDArray[int],
                 check_pairs: int = 10000):
        self.rep = rep
        self.elements = np.asarray(elements, dtype=np.int64)
        self.order = self.elements.shape[0]
        self._table = None

        if np.any(self.elements[0] != rep.identity()):
            raise ValueError('Identity must be the first element')

        self._keys = _row_keys(self.elements, rep.value_bound)
        self._key_order = np.argsort(self._keys, kind='stable')
        self._sorted_keys = self._keys[self._key_order]
        if np.any(np.diff(self._sorted_keys) == 0):
            raise ValueError('Duplicate elements in group table')

        self.generators = self.lookup(np.asarray(generator_rows, dtype=np.int64)
                                      .reshape(-1, rep.width))
        self.inverse_of = self.lookup(rep.invert(self.elements))

        if check_pairs > 0 and self.order > 1:
            rng = np.random.default_rng(0)
            a = rng.integers(0, self.order, size=check_pairs)
            b = rng.integers(0, self.order, size=check_pairs)
            self.lookup(rep.compose(self.elements[a], self.elements[b]))

        self._compute_classes()
        self._compute_orders()
        _logger.debug('Group of order %d with %d classes', self.order, len(self.class_reps))

    @property
    def degree(self) -> int:
        return self.rep.width

    @property
    def class_count(self) -> int:
        return len(self.class_reps)

    def find(self, rows: npt.NDArray[int]) -> npt.NDArray[int]:
        """Returns element indices of `rows`, -1 where a row is not in the group."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.rep.width)
        keys = _row_keys(rows, self.rep.value_bound)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        idx = self._key_order[pos]
        found = (self._sorted_keys[pos] == keys) & np.all(self.elements[idx] == rows, axis=1)
        return np.where(found, idx, -1)

    def lookup(self, rows: npt.NDArray[int]) -> npt.NDArray[int]:
        idx = self.find(rows)
        if np.any(idx < 0):
            raise KeyError('Element not in group')
        return idx

    def contains(self, rows: npt.NDArray[int]) -> npt.NDArray[bool]:
        return self.find(rows) >= 0

    def mul_table(self) -> npt.NDArray[int]:
        if self._table is None:
            table = np.empty((self.order, self.order), dtype=np.int64)
            for i in range(self.order):
                table[i] = self.lookup(self.rep.compose(
                    np.broadcast_to(self.elements[i], self.elements.shape), self.elements))
            self._table = table
        return self._table

    def mul_many(self, a, b) -> npt.NDArray[int]:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self._table is not None or self.order <= self.MUL_TABLE_MAX_ORDER:
            return self.mul_table()[a, b]
        shape = a.shape
        a = a.ravel()
        b = b.ravel()
        step = max(1, (1 << 22) // self.rep.width)
        result = np.empty(a.size, dtype=np.int64)
        for start in range(0, a.size, step):
            sl = slice(start, start + step)
            result[sl] = self.lookup(self.rep.compose(self.elements[a[sl]], self.elements[b[sl]]))
        return result.reshape(shape)

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_many(a, b))

    def inv(self, a: int) -> int:
        return int(self.inverse_of[a])

    def conjugate(self, x, g) -> npt.NDArray[int]:
        """Returns ``g^-1 x g`` (broadcasting)."""
        g = np.asarray(g, dtype=np.int64)
        return self.mul_many(self.mul_many(self.inverse_of[g], x), g)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 0
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def closure(self, gens: Sequence[int], cap: Optional[int] = None
                ) -> Optional[npt.NDArray[int]]:
        """Returns sorted indices of the subgroup generated by `gens`.

        Returns None as soon as the subgroup grows beyond `cap` elements.
        """
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        gens = gens[gens != 0]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        count = 1
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size and gens.size:
            cand = np.unique(self.mul_many(frontier[:, None], gens[None, :]).ravel())
            fresh = cand[~seen[cand]]
            seen[fresh] = True
            count += fresh.size
            if cap is not None and count > cap:
                return None
            frontier = fresh
        return np.flatnonzero(seen)

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        subset = np.unique(np.asarray(subset, dtype=np.int64))
        if subset.size == 0 or subset[0] != 0:
            return False
        member = np.zeros(self.order, dtype=bool)
        member[subset] = True
        span = np.zeros(self.order, dtype=bool)
        span[0] = True
        gens: List[int] = []
        for h in subset:
            if span[h]:
                continue
            gens.append(int(h))
            closed = self.closure(gens, cap=subset.size)
            if closed is None or not member[closed].all():
                return False
            span[:] = False
            span[closed] = True
        return bool(span.sum() == subset.size)

    def generating_set(self, subset: Sequence[int]) -> List[int]:
        """Returns a greedy generating set of a subgroup, in index order."""
        span = np.zeros(self.order, dtype=bool)
        span[0] = True
        gens: List[int] = []
        for h in np.unique(np.asarray(subset, dtype=np.int64)):
            if not span[h]:
                gens.append(int(h))
                span[:] = False
                span[self.closure(gens)] = True
        return gens

    def centralizer_order(self, x: int) -> int:
        everything = np.arange(self.order)
        return int(np.count_nonzero(self.mul_many(x, everything)
                                    == self.mul_many(everything, x)))

    def _compute_classes(self):
        n = self.order
        src = []
        dst = []
        everything = np.arange(n, dtype=np.int64)
        for g in self.generators:
            g_inv = self.inverse_of[g]
            rows = self.rep.compose(
                self.rep.compose(np.broadcast_to(self.elements[g_inv], self.elements.shape),
                                 self.elements),
                self.elements[g])
            src.append(everything)
            dst.append(self.lookup(rows))
        if src:
            src = np.concatenate(src)
            dst = np.concatenate(dst)
        else:
            src = dst = np.zeros(0, dtype=np.int64)
        graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        count, labels = connected_components(graph, directed=True, connection='weak')

        first = np.full(count, n, dtype=np.int64)
        np.minimum.at(first, labels, everything)
        rank = np.empty(count, dtype=np.int64)
        rank[np.argsort(first)] = np.arange(count)
        self.class_of = rank[labels]
        self.class_reps = np.sort(first)
        self.class_sizes = np.bincount(self.class_of, minlength=count)

    def _compute_orders(self):
        reps = self.class_reps
        orders = np.zeros(reps.size, dtype=np.int64)
        cur = reps.copy()
        pending = np.ones(reps.size, dtype=bool)
        k = 1
        while pending.any():
            done = pending & (cur == 0)
            orders[done] = k
            pending &= ~done
            if pending.any():
                cur[pending] = self.mul_many(cur[pending], reps[pending])
            k += 1
        self.class_orders = orders
        self.order_of = orders[self.class_of]


def _sort_rows(rep: Representation, rows: npt.NDArray[int]) -> npt.NDArray[int]:
    rows = rows[np.lexsort(rows.T[::-1])]
    ident = np.all(rows == rep.identity()[None, :], axis=1)
    return np.concatenate([rows[ident], rows[~ident]])


def _checked_table(rep: Representation, rows: npt.NDArray[int],
                   gens: npt.NDArray[int]) -> GroupTable:
    # Row keys may collide once they are hashed, so the closed set must map
    # into itself under every generator
    try:
        table = GroupTable(rep, rows, gens)
        for g in gens:
            table.lookup(rep.compose(table.elements, g))
    except KeyError:
        raise AssertionError(f'Closure of {rep.key()} is not closed, row keys collided') from None
    return table


def close(rep: Representation,
          generator_rows: Sequence[npt.NDArray[int]],
          cap: Optional[int] = None,
          cache=None) -> GroupTable:
    """Enumerates the group generated by `generator_rows` by breadth-first closure.

    Args:
        rep (Representation): The element encoding.
        generator_rows (Sequence[npt.NDArray[int]]): Generator rows.
        cap (Optional[int]): Max. group order, defaults to the module caps
            (the large cap for representations in large mode).
        cache (Optional[GroupCache]): Memoizes enumerated element rows.

    Returns:
        The enumerated group.
    """
    if cap is None:
        cap = LARGE_GROUP_ORDER_CAP if rep.large_mode else GROUP_ORDER_CAP
    gens = np.asarray(generator_rows, dtype=np.int64).reshape(-1, rep.width)
    rep.validate(gens)

    if cache is not None:
        rows = cache.load(rep, gens)
        if rows is not None:
            return _checked_table(rep, rows, gens)

    ident = rep.identity()[None, :]
    seen = _row_keys(ident, rep.value_bound)
    chunks = [ident]
    frontier = ident
    total = 1
    while frontier.shape[0] and gens.shape[0]:
        cand = np.concatenate([rep.compose(frontier, g) for g in gens])
        keys, first = np.unique(_row_keys(cand, rep.value_bound), return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = cand[first[fresh]]
        total += frontier.shape[0]
        if total > cap:
            raise GroupTooLarge(f'Group order exceeds {cap}')
        seen = np.union1d(seen, keys[fresh])
        chunks.append(frontier)
    rows = _sort_rows(rep, np.concatenate(chunks))
    _logger.info('Closed group of order %d (%s)', rows.shape[0], rep.key())

    table = _checked_table(rep, rows, gens)
    if cache is not None:
        cache.save(rep, gens, rows)
    return table


def close_group(degree: int, generators: Sequence[Sequence[int]],
                cap: Optional[int] = None, cache=None) -> GroupTable:
    """Enumerates a permutation group of the given degree."""
    rep = PermutationRepresentation(degree)
    rows = np.asarray(generators, dtype=np.int64).reshape(-1, degree) \
        if len(generators) else np.zeros((0, degree), dtype=np.int64)
    return close(rep, rows, cap=cap, cache=cache)


@dataclass
class TransitiveAction:
    """A transitive action of an enumerated group on points 0, ..., |Omega|-1.

    Point 0 is the base point omega and `point_of[g]` is the image of omega
    under element g, so the stabilizer is the set of elements with
    ``point_of == 0`` and points correspond to right cosets of it.
    """

    group: GroupTable
    point_of: npt.NDArray[int]
    name: str = ''
    stabilizer: npt.NDArray[int] = field(init=False)
    omega_size: int = field(init=False)
    transversal: npt.NDArray[int] = field(init=False)

    def __post_init__(self):
        point_of = np.asarray(self.point_of, dtype=np.int64)
        if point_of.shape != (self.group.order,):
            raise ValueError('Point map must cover every element')
        # Relabel points by their first element, so omega is point 0
        n = self.group.order
        labels, inverse = np.unique(point_of, return_inverse=True)
        first = np.full(labels.size, n, dtype=np.int64)
        np.minimum.at(first, inverse, np.arange(n))
        rank = np.empty(labels.size, dtype=np.int64)
        rank[np.argsort(first)] = np.arange(labels.size)
        self.point_of = rank[inverse]
        self.transversal = np.sort(first)
        self.omega_size = int(labels.size)
        self.stabilizer = np.flatnonzero(self.point_of == 0)
        if self.omega_size * self.stabilizer.size != n:
            raise ValueError('Point map does not describe a transitive action')

    @property
    def stabilizer_order(self) -> int:
        return int(self.stabilizer.size)

    def images(self, x: int) -> npt.NDArray[int]:
        """Returns the image of every point under element x."""
        return self.point_of[self.group.mul_many(self.transversal, x)]

    def fixed_points(self, x: int) -> npt.NDArray[int]:
        return np.flatnonzero(self.images(x) == np.arange(self.omega_size))

    def point_images(self, max_entries: int = 50_000_000) -> npt.NDArray[int]:
        """Returns the full element x point image table."""
        if self.group.order * self.omega_size > max_entries:
            raise GroupTooLarge('Point image table too large')
        table = np.empty((self.group.order, self.omega_size), dtype=np.int64)
        everything = np.arange(self.group.order)
        for k, t in enumerate(self.transversal):
            table[:, k] = self.point_of[self.group.mul_many(t, everything)]
        return table

    def generator_images(self) -> npt.NDArray[int]:
        """Returns the group generators as permutations of the points."""
        return np.stack([self.images(g) for g in self.group.generators]) \
            if self.group.generators.size else np.zeros((0, self.omega_size), dtype=np.int64)


def natural_action(group: GroupTable, point: int = 0, name: str = '') -> TransitiveAction:
    """Returns the action of a permutation group on the orbit of `point`."""
    if not isinstance(group.rep, PermutationRepresentation):
        raise ValueError('Natural action needs a permutation group')
    return TransitiveAction(group, group.elements[:, point], name=name)


def coset_action(group: GroupTable, subgroup: Sequence[int], name: str = '') -> TransitiveAction:
    """Returns the action of `group` on the right cosets of `subgroup`.

    Raises:
        NotASubgroup: The subset is not closed.
    """
    subgroup = np.unique(np.asarray(subgroup, dtype=np.int64))
    if group.order % subgroup.size != 0 or not group.is_subgroup(subgroup):
        raise NotASubgroup('The subset is not a subgroup')
    point_of = np.full(group.order, -1, dtype=np.int64)
    count = 0
    for g in range(group.order):
        if point_of[g] < 0:
            point_of[group.mul_many(subgroup, g)] = count
            count += 1
    _logger.debug('Coset action of degree %d', count)
    return TransitiveAction(group, point_of, name=name)
