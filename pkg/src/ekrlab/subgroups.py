import logging
from math import gcd
from typing import Callable, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .errors import GroupTooLarge, NoSuchSubgroup
from .perm import GroupTable

_logger = logging.getLogger(__name__)

Predicate = Callable[[GroupTable, npt.NDArray[int]], bool]

SUBGROUP_CLASSES_MAX_ORDER: int = 10 ** 4
TRIPLE_SEARCH_MAX_ORDER: int = 10 ** 4


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_cyclic(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    return int(group.order_of[sub].max()) == sub.size


def is_abelian(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    gens = group.generating_set(sub)
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if group.mul(a, b) != group.mul(b, a):
                return False
    return True


def is_two_group(_group: GroupTable, sub: npt.NDArray[int]) -> bool:
    return sub.size & (sub.size - 1) == 0


def is_dihedral(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    n = sub.size // 2
    if sub.size < 4 or sub.size % 2:
        return False
    orders = group.order_of[sub]
    if n == 2:
        return bool(np.all(orders[1:] == 2))
    for a in sub[orders == n]:
        rotations = group.closure([a])
        rest = np.setdiff1d(sub, rotations)
        if np.all(group.order_of[rest] == 2):
            return True
    return False


def is_quaternion(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    if not is_two_group(group, sub) or sub.size < 8 or is_cyclic(group, sub):
        return False
    return int(np.count_nonzero(group.order_of[sub] == 2)) == 1


def is_perfect(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    if sub.size == 1:
        return True
    gens = group.generating_set(sub)
    # The derived subgroup is the normal closure of generator commutators
    comms = set()
    for a in gens:
        for b in gens:
            c = group.mul(group.mul(group.inv(a), group.inv(b)), group.mul(a, b))
            comms.update(int(x) for x in group.conjugate(c, sub))
    derived = group.closure(sorted(comms), cap=sub.size)
    return derived is not None and derived.size == sub.size


def is_frobenius(group: GroupTable, sub: npt.NDArray[int]) -> bool:
    """Tests for a split extension Z_n:Z_m with coprime n, m and faithful action."""
    gens = group.generating_set(sub)
    orders = group.order_of[sub]
    for m in _divisors(sub.size):
        n = sub.size // m
        if m == 1 or n == 1 or gcd(n, m) != 1:
            continue
        for b in sub[orders == n]:
            kernel = group.closure([b])
            member = np.zeros(group.order, dtype=bool)
            member[kernel] = True
            if not all(member[group.conjugate(b, g)] for g in gens):
                continue
            for a in sub[orders == m]:
                images = [group.conjugate(b, group.power(int(a), k)) for k in range(1, m)]
                if all(int(x) != int(b) for x in images):
                    return True
    return False


PREDICATES: Dict[str, Predicate] = {
    'any': lambda group, sub: True,
    'cyclic': is_cyclic,
    'abelian': is_abelian,
    'dihedral': is_dihedral,
    'quaternion': is_quaternion,
    'two_group': is_two_group,
    'perfect': is_perfect,
    'frobenius': is_frobenius,
}


def resolve_predicate(predicate: Union[str, Predicate]) -> Predicate:
    if callable(predicate):
        return predicate
    try:
        return PREDICATES[predicate]
    except KeyError:
        raise ValueError(f'Unsupported subgroup shape {repr(predicate)}') from None


def _pair_closures(group: GroupTable, order: int
                   ) -> Iterator[Tuple[Tuple[int, ...], npt.NDArray[int]]]:
    # First generator up to conjugacy, second over all elements in index order
    fits = order % group.order_of == 0
    candidates = np.flatnonzero(fits)
    for a in group.class_reps[fits[group.class_reps]]:
        ok = fits[group.mul_many(a, candidates)]
        ok &= fits[group.mul_many(a, group.inverse_of[candidates])]
        for b in candidates[ok]:
            sub = group.closure([a, b], cap=order)
            if sub is not None:
                yield (int(a), int(b)), sub


def conjugacy_key(group: GroupTable, sub: npt.NDArray[int]) -> bytes:
    """Returns a key shared by exactly the conjugates of a subgroup."""
    everything = np.arange(group.order)
    conj = group.conjugate(sub[None, :], everything[:, None])
    conj = np.unique(np.sort(conj, axis=1), axis=0)
    return conj[0].tobytes()


def _subgroups(group: GroupTable, order: int) -> Iterator[npt.NDArray[int]]:
    seen = set()
    smaller: Dict[bytes, Tuple[int, ...]] = {}
    for gens, sub in _pair_closures(group, order):
        key = sub.tobytes()
        if sub.size == order:
            if key not in seen:
                seen.add(key)
                yield sub
        elif (order % sub.size == 0 and key not in smaller
              and group.order <= TRIPLE_SEARCH_MAX_ORDER):
            smaller[key] = gens

    if group.order > TRIPLE_SEARCH_MAX_ORDER:
        return
    # Every 3-generated subgroup is <K, c> with K 2-generated, K up to conjugacy
    bases: Dict[bytes, Tuple[int, ...]] = {}
    for key, gens in smaller.items():
        sub = np.frombuffer(key, dtype=np.int64)
        ckey = conjugacy_key(group, sub)
        if ckey not in bases:
            bases[ckey] = gens
    fits = np.flatnonzero(order % group.order_of == 0)
    for gens in bases.values():
        for c in fits:
            sub = group.closure(list(gens) + [int(c)], cap=order)
            if sub is not None and sub.size == order:
                key = sub.tobytes()
                if key not in seen:
                    seen.add(key)
                    yield sub


def find_subgroup(group: GroupTable, order: int,
                  predicate: Union[str, Predicate] = 'any') -> npt.NDArray[int]:
    """Returns the first subgroup of the given order satisfying the predicate.

    Pairs ``(a, b)`` are tried with ``a`` a class representative and ``b``
    any element, both in index order, then triples. The result is
    deterministic for a given group table.

    Raises:
        NoSuchSubgroup: No subgroup found after the exhaustive pass.
    """
    test = resolve_predicate(predicate)
    if order < 1 or group.order % order != 0:
        raise NoSuchSubgroup(f'{order} does not divide the group order {group.order}')
    if order == group.order:
        whole = np.arange(group.order)
        if test(group, whole):
            return whole
        raise NoSuchSubgroup('The whole group fails the predicate')
    for sub in _subgroups(group, order):
        if test(group, sub):
            _logger.debug('Found subgroup of order %d', order)
            return sub
    raise NoSuchSubgroup(f'No subgroup of order {order} with the requested shape')


def subgroup_conjugacy_classes(group: GroupTable, order: int,
                               predicate: Union[str, Predicate] = 'any'
                               ) -> List[npt.NDArray[int]]:
    """Returns one representative per conjugacy class of subgroups of `order`.

    Only subgroups generated by at most three elements are found.

    Raises:
        GroupTooLarge: The group has more than 10^4 elements.
    """
    if group.order > SUBGROUP_CLASSES_MAX_ORDER:
        raise GroupTooLarge(f'Subgroup class search limited to order {SUBGROUP_CLASSES_MAX_ORDER}')
    if group.order % order != 0:
        return []
    test = resolve_predicate(predicate)
    if order == group.order:
        whole = np.arange(group.order)
        return [whole] if test(group, whole) else []
    classes: Dict[bytes, npt.NDArray[int]] = {}
    for sub in _subgroups(group, order):
        key = conjugacy_key(group, sub)
        if key not in classes and test(group, sub):
            classes[key] = sub
    return list(classes.values())


def conjugates(group: GroupTable, sub: Sequence[int]) -> List[npt.NDArray[int]]:
    """Returns the distinct conjugates of a subgroup, sorted by their members."""
    sub = np.asarray(sub, dtype=np.int64)
    everything = np.arange(group.order)
    conj = np.unique(np.sort(group.conjugate(sub[None, :], everything[:, None]), axis=1), axis=0)
    return list(conj)
