"""Deterministic builders of transitive actions with distinguished subsets.

Every builder returns a `ConstructionOutput` holding the action, the named
subsets (element index arrays of the action's group) and the values the
construction is expected to attain. Nothing is trusted on faith:
`ConstructionOutput.verify` checks every subset against its role with the
derangement module.
"""

import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .algebra import FiniteField, field_create, is_prime, prime_factors
from .derangement import (ActionProfile, RhoCertificate, RhoValue, UpperBound, certify_rho,
                          find_semiregular_element, is_intersecting, is_semiregular, profile,
                          radius_bound, semiregular_upper_bound)
from .errors import (EvenQ, GroupTooLarge, InadmissibleParameters, InadmissibleQ,
                     NoSuchSubgroup)
from . import perm
from .perm import (AffineRepresentation, GroupTable, MatrixRepresentation,
                   TransitiveAction, close, close_group, coset_action, natural_action)
from .subgroups import find_subgroup, subgroup_conjugacy_classes
from .suzuki import (SzCase, borel_subsets, sz_borel_group, sz_case_spectrum, sz_group,
                     verify_sz_group)

_logger = logging.getLogger(__name__)

AGL1_MAX_Q: int = 1000
PGL2_MAX_Q: int = 9
PSL2_ODD_PRIMES: Tuple[int, ...] = (5, 7, 11, 13)
# Max. number of members enumerated for a product subset
PRODUCT_SUBSET_MAX: int = 10 ** 6


@dataclass
class ExpectedValue:
    """A value the construction must attain and where it comes from."""

    value: Any
    source: str


@dataclass
class ConstructionOutput:
    """A transitive action with named subsets and expected values.

    Attributes:
        name (str): Construction spec, e.g. 'psl2even:2'.
        action (TransitiveAction): The action on Omega.
        named_subsets (Dict[str, npt.NDArray[int]]): Element index sets.
        roles (Dict[str, str]): Advertised predicate per named subset, one of
            'intersecting', 'semiregular', 'sharply_transitive' or 'subgroup'.
        expected (Dict[str, ExpectedValue]): Sizes, exact rho values and bounds.
    """

    name: str
    action: TransitiveAction
    named_subsets: Dict[str, npt.NDArray[int]]
    roles: Dict[str, str]
    expected: Dict[str, ExpectedValue]
    notes: List[str] = field(default_factory=list)

    @property
    def group(self) -> GroupTable:
        return self.action.group

    @functools.cached_property
    def profile(self) -> ActionProfile:
        return profile(self.action, verify=True)

    def verify(self) -> Dict[str, bool]:
        """Checks every named subset against its role."""
        results = {}
        for name, subset in self.named_subsets.items():
            role = self.roles.get(name, 'subgroup')
            if role == 'intersecting':
                ok = is_intersecting(self.profile, subset)
            elif role == 'semiregular':
                ok = is_semiregular(self.profile, subset)
            elif role == 'sharply_transitive':
                ok = (subset.size == self.action.omega_size
                      and is_semiregular(self.profile, subset))
            else:
                ok = self.group.is_subgroup(subset)
            results[name] = bool(ok)
        return results

    def lower_witness(self) -> npt.NDArray[int]:
        return self.named_subsets.get('S', self.action.stabilizer)

    def upper_bounds(self) -> List[UpperBound]:
        bounds = []
        for name, role in self.roles.items():
            if role in ('semiregular', 'sharply_transitive'):
                bounds.append(semiregular_upper_bound(self.profile, self.named_subsets[name]))
        return bounds

    def measured(self) -> Dict[str, Any]:
        """Returns the values of `expected` that follow from the subsets alone."""
        values: Dict[str, Any] = {
            'group_order': self.group.order,
            'omega_size': self.action.omega_size,
        }
        for name, subset in self.named_subsets.items():
            values[f'{name}_size'] = int(subset.size)
        radius = [radius_bound(self.named_subsets[k].size, self.action.omega_size)
                  for k, role in self.roles.items()
                  if role in ('semiregular', 'sharply_transitive')]
        if radius:
            values['rho_upper'] = min(radius, key=lambda r: r.radicand)
            values['below_half_sqrt2'] = values['rho_upper'] < RhoValue(Fraction(1, 2))
        if 'S' in self.named_subsets and 'ZQ' in self.named_subsets:
            outside = np.setdiff1d(self.named_subsets['S'], self.named_subsets['ZQ'])
            if outside.size:
                values['noncentral_class_size'] = int(
                    self.group.class_sizes[self.group.class_of[outside[0]]])
        return values

    def certificate(self, extra_bounds: Iterable[UpperBound] = ()) -> RhoCertificate:
        """Certifies rho from the lower witness and every semiregular subset."""
        return certify_rho(self.profile, self.lower_witness(),
                           self.upper_bounds() + list(extra_bounds))


def _prime_power(q: int) -> Tuple[int, int]:
    factors = prime_factors(q) if q > 1 else []
    if len(factors) != 1:
        raise InadmissibleQ(f'{q} is not a prime power')
    p = factors[0]
    f = 0
    while q > 1:
        q //= p
        f += 1
    return p, f


def _rho_expected(size: int, stab: int, omega: int, source: str) -> ExpectedValue:
    return ExpectedValue(RhoValue.from_sizes(size, stab, omega), source)


# Affine groups of the line and the plane


def _affine_group(fld: FiniteField, linear: GroupTable) -> GroupTable:
    """Returns GF(q)^dim : linear, generated by unit translations and `linear`'s generators."""
    dim = linear.rep.n
    rep = AffineRepresentation(fld, dim, linear)
    gens = []
    for i in range(dim):
        for k in range(fld.f):
            vec = [0] * dim
            vec[i] = fld.p ** k
            gens.append(rep.translation(vec))
    gens += [np.array([int(g), 0], dtype=np.int64) for g in linear.generators]
    return close(rep, np.stack(gens))


def _affine_line(fld: FiniteField) -> Tuple[GroupTable, npt.NDArray[int], npt.NDArray[int]]:
    """Returns AGL(1,q) with the scale a and shift b of every element x -> a x + b."""
    gl1 = close(MatrixRepresentation(fld, 1), np.array([[fld.primitive]]))
    group = _affine_group(fld, gl1)
    scale = gl1.elements[group.elements[:, 0], 0]
    shift = group.elements[:, 1]
    return group, scale, shift


def _sharply_transitive_mask(fld: FiniteField, scale: npt.NDArray[int]) -> npt.NDArray[bool]:
    """Selects P:<g^2> for q = 3 (mod 4), else the complement of the cosets P g^i, i <= (q-1)/2."""
    q = fld.order
    logs = fld.log(scale)
    if q % 4 == 3:
        return logs % 2 == 0
    return (logs == 0) | (logs > (q - 1) // 2)


def build_agl1_sharply_transitive(q: int) -> ConstructionOutput:
    """AGL(1,q), q odd, on the cosets of <c> for the involution c: x -> -x.

    Raises:
        EvenQ: q is even.
        InadmissibleQ: q is not a prime power or too large.
    """
    if q % 2 == 0:
        raise EvenQ(f'q = {q} must be odd')
    p, f = _prime_power(q)
    if q > AGL1_MAX_Q:
        raise InadmissibleQ(f'q = {q} exceeds {AGL1_MAX_Q}')
    fld = field_create(p, f)
    group, scale, shift = _affine_line(fld)
    minus_one = int(fld.neg(1))
    c = np.flatnonzero((scale == minus_one) & (shift == 0))
    action = coset_action(group, np.concatenate([[0], c]), name=f'agl1st:{q}')
    r = np.flatnonzero(_sharply_transitive_mask(fld, scale))

    omega = q * (q - 1) // 2
    expected = {
        'omega_size': ExpectedValue(omega, 'degree q(q-1)/2'),
        'R_size': ExpectedValue(omega, 'sharply transitive set'),
        'max_intersecting': ExpectedValue(2, 'stabilizer order, EKR'),
        'rho': _rho_expected(2, 2, omega, 'EKR: stabilizers are maximum'),
    }
    return ConstructionOutput(f'agl1st:{q}', action, {'R': r},
                              {'R': 'sharply_transitive'}, expected)


# Projective lines


def _mobius(fld: FiniteField, a: int, b: int, c: int, d: int) -> npt.NDArray[int]:
    """Returns x -> (a x + b) / (c x + d) on points [inf, 0, 1, ...] (point = code + 1)."""
    x = np.arange(fld.order, dtype=np.int64)
    num = fld.add(fld.mul(a, x), b)
    den = fld.add(fld.mul(c, x), d)
    safe = np.where(den == 0, 1, den)
    images = np.where(den == 0, 0, fld.mul(num, fld.inv(safe)) + 1)
    at_inf = 0 if c == 0 else int(fld.mul(a, fld.inv(c))) + 1
    return np.concatenate([[at_inf], images]).astype(np.int64)


def _projective_group(fld: FiniteField, projective: bool) -> GroupTable:
    """Returns PSL(2,q) (or PGL(2,q) with `projective`) on the q + 1 points."""
    q = fld.order
    gens = [_mobius(fld, 1, fld.p ** k, 0, 1) for k in range(fld.f)]
    if projective or fld.p == 2:
        gens.append(_mobius(fld, fld.primitive, 0, 0, 1))
        gens.append(_mobius(fld, 0, 1, 1, 0))
        order = q * (q * q - 1)
    else:
        gens.append(_mobius(fld, int(fld.power(fld.primitive, 2)), 0, 0, 1))
        gens.append(_mobius(fld, 0, int(fld.neg(1)), 1, 0))
        order = q * (q * q - 1) // 2
    group = close_group(q + 1, np.stack(gens))
    if group.order != order:
        raise AssertionError(f'Projective group over {fld} has order {group.order}')
    return group


def _line_maps(fld: FiniteField, group: GroupTable) -> Tuple[npt.NDArray[int], npt.NDArray[int]]:
    """Returns (a, b) for the elements x -> a x + b fixing infinity, -1 elsewhere."""
    rows = group.elements
    affine = rows[:, 0] == 0
    b = np.where(affine, rows[:, 1] - 1, -1)
    a = np.where(affine, fld.sub(np.maximum(rows[:, 2] - 1, 0), np.maximum(b, 0)), -1)
    return a, b


def build_pgl2_sharply_transitive(q: int) -> ConstructionOutput:
    """PGL(2,q), q odd, on the cosets of D_2(q+1); its parabolic AGL(1,q) holds
    a sharply transitive set.
    """
    if q % 2 == 0:
        raise EvenQ(f'q = {q} must be odd')
    p, f = _prime_power(q)
    if q > PGL2_MAX_Q:
        raise InadmissibleQ(f'PGL(2,q) is built for q <= {PGL2_MAX_Q}')
    fld = field_create(p, f)
    group = _projective_group(fld, projective=True)
    h = find_subgroup(group, 2 * (q + 1), 'dihedral')
    action = coset_action(group, h, name=f'pgl2:{q}')
    a, _ = _line_maps(fld, group)
    parabolic = np.flatnonzero(a > 0)
    r = parabolic[_sharply_transitive_mask(fld, a[parabolic])]

    omega = q * (q - 1) // 2
    expected = {
        'omega_size': ExpectedValue(omega, 'degree q(q-1)/2'),
        'R_size': ExpectedValue(omega, 'sharply transitive set in the parabolic subgroup'),
        'max_intersecting': ExpectedValue(2 * (q + 1), 'stabilizer order, EKR'),
    }
    return ConstructionOutput(f'pgl2:{q}', action, {'R': r, 'Q': parabolic},
                              {'R': 'sharply_transitive', 'Q': 'subgroup'}, expected)


def build_psl2_even(e: int, stabilizer: str = 'dihedral') -> ConstructionOutput:
    """PSL(2,2^e) on the cosets of H = D_2(2^e-1), or of the parabolic subgroup.

    S is the stabilizer of infinity (AGL(1,2^e)) and R a cyclic semiregular
    subgroup of order 2^e + 1, so |R||S| = |G| and the certificate is tight.
    With `stabilizer='parabolic'` H = S and the action is the natural one on
    the 2^e + 1 points of the projective line, where stabilizers are maximum.
    """
    if e not in (2, 3, 4):
        raise InadmissibleParameters(f'PSL(2,2^e) is built for e in 2..4, got {e}')
    if stabilizer not in ('dihedral', 'parabolic'):
        raise InadmissibleParameters(f'Unsupported stabilizer {repr(stabilizer)}')
    q = 1 << e
    fld = field_create(2, e)
    group = _projective_group(fld, projective=False)
    s = np.flatnonzero(group.elements[:, 0] == 0)
    if stabilizer == 'parabolic':
        return _psl2_even_parabolic(e, group, s)
    h = find_subgroup(group, 2 * (q - 1), 'dihedral')
    action = coset_action(group, h, name=f'psl2even:{e}')
    r = find_semiregular_element(action, order=q + 1)
    if r is None:
        raise NoSuchSubgroup(f'No semiregular cyclic subgroup of order {q + 1}')

    omega = (q // 2) * (q + 1)
    expected = {
        'omega_size': ExpectedValue(omega, 'degree 2^(e-1)(2^e+1)'),
        'S_size': ExpectedValue(q * (q - 1), 'parabolic subgroup is maximum'),
        'upper_bound': ExpectedValue(group.order // (q + 1), '|G| / |R|'),
        'rho': ExpectedValue(RhoValue(Fraction(q // 2, q + 1)), 'sqrt(2^(e-1)/(2^e+1))'),
    }
    return ConstructionOutput(f'psl2even:{e}', action, {'S': s, 'R': r, 'H': action.stabilizer},
                              {'S': 'intersecting', 'R': 'semiregular', 'H': 'subgroup'},
                              expected)


def _psl2_even_parabolic(e: int, group: GroupTable, s: npt.NDArray[int]) -> ConstructionOutput:
    q = 1 << e
    name = f'psl2even:{e}:parabolic'
    action = natural_action(group, 0, name=name)
    r = find_semiregular_element(action, order=q + 1)
    if r is None:
        raise NoSuchSubgroup(f'No regular cyclic subgroup of order {q + 1}')
    expected = {
        'omega_size': ExpectedValue(q + 1, 'projective line'),
        'S_size': ExpectedValue(q * (q - 1), 'point stabilizer'),
        'upper_bound': ExpectedValue(q * (q - 1), '|G| / |R|'),
        'rho': ExpectedValue(RhoValue(Fraction(1, q + 1)), 'EKR: stabilizers are maximum'),
    }
    return ConstructionOutput(name, action, {'S': s, 'R': r, 'H': action.stabilizer},
                              {'S': 'intersecting', 'R': 'sharply_transitive',
                               'H': 'subgroup'}, expected)


# Product action


def _wreath_images(delta_images: Sequence[npt.NDArray[int]], sigma: npt.NDArray[int],
                   coords: npt.NDArray[int], radix: npt.NDArray[int]) -> npt.NDArray[int]:
    # Apply t_i to coordinate i, then move coordinate i to position sigma[i]
    moved = np.stack([img[coords[:, i]] for i, img in enumerate(delta_images)], axis=1)
    out = np.empty_like(moved)
    out[:, sigma] = moved
    return out @ radix


def build_product_action(inner: ConstructionOutput, ell: int = 2,
                         top: Optional[Sequence[Sequence[int]]] = None) -> ConstructionOutput:
    """T wr P on Delta^ell with S = S0^ell : P and R = R0^ell.

    Args:
        inner (ConstructionOutput): T acting on Delta with subsets 'S' and 'R'.
        ell (int): Number of coordinates.
        top (Optional[Sequence[Sequence[int]]]):
            Generators of a transitive P <= Sym(ell), the cyclic shift if None.

    Raises:
        GroupTooLarge: |T|^ell |P| exceeds the enumeration cap.
    """
    t_action = inner.action
    t_group = t_action.group
    n = t_action.omega_size
    if top is None:
        top = [list(range(1, ell)) + [0]] if ell > 1 else []
    top_group = close_group(ell, np.asarray(top, dtype=np.int64).reshape(-1, ell))
    if t_group.order ** ell * top_group.order > perm.GROUP_ORDER_CAP:
        raise GroupTooLarge(f'{t_group.order}^{ell} * {top_group.order} exceeds the cap')

    radix = np.array([n ** i for i in range(ell)], dtype=np.int64)
    points = np.arange(n ** ell, dtype=np.int64)
    coords = np.stack([(points // n ** i) % n for i in range(ell)], axis=1)
    identity_t = np.arange(n, dtype=np.int64)
    identity_sigma = np.arange(ell, dtype=np.int64)

    gens = []
    for t in t_group.generators:
        gens.append(_wreath_images([t_action.images(t)] + [identity_t] * (ell - 1),
                                   identity_sigma, coords, radix))
    for sigma in top_group.elements[top_group.generators]:
        gens.append(_wreath_images([identity_t] * ell, sigma, coords, radix))
    group = close_group(n ** ell, np.stack(gens))
    action = natural_action(group, 0, name=f'product:{inner.name}:{ell}')

    def members(parts: npt.NDArray[int], sigmas: npt.NDArray[int]) -> npt.NDArray[int]:
        if parts.size ** ell * sigmas.shape[0] > PRODUCT_SUBSET_MAX:
            raise GroupTooLarge('Product subset too large to enumerate')
        images = {int(x): t_action.images(x) for x in parts}
        rows = [_wreath_images([images[int(x)] for x in combo], sigma, coords, radix)
                for combo in itertools.product(parts, repeat=ell) for sigma in sigmas]
        return np.sort(group.lookup(np.stack(rows)))

    s0 = inner.lower_witness()
    s = members(s0, top_group.elements)
    subsets = {'S': s}
    roles = {'S': 'intersecting'}
    inner_r = [k for k, role in inner.roles.items() if role in ('semiregular',
                                                                'sharply_transitive')]
    if inner_r:
        subsets['R'] = members(inner.named_subsets[inner_r[0]], identity_sigma[None, :])
        roles['R'] = 'semiregular'

    inner_rho = inner.expected.get('rho')
    rho = inner_rho.value if inner_rho is not None else RhoValue.from_sizes(
        s0.size, t_action.stabilizer_order, n)
    expected = {
        'group_order': ExpectedValue(t_group.order ** ell * top_group.order, '|T|^ell |P|'),
        'omega_size': ExpectedValue(n ** ell, '|Delta|^ell'),
        'S_size': ExpectedValue(s0.size ** ell * top_group.order, '|S0|^ell |P|'),
        'rho': ExpectedValue(RhoValue(rho.radicand ** ell), 'inner rho to the power ell'),
    }
    return ConstructionOutput(f'product:{inner.name}:{ell}', action, subsets, roles, expected)


# Affine tower


def build_affine_tower(p: int, d: int = 1) -> ConstructionOutput:
    """AGL(1,q^2) on the cosets of AGL(1,q), q = p^d, with S = F : E^x."""
    if p % 2 == 0 or not is_prime(p):
        raise InadmissibleQ(f'p = {p} must be an odd prime')
    q = p ** d
    if q ** 4 > perm.GROUP_ORDER_CAP:
        raise GroupTooLarge(f'AGL(1,{q}^2) exceeds the enumeration cap')
    fld = field_create(p, 2 * d)
    group, scale, shift = _affine_line(fld)
    sub = fld.subfield(d)
    in_sub = np.isin(np.arange(fld.order), sub)
    h = np.flatnonzero(in_sub[scale] & in_sub[shift])
    s = np.flatnonzero(in_sub[scale])
    action = coset_action(group, h, name=f'affine:{p}:{d}')

    omega = q * (q + 1)
    expected = {
        'omega_size': ExpectedValue(omega, 'q(q+1)'),
        'S_size': ExpectedValue(q * q * (q - 1), 'F : E^x'),
        'rho': ExpectedValue(RhoValue(Fraction(q, q + 1)), 'sqrt(q/(q+1))'),
    }
    return ConstructionOutput(f'affine:{p}:{d}', action, {'S': s, 'H': h},
                              {'S': 'intersecting', 'H': 'subgroup'}, expected)


# Groups with large intersecting subsets


@dataclass(frozen=True)
class Table2Row:
    p: int
    dim: int
    group_order: int
    stabilizer_order: int
    s_order: int
    omega_size: int
    rho: Fraction
    large: bool


TABLE2_ROWS: Dict[int, Table2Row] = {
    1: Table2Row(5, 2, 600, 20, 200, 30, Fraction(10, 3), False),
    2: Table2Row(5, 2, 1200, 40, 400, 30, Fraction(10, 3), False),
    3: Table2Row(29, 2, 706440, 812, 47096, 870, Fraction(58, 15), True),
    4: Table2Row(29, 2, 1412880, 1624, 94192, 870, Fraction(58, 15), True),
    5: Table2Row(3, 3, 324, 18, 108, 18, Fraction(2), False),
}


def _matrix(entries: Sequence[int]) -> npt.NDArray[int]:
    return np.asarray(entries, dtype=np.int64)


def _special_linear(fld: FiniteField) -> GroupTable:
    return close(MatrixRepresentation(fld, 2), np.stack([_matrix([1, 1, 0, 1]),
                                                         _matrix([1, 0, 1, 1])]))


def _quaternion_pair(group: GroupTable, within: Optional[npt.NDArray[int]] = None
                     ) -> Tuple[int, int]:
    """Returns the first pair of order 4 elements a, b with a^2 = b^2 and b^-1 a b = a^-1."""
    pool = np.arange(group.order) if within is None else np.asarray(within)
    fours = pool[group.order_of[pool] == 4]
    for a in fours:
        square = group.mul(int(a), int(a))
        cyclic = group.closure([int(a)])
        for b in fours:
            if b in cyclic or group.mul(int(b), int(b)) != square:
                continue
            if int(group.conjugate(int(a), int(b))) == group.inv(int(a)):
                return int(a), int(b)
    raise NoSuchSubgroup('No quaternion subgroup')


def _sl23_in_sl25(sl25: GroupTable) -> Tuple[int, int, int]:
    """Returns Q8 generators a, b and an order 3 element c normalizing <a, b>."""
    a, b = _quaternion_pair(sl25)
    q8 = sl25.closure([a, b])
    member = np.zeros(sl25.order, dtype=bool)
    member[q8] = True
    for c in np.flatnonzero(sl25.order_of == 3):
        if member[sl25.conjugate(q8, int(c))].all():
            return a, b, int(c)
    raise NoSuchSubgroup('No SL(2,3) in SL(2,5)')


def _binary_icosahedral(sl: GroupTable) -> npt.NDArray[int]:
    """Returns a subgroup SL(2,5) of SL(2,p) generated by elements of orders 4 and 3."""
    x = int(np.flatnonzero(sl.order_of == 4)[0])
    for y in np.flatnonzero(sl.order_of == 3):
        if sl.order_of[sl.mul(x, int(y))] in (5, 10):
            sub = sl.closure([x, int(y)], cap=120)
            if sub is not None and sub.size == 120:
                return sub
    raise NoSuchSubgroup('No SL(2,5) subgroup')


def _linear_table(fld: FiniteField, rows: Sequence[npt.NDArray[int]]) -> GroupTable:
    n = int(round(np.sqrt(np.asarray(rows[0]).size)))
    return close(MatrixRepresentation(fld, n), np.stack(rows))


def _lift(group: GroupTable, linear_subset: npt.NDArray[int]) -> npt.NDArray[int]:
    """Returns the elements of an affine group whose linear part lies in the subset."""
    return np.flatnonzero(np.isin(group.elements[:, 0], linear_subset))


def _choose_stabilizer(group: GroupTable, s: npt.NDArray[int], order: int, name: str
                       ) -> Tuple[Optional[TransitiveAction], int, int]:
    """Returns the first coset action on a subgroup class of `order` making S intersecting.

    Also returns the number of subgroup classes tried and matching.
    """
    classes = subgroup_conjugacy_classes(group, order)
    chosen = None
    matching = 0
    for h in classes:
        action = coset_action(group, h, name=name)
        if is_intersecting(profile(action, verify=False), s):
            matching += 1
            if chosen is None:
                chosen = action
    _logger.info('%s: %d of %d stabilizer classes of order %d make S intersecting',
                 name, matching, len(classes), order)
    return chosen, len(classes), matching


def _table2_small(row: int) -> ConstructionOutput:
    spec = TABLE2_ROWS[row]
    name = f'table2:{row}'
    if row == 5:
        fld = field_create(3, 1)
        linear = _linear_table(fld, [_sum_zero_matrix([1, 2, 0, 3]),
                                     _sum_zero_matrix([1, 0, 3, 2])])
        candidates = [(linear, np.flatnonzero(linear.order_of <= 2))]
    else:
        fld = field_create(5, 1)
        sl25 = _special_linear(fld)
        a, b, c = _sl23_in_sl25(sl25)
        gens = [sl25.elements[i] for i in (a, b, c)]
        sl23 = _linear_table(fld, gens)
        q8 = sl23.closure(sl23.lookup(np.stack(gens[:2])))
        if row == 1:
            candidates = [(sl23, q8)]
        else:
            candidates = [(g0, find_subgroup(g0, 16, 'two_group'))
                          for g0 in _sl23_extensions(fld, gens)]

    tried = 0
    for linear, s_linear in candidates:
        group = _affine_group(fld, linear)
        s = _lift(group, s_linear)
        action, count, matching = _choose_stabilizer(group, s, spec.stabilizer_order, name)
        tried += count
        if action is None:
            continue
        notes = [f'{matching} of {count} stabilizer classes of order'
                 f' {spec.stabilizer_order} make S intersecting']
        subsets = {'S': s, 'H': action.stabilizer}
        roles = {'S': 'intersecting', 'H': 'subgroup'}
        r = find_semiregular_element(action, order=3)
        if r is not None:
            subsets['R'] = r
            roles['R'] = 'semiregular'
        return ConstructionOutput(name, action, subsets, roles, _table2_expected(spec), notes)
    raise NoSuchSubgroup(f'None of {tried} stabilizer classes makes S intersecting')


def _table2_expected(spec: Table2Row) -> Dict[str, ExpectedValue]:
    return {
        'group_order': ExpectedValue(spec.group_order, 'table row'),
        'omega_size': ExpectedValue(spec.omega_size, 'table row'),
        'S_size': ExpectedValue(spec.s_order, 'table row'),
        'rho': ExpectedValue(RhoValue(spec.rho), 'table row'),
    }


def _sum_zero_matrix(perm: Sequence[int]) -> npt.NDArray[int]:
    """Returns the action of a permutation of 4 points on the sum-zero vectors of GF(3)^4.

    The basis is e_i - e_3 for i < 3, and row i holds the image of basis vector i.
    """
    rows = np.zeros((3, 3), dtype=np.int64)
    for i in range(3):
        j, k = perm[i], perm[3]
        if j < 3:
            rows[i, j] += 1
        if k < 3:
            rows[i, k] -= 1
    return (rows % 3).ravel()


def _sl23_extensions(fld: FiniteField, sl23_gens: Sequence[npt.NDArray[int]]
                     ) -> List[GroupTable]:
    """Returns the overgroups <SL(2,3), m> of order 48 in GL(2,5), those acting as S4 first."""
    rep = MatrixRepresentation(fld, 2)
    gl = close(rep, np.stack([_matrix([fld.primitive, 0, 0, 1]), _matrix([1, 1, 0, 1]),
                              _matrix([1, 0, 1, 1])]))
    base = gl.lookup(np.stack(sl23_gens))
    inner = gl.closure(base)
    scalars = np.flatnonzero((gl.elements[:, 1] == 0) & (gl.elements[:, 2] == 0)
                             & (gl.elements[:, 0] == gl.elements[:, 3]))
    seen = set()
    found = []
    for m in range(gl.order):
        if m in inner:
            continue
        sub = gl.closure(list(base) + [m], cap=48)
        if sub is None or sub.size != 48 or sub.tobytes() in seen:
            continue
        seen.add(sub.tobytes())
        central = np.intersect1d(sub, scalars).size
        found.append((central, sub))
    found.sort(key=lambda item: item[0])
    return [_linear_table(fld, [gl.elements[i] for i in gl.generating_set(sub)])
            for _, sub in found]


def _eigenline(fld: FiniteField, matrix_row: npt.NDArray[int]) -> npt.NDArray[int]:
    """Returns the vector codes of the first line fixed by a 2x2 matrix."""
    rep = MatrixRepresentation(fld, 2)
    p = fld.order
    for code in range(1, p * p):
        v = np.array([[code % p, code // p]], dtype=np.int64)
        w = rep.act(v, matrix_row)[0]
        k = int(np.flatnonzero(v[0])[0])
        c = int(fld.mul(w[k], fld.inv(v[0, k])))
        if np.all(fld.mul(c, v[0]) == w):
            line = fld.mul(np.arange(p)[:, None], v[0][None, :])
            return np.sort(line[:, 0] + p * line[:, 1])
    raise NoSuchSubgroup('Matrix has no eigenline')


def _table2_large(row: int) -> ConstructionOutput:
    spec = TABLE2_ROWS[row]
    fld = field_create(spec.p, 1)
    sl = _special_linear(fld)
    icosahedral = _binary_icosahedral(sl)
    a, b = _quaternion_pair(sl, within=icosahedral)
    # Scalars of order 7 (row 3) or 28 (row 4)
    omega_exp = (spec.p - 1) // 7 if row == 3 else 1
    scalar = int(fld.power(fld.primitive, omega_exp))
    scalar_row = _matrix([scalar, 0, 0, scalar])

    lin_gens = [sl.elements[i] for i in sl.generating_set(icosahedral)] + [scalar_row]
    linear = _linear_table(fld, lin_gens)
    a_l, b_l, z_l = linear.lookup(np.stack([sl.elements[a], sl.elements[b], scalar_row]))
    s_linear = linear.closure([a_l, b_l, z_l])
    h_linear = linear.closure([a_l, z_l])

    group = _affine_group(fld, linear)
    line = _eigenline(fld, sl.elements[a])
    s = _lift(group, s_linear)
    h = np.flatnonzero(np.isin(group.elements[:, 0], h_linear)
                       & np.isin(group.elements[:, 1], line))
    if h.size != spec.stabilizer_order or s.size != spec.s_order:
        raise AssertionError(f'Row {row}: |H| = {h.size}, |S| = {s.size}')
    action = coset_action(group, h, name=f'table2:{row}')
    expected = _table2_expected(spec)
    expected['H_size'] = ExpectedValue(spec.stabilizer_order, 'table row')
    return ConstructionOutput(f'table2:{row}', action, {'S': s, 'H': h},
                              {'S': 'intersecting', 'H': 'subgroup'}, expected,
                              ['certified by lower bound only'])


def build_table2(row: int) -> ConstructionOutput:
    """Affine groups with intersecting subsets larger than sqrt(|Omega|) stabilizers.

    Rows 1, 2 and 5 enumerate the stabilizer classes of the stated order and
    keep the first one making S intersecting. Rows 3 and 4 run in large mode
    with H and S given explicitly.
    """
    if row not in TABLE2_ROWS:
        raise InadmissibleParameters(f'Table rows are 1..5, got {row}')
    out = _table2_large(row) if TABLE2_ROWS[row].large else _table2_small(row)
    if out.group.order != TABLE2_ROWS[row].group_order:
        raise AssertionError(f'Row {row} group has order {out.group.order}')
    return out


# Special p-groups


def build_suzuki_borel_example(e: int = 3) -> ConstructionOutput:
    """Q:K of Sz(2^e) on the cosets of H = <(1,1)> of order 4; Q is intersecting."""
    group = sz_borel_group(e)
    q = 1 << e
    h = group.closure(group.lookup(np.array([[1, 1, 1]])))
    action = coset_action(group, h, name=f'szborel:{e}')
    parts = borel_subsets(group)
    expected = {
        'omega_size': ExpectedValue(q * q * (q - 1) // 4, 'q^2(q-1)/4'),
        'Q_size': ExpectedValue(q * q, 'Sylow 2-subgroup'),
        'upper_bound': ExpectedValue(q * q, '|G| / |K|'),
        'rho': ExpectedValue(RhoValue(Fraction(q * q, 4 * (q - 1))), 'q / (2 sqrt(q-1))'),
    }
    return ConstructionOutput(f'szborel:{e}', action,
                              {'S': parts['Q'], 'ZQ': parts['ZQ'], 'R': parts['K'], 'H': h},
                              {'S': 'intersecting', 'ZQ': 'subgroup', 'R': 'semiregular',
                               'H': 'subgroup'}, expected)


def build_psu3_example(q: int = 7) -> ConstructionOutput:
    """The Borel subgroup Q:<g> of PSU(3,q) on the cosets of H = <x, y>.

    Q consists of the matrices M(a,b) = [[1, a, -b^q], [0, 1, 0], [0, b, 1]]
    with a + a^q + b b^q = 0 over GF(q^2), and g = diag(l, l^-q, l^(q-1)).

    Raises:
        InadmissibleQ: q is not an odd prime with gcd(3, q+1) = 1 or the
            group exceeds the enumeration cap.
    """
    if q % 2 == 0 or not is_prime(q) or gcd(3, q + 1) != 1:
        raise InadmissibleQ(f'q = {q} must be an odd prime with gcd(3, q+1) = 1')
    order = q ** 3 * (q * q - 1)
    if order > perm.GROUP_ORDER_CAP:
        raise InadmissibleQ(f'|G| = {order} exceeds the enumeration cap')
    p = q
    fld = field_create(q, 2)
    codes = np.arange(fld.order)
    trace = fld.add(codes, fld.power(codes, q))
    norm = fld.neg(fld.mul(codes, fld.power(codes, q)))
    a_of, b_of = np.nonzero(trace[:, None] == norm[None, :])

    def unipotent(a, b):
        return _matrix([1, a, int(fld.neg(fld.power(b, q))), 0, 1, 0, 0, b, 1])

    lam = fld.primitive
    torus = _matrix([lam, 0, 0, 0, int(fld.power(lam, -q)), 0, 0, 0, int(fld.power(lam, q - 1))])
    gens = [unipotent(int(a), int(b)) for a, b in zip(a_of, b_of)
            if b in (0, 1, lam)]
    group = close(MatrixRepresentation(fld, 3), np.stack(gens + [torus]))
    if group.order != order:
        raise AssertionError(f'Borel subgroup of PSU(3,{q}) has order {group.order}')

    rows = group.elements
    in_q = ((rows[:, 0] == 1) & (rows[:, 3] == 0) & (rows[:, 4] == 1) & (rows[:, 5] == 0)
            & (rows[:, 6] == 0) & (rows[:, 8] == 1))
    qq = np.flatnonzero(in_q)
    zq = np.flatnonzero(in_q & (rows[:, 7] == 0))
    diagonal = np.flatnonzero(np.all(rows[:, [1, 2, 3, 5, 6, 7]] == 0, axis=1))

    h = None
    for i, x in enumerate(qq):
        for y in qq[i + 1:]:
            if group.mul(int(x), int(y)) != group.mul(int(y), int(x)):
                h = group.closure([int(x), int(y)])
                break
        if h is not None:
            break
    action = coset_action(group, h, name=f'psu3:{q}')

    expected = {
        'Q_size': ExpectedValue(q ** 3, 'Sylow p-subgroup'),
        'ZQ_size': ExpectedValue(q, 'Z(Q) = {M(a,0) : a + a^q = 0}'),
        'noncentral_class_size': ExpectedValue(q * (q * q - 1), '|x^G| for x in Q - Z(Q)'),
        'omega_size': ExpectedValue(q ** 3 * (q * q - 1) // p ** 3, 'q^3(q^2-1)/p^3'),
        'rho': ExpectedValue(RhoValue(Fraction(q ** 3, p ** 3 * (q * q - 1))),
                             'q^3 / sqrt(p^3 q^3 (q^2-1))'),
    }
    return ConstructionOutput(f'psu3:{q}', action,
                              {'S': qq, 'ZQ': zq, 'R': diagonal, 'H': h},
                              {'S': 'intersecting', 'ZQ': 'subgroup', 'R': 'semiregular',
                               'H': 'subgroup'}, expected)


def build_psl2_odd_semiregular(p: int, case: str = 'parabolic', ell: int = 1,
                               epsilon: int = 1) -> ConstructionOutput:
    """PSL(2,p) with a large semiregular subgroup.

    Case 'parabolic': G_omega = Z_p : Z_ell with ell odd dividing (p-1)/2 and
    R = D_(p+1). Case 'dihedral': G_omega = D_(p+epsilon) and R = Z_p.
    """
    if p not in PSL2_ODD_PRIMES:
        raise InadmissibleQ(f'p must be one of {PSL2_ODD_PRIMES}, got {p}')
    fld = field_create(p, 1)
    group = _projective_group(fld, projective=False)
    a, _ = _line_maps(fld, group)
    if case == 'parabolic':
        if ell % 2 == 0 or ((p - 1) // 2) % ell != 0:
            raise InadmissibleParameters(f'ell = {ell} must be odd and divide {(p - 1) // 2}')
        # x -> a x + b with a in the subgroup of order ell
        logs = fld.log(np.where(a > 0, a, 1))
        h = np.flatnonzero((a > 0) & (logs % ((p - 1) // ell) == 0))
        r = find_subgroup(group, p + 1, 'dihedral')
        radicand = Fraction(p - 1, 2 * (p + 1) * ell)
    elif case == 'dihedral':
        if epsilon not in (1, -1):
            raise InadmissibleParameters(f'epsilon must be 1 or -1, got {epsilon}')
        h = find_subgroup(group, p + epsilon, 'dihedral')
        r = np.flatnonzero(a == 1)
        radicand = Fraction(p * p - 1, 2 * p * h.size)
    else:
        raise InadmissibleParameters(f'Unknown case {repr(case)}')
    action = coset_action(group, h, name=f'psl2odd:{p}:{case}')
    rho_upper = RhoValue(radicand)
    expected = {
        'R_size': ExpectedValue(int(r.size), 'semiregular subgroup'),
        'rho_upper': ExpectedValue(rho_upper, 'sqrt(|Omega|) / |R|'),
        'below_half_sqrt2': ExpectedValue(rho_upper < RhoValue(Fraction(1, 2)),
                                          'rho upper bound below sqrt(2)/2'),
    }
    return ConstructionOutput(f'psl2odd:{p}:{case}', action, {'R': r},
                              {'R': 'semiregular'}, expected)


# Suzuki group

SZ8_STABILIZER_CASES: Dict[Tuple[int, str], SzCase] = {
    (14, 'dihedral'): SzCase.D_2Q_1,
    (7, 'cyclic'): SzCase.Z_Q_1,
    (4, 'cyclic'): SzCase.BOREL_ORDER4_EXPONENT,
    (52, 'frobenius'): SzCase.TORUS_PLUS,
    (20, 'frobenius'): SzCase.TORUS_MINUS,
}


def build_sz8_dihedral(table: Optional[GroupTable] = None, order: int = 14,
                       shape: str = 'dihedral', cache=None) -> ConstructionOutput:
    """Sz(8) on the cosets of a subgroup of the given order and shape.

    Defaults to the dihedral subgroup D_14. The group is built on its ovoid
    unless an ingested table is passed.
    """
    table = table if table is not None else sz_group(3, cache=cache)
    verify_sz_group(table)
    h = find_subgroup(table, order, shape)
    action = coset_action(table, h, name=f'sz8:{order}:{shape}')
    expected = {'omega_size': ExpectedValue(table.order // order, '|G| / |H|')}
    case = SZ8_STABILIZER_CASES.get((order, shape))
    if case is not None:
        spectrum = sz_case_spectrum(case, 8)
        expected['hoffman_bound'] = ExpectedValue(spectrum.printed_bound, case.value)
        expected['case'] = ExpectedValue(case.value, 'stabilizer case')
    return ConstructionOutput(f'sz8:{order}:{shape}', action, {'H': h}, {'H': 'subgroup'},
                              expected)


# Spec strings


def _product_from_args(e: int, ell: int) -> ConstructionOutput:
    return build_product_action(build_psl2_even(e), ell)


def _psl2_odd_from_args(p: int, case: str, param: Optional[int]) -> ConstructionOutput:
    if case == 'dihedral':
        return build_psl2_odd_semiregular(p, case, epsilon=param if param is not None else 1)
    return build_psl2_odd_semiregular(p, case, ell=param if param is not None else 1)


# Builder and (converter, default) per positional argument
BUILDERS: Dict[str, Tuple[Callable[..., ConstructionOutput], Tuple[Tuple[type, Any], ...]]] = {
    'agl1st': (build_agl1_sharply_transitive, ((int, 9),)),
    'pgl2': (build_pgl2_sharply_transitive, ((int, 5),)),
    'psl2even': (build_psl2_even, ((int, 2), (str, 'dihedral'))),
    'product': (_product_from_args, ((int, 2), (int, 2))),
    'affine': (build_affine_tower, ((int, 3), (int, 1))),
    'table2': (build_table2, ((int, 1),)),
    'szborel': (build_suzuki_borel_example, ((int, 3),)),
    'psu3': (build_psu3_example, ((int, 7),)),
    'psl2odd': (_psl2_odd_from_args, ((int, 5), (str, 'parabolic'), (int, None))),
    'sz8': (lambda order, shape: build_sz8_dihedral(order=order, shape=shape),
            ((int, 14), (str, 'dihedral'))),
}


def parse_spec(spec: str) -> Tuple[str, List[Any]]:
    """Splits 'name[:arg[,arg...]]' into the name and converted arguments.

    Raises:
        InadmissibleParameters: Unknown name, too many or malformed arguments.
    """
    name, _, rest = spec.partition(':')
    if name not in BUILDERS:
        raise InadmissibleParameters(f'Unknown construction {repr(name)}')
    _, signature = BUILDERS[name]
    raw = [x.strip() for x in rest.replace(':', ',').split(',') if x.strip()]
    if len(raw) > len(signature):
        raise InadmissibleParameters(f'{name} takes at most {len(signature)} arguments')
    args = []
    for i, (convert, default) in enumerate(signature):
        if i >= len(raw):
            args.append(default)
            continue
        try:
            args.append(convert(raw[i]))
        except ValueError:
            raise InadmissibleParameters(f'Malformed argument {repr(raw[i])}'
                                         f' in {repr(spec)}') from None
    return name, args


def build(spec: str) -> ConstructionOutput:
    """Builds a construction from its spec string, e.g. 'table2:5' or 'psl2odd:7,dihedral'."""
    name, args = parse_spec(spec)
    builder, _ = BUILDERS[name]
    _logger.info('Building %s', spec)
    return builder(*args)
