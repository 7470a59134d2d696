import logging
from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from math import floor, isqrt, sqrt
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import numpy.typing as npt

from .errors import (GroupTooLarge, IdentityMissing, InconsistentCertificate,
                     NotSemiregular)
from .perm import GroupTable, TransitiveAction

_logger = logging.getLogger(__name__)

FACTORIZATION_MAX_ORDER: int = 10 ** 4
# Max. number of ratios evaluated at once by the pairwise scans
_CHUNK_ENTRIES: int = 1 << 20


@dataclass
class ActionProfile:
    """Derangement data of a transitive action, one flag per conjugacy class.

    Attributes:
        action (TransitiveAction): The profiled action.
        fixing_mask (npt.NDArray[bool]): True for classes whose elements fix
            at least one point.
        fixing_classes (npt.NDArray[int]): Indices of the fixing classes.
        derangement_classes (npt.NDArray[int]): Indices of the remaining classes.
        derangement_count (int): Number of derangements |D(G, Omega)|.
    """

    action: TransitiveAction
    fixing_mask: npt.NDArray[bool]
    fixing_classes: npt.NDArray[int]
    derangement_classes: npt.NDArray[int]
    derangement_count: int

    @property
    def group(self) -> GroupTable:
        return self.action.group

    def is_derangement(self, x) -> npt.NDArray[bool]:
        return ~self.fixing_mask[self.group.class_of[x]]

    def derangements(self) -> npt.NDArray[int]:
        return np.flatnonzero(self.is_derangement(np.arange(self.group.order)))


def profile(action: TransitiveAction, verify: bool = True) -> ActionProfile:
    """Tags every conjugacy class as fixing or derangement.

    An element fixes a point iff it is conjugate into the stabilizer, so the
    classes meeting the stabilizer are the fixing ones. With `verify` the
    fixed points of each class representative and of one random member per
    class are also counted directly.
    """
    group = action.group
    mask = np.zeros(group.class_count, dtype=bool)
    mask[group.class_of[action.stabilizer]] = True

    if verify:
        rng = np.random.default_rng(0)
        for c, rep in enumerate(group.class_reps):
            members = [int(rep)]
            if group.class_sizes[c] > 1:
                members.append(int(rng.choice(np.flatnonzero(group.class_of == c))))
            for x in members:
                if (action.fixed_points(x).size > 0) != mask[c]:
                    raise AssertionError(f'Class {c} is not uniformly fixing')

    fixing = np.flatnonzero(mask)
    deranging = np.flatnonzero(~mask)
    count = int(group.class_sizes[deranging].sum())
    _logger.debug('%d fixing and %d derangement classes, %d derangements',
                  fixing.size, deranging.size, count)
    return ActionProfile(action, mask, fixing, deranging, count)


def _as_profile(source: Union[TransitiveAction, ActionProfile]) -> ActionProfile:
    return source if isinstance(source, ActionProfile) else profile(source, verify=False)


def _ratio_classes(group: GroupTable, subset: npt.NDArray[int]):
    # Yields (row offset, class indices of subset[i] * subset[j]^-1) in chunks
    step = max(1, _CHUNK_ENTRIES // max(1, subset.size))
    inverses = group.inverse_of[subset]
    for start in range(0, subset.size, step):
        rows = subset[start:start + step]
        yield start, group.class_of[group.mul_many(rows[:, None], inverses[None, :])]


def is_intersecting(source: Union[TransitiveAction, ActionProfile],
                    subset: Sequence[int]) -> bool:
    """Tests whether every ratio x y^-1 of members fixes a point.

    Subgroups are recognized and tested member-wise, since their ratio set
    is the subgroup itself.
    """
    prof = _as_profile(source)
    group = prof.group
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size <= 1:
        return True
    if group.is_subgroup(subset):
        return bool(prof.fixing_mask[group.class_of[subset]].all())
    for _, classes in _ratio_classes(group, subset):
        if not prof.fixing_mask[classes].all():
            return False
    return True


def is_semiregular(source: Union[TransitiveAction, ActionProfile],
                   subset: Sequence[int]) -> bool:
    """Tests whether every ratio of distinct members is a derangement.

    Raises:
        IdentityMissing: The subset does not contain the identity.
    """
    prof = _as_profile(source)
    group = prof.group
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size == 0 or subset[0] != 0:
        raise IdentityMissing('A semiregular subset must contain the identity')
    if subset.size == 1:
        return True
    if group.is_subgroup(subset):
        return not prof.fixing_mask[group.class_of[subset[1:]]].any()
    for start, classes in _ratio_classes(group, subset):
        fixing = prof.fixing_mask[classes]
        diag = np.arange(classes.shape[0])
        fixing[diag, start + diag] = False
        if fixing.any():
            return False
    return True


@dataclass(frozen=True)
class RhoValue:
    """An exact value sqrt(radicand) with a rational radicand."""

    radicand: Fraction

    @staticmethod
    def from_sizes(size: int, stabilizer_order: int, omega_size: int) -> 'RhoValue':
        """Returns size / (|G_omega| sqrt(|Omega|))."""
        return RhoValue(Fraction(size * size, stabilizer_order * stabilizer_order * omega_size))

    @property
    def value(self) -> float:
        return sqrt(self.radicand)

    def render(self) -> str:
        num = self.radicand.numerator
        den = self.radicand.denominator
        rn = isqrt(num)
        rd = isqrt(den)
        if rn * rn == num and rd * rd == den:
            return str(rn) if rd == 1 else f'{rn}/{rd}'
        return f'sqrt({num})' if den == 1 else f'sqrt({num}/{den})'

    def __lt__(self, other: 'RhoValue') -> bool:
        return self.radicand < other.radicand

    def __le__(self, other: 'RhoValue') -> bool:
        return self.radicand <= other.radicand

    def __str__(self) -> str:
        return self.render()


def intersection_density(source: Union[TransitiveAction, ActionProfile],
                         size: int) -> Fraction:
    """Returns size / |G_omega|."""
    action = source.action if isinstance(source, ActionProfile) else source
    return Fraction(size, action.stabilizer_order)


def radius_bound(semiregular_size: int, omega_size: int) -> RhoValue:
    """Returns the upper bound sqrt(|Omega|) / |R| implied by a semiregular subset R."""
    return RhoValue(Fraction(omega_size, semiregular_size * semiregular_size))


@dataclass(frozen=True)
class UpperBound:
    """An upper bound on the size of intersecting subsets and its origin."""

    @unique
    class Kind(Enum):
        HOFFMAN = 1
        SEMIREGULAR_CLIQUE = 2
        EXACT_SOLVER = 3
        TRIVIAL = 4

    kind: Kind
    value: float
    note: str = ''

    def integral(self, tolerance: float = 1e-6) -> int:
        """Returns the bound floored to an integer, allowing for rounding noise."""
        return int(floor(self.value + tolerance))


def semiregular_upper_bound(source: Union[TransitiveAction, ActionProfile],
                            subset: Sequence[int]) -> UpperBound:
    """Returns |G| / |R| for a semiregular subset R.

    Raises:
        NotSemiregular: The subset fails `is_semiregular`.
    """
    prof = _as_profile(source)
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size == 0 or subset[0] != 0 or not is_semiregular(prof, subset):
        raise NotSemiregular('The subset is not semiregular')
    rho = radius_bound(subset.size, prof.action.omega_size)
    return UpperBound(UpperBound.Kind.SEMIREGULAR_CLIQUE,
                      prof.group.order / subset.size,
                      note=f'|R| = {subset.size}, rho <= {rho.render()}')


def semiregular_subgroup_from_element(source: Union[TransitiveAction, ActionProfile],
                                      x: int) -> npt.NDArray[int]:
    """Returns <x> if all its non-identity elements are derangements.

    Raises:
        NotSemiregular: Some power of x fixes a point.
    """
    prof = _as_profile(source)
    cyclic = prof.group.closure([x])
    if prof.fixing_mask[prof.group.class_of[cyclic[1:]]].any():
        raise NotSemiregular(f'<{x}> contains elements fixing points')
    return cyclic


def find_semiregular_element(source: Union[TransitiveAction, ActionProfile],
                             order: Optional[int] = None) -> Optional[npt.NDArray[int]]:
    """Returns the cyclic semiregular subgroup <r> for the first suitable class rep r.

    With `order` given only elements of that order are considered, otherwise
    the largest order found wins.
    """
    prof = _as_profile(source)
    group = prof.group
    best = None
    for c in prof.derangement_classes:
        rep = int(group.class_reps[c])
        if order is not None and group.order_of[rep] != order:
            continue
        cyclic = group.closure([rep])
        if prof.fixing_mask[group.class_of[cyclic[1:]]].any():
            continue
        if order is not None:
            return cyclic
        if best is None or cyclic.size > best.size:
            best = cyclic
    return best


def factorization_check(group: GroupTable, r: Sequence[int], s: Sequence[int]) -> bool:
    """Tests G = RS, i.e. |R||S| = |G| and all products r s are distinct."""
    if group.order > FACTORIZATION_MAX_ORDER:
        raise GroupTooLarge(f'Factorization check limited to order {FACTORIZATION_MAX_ORDER}')
    r = np.asarray(r, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64)
    if r.size * s.size != group.order:
        return False
    return np.unique(group.mul_many(r[:, None], s[None, :])).size == group.order


@dataclass
class RhoCertificate:
    """Certified interval for rho(G/Omega).

    Attributes:
        lower_witness (npt.NDArray[int]): An intersecting subset.
        upper_bound (int): Integral upper bound on intersecting subsets.
        upper_kind (UpperBound.Kind): Which source delivered `upper_bound`.
        upper_raw (float): The bound before flooring.
        rho_lower (RhoValue): |S| / (|G_omega| sqrt(|Omega|)).
        rho_upper (RhoValue): upper_bound / (|G_omega| sqrt(|Omega|)).
        tight (bool): The bounds meet.
    """

    lower_witness: npt.NDArray[int]
    upper_bound: int
    upper_kind: UpperBound.Kind
    upper_raw: float
    rho_lower: RhoValue
    rho_upper: RhoValue
    tight: bool
    stabilizer_order: int
    omega_size: int

    @property
    def lower_size(self) -> int:
        return int(self.lower_witness.size)

    @property
    def gap(self) -> float:
        return self.rho_upper.value - self.rho_lower.value


def certify_rho(source: Union[TransitiveAction, ActionProfile],
                lower_witness: Sequence[int],
                upper_sources: Iterable[UpperBound] = (),
                check: bool = True,
                tolerance: float = 1e-6) -> RhoCertificate:
    """Combines an intersecting subset with upper bounds into a certificate.

    The trivial bound |G| always participates; it alone never makes a
    certificate tight unless the witness is the whole group.

    Raises:
        InconsistentCertificate: The witness is not intersecting or exceeds
            the best upper bound.
    """
    prof = _as_profile(source)
    action = prof.action
    witness = np.unique(np.asarray(lower_witness, dtype=np.int64))
    if check and not is_intersecting(prof, witness):
        raise InconsistentCertificate('The lower witness is not intersecting')

    best = UpperBound(UpperBound.Kind.TRIVIAL, float(prof.group.order))
    for source_bound in upper_sources:
        if source_bound.integral(tolerance) < best.integral(tolerance):
            best = source_bound
    upper = best.integral(tolerance)
    if witness.size > upper:
        raise InconsistentCertificate(
            f'Intersecting subset of size {witness.size} exceeds the {best.kind.name}'
            f' bound {best.value}')

    stab = action.stabilizer_order
    omega = action.omega_size
    return RhoCertificate(
        lower_witness=witness,
        upper_bound=upper,
        upper_kind=best.kind,
        upper_raw=best.value,
        rho_lower=RhoValue.from_sizes(int(witness.size), stab, omega),
        rho_upper=RhoValue.from_sizes(upper, stab, omega),
        tight=witness.size == upper,
        stabilizer_order=stab,
        omega_size=omega,
    )
