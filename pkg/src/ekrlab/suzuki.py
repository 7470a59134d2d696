"""Closed-form data of the Suzuki groups Sz(q), q = 2^e with e >= 3 odd.

Class and character inventories, class sums over the tori, the weighted
spectra of the stabilizer cases, the Borel subgroup Q:K as an enumerated
group and the ovoid action used to realize small Sz(q) as permutations.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .algebra import FiniteField, field_create, theta_exponent
from .derangement import ActionProfile
from .errors import GroupTooLarge, InadmissibleParameters, InvalidGenerator, NotADivisor
from .perm import GroupTable, MatrixRepresentation, Representation, close, close_group
from .spectra import ClassWeighting

_logger = logging.getLogger(__name__)

GROUP_LEVEL_MAX_E: int = 5


@dataclass(frozen=True)
class SzParameters:
    """Numerical invariants of Sz(q).

    Attributes:
        e (int): Odd exponent >= 3.
        q (int): 2^e.
        r (int): 2^((e+1)/2), so r^2 = 2q.
    """

    e: int

    def __post_init__(self):
        if self.e < 3 or self.e % 2 == 0:
            raise InadmissibleParameters(f'Sz(2^e) needs an odd e >= 3, got {self.e}')

    @staticmethod
    def from_q(q: int) -> 'SzParameters':
        e = q.bit_length() - 1
        if q != 1 << e:
            raise InadmissibleParameters(f'q = {q} is not a power of 2')
        return SzParameters(e)

    @staticmethod
    def from_group_order(order: int) -> 'SzParameters':
        e = 3
        while True:
            params = SzParameters(e)
            if params.group_order == order:
                return params
            if params.group_order > order:
                raise InadmissibleParameters(f'{order} is not the order of a Suzuki group')
            e += 2

    @property
    def q(self) -> int:
        return 1 << self.e

    @property
    def r(self) -> int:
        return 1 << ((self.e + 1) // 2)

    @property
    def group_order(self) -> int:
        q = self.q
        return q * q * (q - 1) * (q * q + 1)

    @property
    def torus_orders(self) -> Tuple[int, int, int]:
        """Returns |A_0|, |A_1|, |A_2| = q-1, q+r+1, q-r+1."""
        q, r = self.q, self.r
        return q - 1, q + r + 1, q - r + 1

    @property
    def torus_normalizer_orders(self) -> Tuple[int, int, int]:
        n0, n1, n2 = self.torus_orders
        return 2 * n0, 4 * n1, 4 * n2

    @property
    def class_inventory(self) -> Dict[str, Tuple[int, int]]:
        """Maps a class family to (number of classes, size of each class)."""
        q, r = self.q, self.r
        order = self.group_order
        n0, n1, n2 = self.torus_orders
        return {
            '1': (1, 1),
            'rho2': (1, (q - 1) * (q * q + 1)),
            'rho': (1, q * (q - 1) * (q * q + 1) // 2),
            'rho_inv': (1, q * (q - 1) * (q * q + 1) // 2),
            'A0': (q // 2 - 1, order // n0),
            'A1': ((q + r) // 4, order // n1),
            'A2': ((q - r) // 4, order // n2),
        }

    @property
    def class_count(self) -> int:
        return sum(count for count, _ in self.class_inventory.values())

    @property
    def degrees(self) -> Dict[str, Tuple[int, int]]:
        """Maps a character family to (number of characters, degree)."""
        q, r = self.q, self.r
        return {
            '1': (1, 1),
            'X': (1, q * q),
            'X_i': (q // 2 - 1, q * q + 1),
            'Y_j': ((q + r) // 4, (q - r + 1) * (q - 1)),
            'Z_k': ((q - r) // 4, (q + r + 1) * (q - 1)),
            'W_l': (2, r * (q - 1) // 2),
        }


def _orbit_reps(n: int, multipliers: Sequence[int]) -> List[int]:
    # Smallest member of each orbit of {1..n-1} under multiplication mod n
    seen = set()
    reps = []
    for s in range(1, n):
        if s in seen:
            continue
        reps.append(s)
        seen.update((s * m) % n for m in multipliers)
    return reps


def _torus_multipliers(params: SzParameters, m: int) -> Tuple[int, ...]:
    n = params.torus_orders[m]
    if m == 0:
        return 1, n - 1
    return 1, n - 1, params.q % n, (-params.q) % n


def _epsilon(params: SzParameters, m: int, index: int, s) -> npt.NDArray[float]:
    """Returns epsilon_m^index(zeta_m^s), all of which are real."""
    n = params.torus_orders[m]
    s = np.asarray(s, dtype=np.int64)
    angle = 2 * np.pi * ((index * s) % n) / n
    if m == 0:
        return 2 * np.cos(angle)
    angle_q = 2 * np.pi * ((index * s * params.q) % n) / n
    return 2 * np.cos(angle) + 2 * np.cos(angle_q)


@dataclass
class SzCharacter:
    family: str
    index: int
    degree: int

    @property
    def name(self) -> str:
        return self.family if self.index == 0 else f'{self.family[0]}_{self.index}'


def sz_characters(params: SzParameters) -> List[SzCharacter]:
    """Lists the irreducible characters with orbit representative indices."""
    q, r = params.q, params.r
    chars = [SzCharacter('1', 0, 1), SzCharacter('X', 0, q * q)]
    chars += [SzCharacter('X_i', i, q * q + 1)
              for i in _orbit_reps(params.torus_orders[0], _torus_multipliers(params, 0))]
    chars += [SzCharacter('Y_j', j, (q - r + 1) * (q - 1))
              for j in _orbit_reps(params.torus_orders[1], _torus_multipliers(params, 1))]
    chars += [SzCharacter('Z_k', k, (q + r + 1) * (q - 1))
              for k in _orbit_reps(params.torus_orders[2], _torus_multipliers(params, 2))]
    chars += [SzCharacter('W_l', ell, r * (q - 1) // 2) for ell in (1, 2)]
    return chars


def _value_at_rho(params: SzParameters, char: SzCharacter) -> Tuple[complex, complex]:
    # Values at rho^2 and rho, the value at rho^-1 is the conjugate
    r = params.r
    return {
        '1': (1, 1),
        'X': (0, 0),
        'X_i': (1, 1),
        'Y_j': (r - 1, -1),
        'Z_k': (-r - 1, -1),
        'W_l': (-r / 2, (1 if char.index == 1 else -1) * r * 1j / 2),
    }[char.family]


def _value_on_torus(params: SzParameters, char: SzCharacter, m: int, s) -> npt.NDArray[float]:
    """Returns chi(zeta_m^s) for s not divisible by |A_m|."""
    s = np.asarray(s, dtype=np.int64)
    ones = np.ones(s.shape)
    if char.family == '1':
        return ones
    if char.family == 'X':
        return ones if m == 0 else -ones
    if char.family == 'X_i':
        return _epsilon(params, 0, char.index, s) if m == 0 else 0 * ones
    if char.family == 'Y_j':
        return -_epsilon(params, 1, char.index, s) if m == 1 else 0 * ones
    if char.family == 'Z_k':
        return -_epsilon(params, 2, char.index, s) if m == 2 else 0 * ones
    # W_l
    return (0, 1, -1)[m] * ones


@dataclass
class SzCharacterTable:
    params: SzParameters
    characters: List[SzCharacter]
    # One label per column: '1', 'rho2', 'rho', 'rho_inv', 'A0:s', 'A1:s', 'A2:s'.
    class_labels: List[str]
    class_sizes: npt.NDArray[int]
    centralizer_orders: npt.NDArray[int]
    values: npt.NDArray[complex]


def sz_character_table(params: SzParameters) -> SzCharacterTable:
    """Evaluates the generic character table at a concrete q."""
    chars = sz_characters(params)
    order = params.group_order
    labels = ['1', 'rho2', 'rho', 'rho_inv']
    sizes = [1] + [params.class_inventory[k][1] for k in ('rho2', 'rho', 'rho_inv')]
    columns = []
    for m in range(3):
        for s in _orbit_reps(params.torus_orders[m], _torus_multipliers(params, m)):
            labels.append(f'A{m}:{s}')
            sizes.append(order // params.torus_orders[m])
            columns.append((m, s))

    values = np.zeros((len(chars), len(labels)), dtype=complex)
    for row, char in enumerate(chars):
        at_rho2, at_rho = _value_at_rho(params, char)
        values[row, :4] = (char.degree, at_rho2, at_rho, np.conj(at_rho))
        for col, (m, s) in enumerate(columns, start=4):
            values[row, col] = _value_on_torus(params, char, m, [s])[0]

    sizes = np.array(sizes, dtype=np.int64)
    return SzCharacterTable(params, chars, labels, sizes, order // sizes, values)


@dataclass
class SzCharacterReport:
    q: int
    group_order: int
    degree_square_sum: int
    character_count: int
    class_count: int
    first_column_ok: bool
    orthogonality_error: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return (self.degree_square_sum == self.group_order
                and self.character_count == self.class_count
                and self.first_column_ok
                and self.orthogonality_error <= self.tolerance)


def sz_character_checks(q: int, tolerance: float = 1e-6) -> SzCharacterReport:
    """Verifies degrees, counts and column orthogonality of the character table."""
    params = SzParameters.from_q(q)
    table = sz_character_table(params)
    degrees = np.array([c.degree for c in table.characters], dtype=np.int64)
    gram = table.values.T @ np.conj(table.values)
    expected = np.diag(table.centralizer_orders.astype(float))
    error = float(np.abs(gram - expected).max())
    return SzCharacterReport(
        q=q,
        group_order=params.group_order,
        degree_square_sum=int(sum(int(d) * int(d) for d in degrees)),
        character_count=len(table.characters),
        class_count=len(table.class_labels),
        first_column_ok=bool(np.allclose(table.values[:, 0], degrees)),
        orthogonality_error=error,
        tolerance=tolerance * math.sqrt(params.group_order),
    )


@dataclass
class SzClassSums:
    """Size of (A_m - B_m)^G and the character sums over it, |B_m| = t.

    The sum of X_i (m = 0), Y_j (m = 1) or Z_k (m = 2) over the set is
    `divisible_value` when t divides the character index and 0 otherwise.
    """

    m: int
    t: int
    size: int
    family: str
    divisible_value: int

    def character_sum(self, index: int) -> int:
        return self.divisible_value if index % self.t == 0 else 0


def sz_class_sums(params: SzParameters, m: int, t: int) -> SzClassSums:
    """Raises `NotADivisor` unless t divides |A_m|."""
    if m not in (0, 1, 2):
        raise ValueError(f'Torus index must be 0, 1 or 2, got {m}')
    q, r = params.q, params.r
    n = params.torus_orders[m]
    if t < 1 or n % t != 0:
        raise NotADivisor(f'{t} does not divide |A_{m}| = {n}')
    if m == 0:
        size = q * q * (q * q + 1) * (q - 1 - t) // 2
        return SzClassSums(m, t, size, 'X_i', -q * q * (q * q + 1) * t)
    if m == 1:
        size = q * q * (q - 1) * (q - r + 1) * (q + r + 1 - t) // 4
        return SzClassSums(m, t, size, 'Y_j', t * q * q * (q - 1) * (q - r + 1))
    size = q * q * (q - 1) * (q + r + 1) * (q - r + 1 - t) // 4
    return SzClassSums(m, t, size, 'Z_k', t * q * q * (q - 1) * (q + r + 1))


@unique
class SzCase(Enum):
    D_2T0_MID = 'D_2t0_mid'
    D_2Q_1 = 'D_2q-1'
    Z_T0_MID = 'Z_t0_mid'
    Z_Q_1 = 'Z_q-1'
    BOREL_ORDER4_EXPONENT = 'borel_order4_exponent'
    BOREL_T0 = 'borel_t0'
    SUBFIELD_Q1 = 'subfield_q1'
    TORUS_PLUS = 'torus_plus'
    TORUS_MINUS = 'torus_minus'


@dataclass
class SzCaseSpectrum:
    """The weighted spectrum of one stabilizer case at a concrete q.

    `d`, `tau` and `bound` are computed from the character table, the
    `printed_*` values from the closed forms of the case.
    """

    case: SzCase
    q: int
    t: Optional[int]
    # Weight per class family: 'rho2', 'rho' (both rho and rho^-1), 'A0', 'A1', 'A2'.
    weights: Dict[str, Fraction]
    # Torus subgroup orders t_0, t_1, t_2 of the fixing parts B_m.
    fixing_tori: Tuple[int, int, int]
    eigenvalue_by_character: Dict[str, float]
    eigenvalues: npt.NDArray[float]
    d: float
    tau: float
    bound: float
    printed_d: Fraction
    printed_tau: Fraction
    printed_bound: Fraction

    def consistent(self, tolerance: float = 1e-6) -> bool:
        scale = max(1.0, abs(float(self.printed_d)))
        return (abs(self.d - float(self.printed_d)) <= tolerance * scale
                and abs(self.tau - float(self.printed_tau)) <= tolerance * scale
                and abs(self.bound - float(self.printed_bound))
                <= tolerance * max(1.0, float(self.printed_bound)))

    def rho_upper(self, stabilizer_order: int) -> float:
        """Returns bound / sqrt(|G| |G_omega|), an upper bound on rho(G/Omega)."""
        order = SzParameters.from_q(self.q).group_order
        return float(self.printed_bound) / math.sqrt(order * stabilizer_order)

    def below_half_sqrt2(self, stabilizer_order: int) -> bool:
        return self.rho_upper(stabilizer_order) < math.sqrt(2) / 2


def _case_setup(case: SzCase, params: SzParameters, t: Optional[int]):
    # Returns (weights, fixing tori, printed d, printed tau)
    q, r = params.q, params.r
    qf = Fraction(q)
    one = Fraction(1)
    n0 = q - 1

    def need_mid_t0():
        if t is None or t <= 1 or t >= n0 or n0 % t != 0:
            raise InadmissibleParameters(f'{case.value} needs 1 < t0 < q-1 dividing q-1,'
                                         f' got {t}')
        return t

    if case == SzCase.D_2T0_MID:
        t0 = need_mid_t0()
        weights = {'rho': one, 'A0': one, 'A1': one, 'A2': one}
        d = qf ** 5 - qf ** 4 * t0 / 2 - qf ** 4 / 2 - qf ** 2 * t0 / 2 + qf ** 2 / 2 - qf
        tau = -qf ** 2 * t0 + qf ** 2 - qf
        return weights, (t0, 1, 1), d, tau
    if case == SzCase.D_2Q_1:
        weights = {'rho': one, 'A1': Fraction(2, r) + Fraction(2, q),
                   'A2': -Fraction(2, r) + Fraction(2, q)}
        d = 2 * qf ** 4 - 2 * qf ** 3 + qf ** 2 - qf
        return weights, (n0, 1, 1), d, -qf ** 2 + qf
    if case == SzCase.Z_T0_MID:
        t0 = need_mid_t0()
        weights = {'rho2': one, 'rho': one, 'A0': one, 'A1': one, 'A2': one}
        d = (qf ** 5 - qf ** 4 * t0 / 2 - qf ** 4 / 2 + qf ** 3 - qf ** 2 * t0 / 2
             - qf ** 2 / 2 - 1)
        tau = -qf ** 2 * t0 + qf ** 2 - 1
        return weights, (t0, 1, 1), d, tau
    if case == SzCase.Z_Q_1:
        weights = {'rho2': one, 'rho': one, 'A1': Fraction(2, q), 'A2': Fraction(2, q)}
        d = 2 * qf ** 4 - 2 * qf ** 3 + qf ** 2 - 1
        return weights, (n0, 1, 1), d, -(qf - 1) ** 2
    if case == SzCase.BOREL_ORDER4_EXPONENT or (case == SzCase.BOREL_T0 and t == 1):
        heavy = 1 + Fraction(2 * (q + 1), q * (q - 1))
        weights = {'A0': one, 'A1': heavy, 'A2': heavy}
        d = qf ** 5 - qf ** 4 + qf ** 3 - 2 * qf ** 2
        return weights, (1, 1, 1), d, -qf ** 2
    if case == SzCase.BOREL_T0:
        if t is None or t < 1 or n0 % t != 0:
            raise InadmissibleParameters(f'borel_t0 needs t0 dividing q-1, got {t}')
        weights = {'A0': one, 'A1': one, 'A2': one}
        d = (qf ** 5 - qf ** 4 * t / 2 - 3 * qf ** 4 / 2 + qf ** 3 - qf ** 2 * t / 2
             - qf ** 2 / 2)
        return weights, (t, 1, 1), d, -qf ** 2 * t
    if case == SzCase.SUBFIELD_Q1:
        if t is None or t <= 2 or t & (t - 1) or (t.bit_length() - 1) % 2 == 0 \
                or params.e % (t.bit_length() - 1) != 0 or t == q:
            raise InadmissibleParameters(f'subfield_q1 needs q = q1^k with q1 > 2 and'
                                         f' k > 1, got q1 = {t}')
        weights = {'A0': one}
        d = qf ** 2 * (qf - t) * (qf ** 2 + 1) / 2
        return weights, (t - 1, 1, 1), d, -qf ** 2 * (t - 1)
    if case == SzCase.TORUS_PLUS:
        weights = {'A0': one}
        d = qf ** 5 / 2 - qf ** 4 + qf ** 3 / 2 - qf ** 2
        return weights, (1, 1, 1), d, -qf ** 2
    if case == SzCase.TORUS_MINUS:
        weights = {'A0': one, 'A1': Fraction(2 * (q * q + q + 2), q * q - q + r)}
        d = qf ** 5 - qf ** 4 + qf ** 3 - 2 * qf ** 2
        return weights, (1, 1, 1), d, -qf ** 2
    raise InadmissibleParameters(f'Unknown case {case}')


def _eigenvalue(params: SzParameters, char: SzCharacter,
                weights: Dict[str, Fraction], tori: Tuple[int, int, int]) -> float:
    inventory = params.class_inventory
    at_rho2, at_rho = _value_at_rho(params, char)
    total = float(weights.get('rho2', 0)) * inventory['rho2'][1] * complex(at_rho2).real
    # f(rho) = f(rho^-1), so rho and rho^-1 contribute the real part twice
    total += float(weights.get('rho', 0)) * 2 * inventory['rho'][1] * complex(at_rho).real
    for m in range(3):
        w = float(weights.get(f'A{m}', 0))
        if w == 0:
            continue
        n = params.torus_orders[m]
        step = n // tori[m]
        s = np.arange(1, n)
        s = s[s % step != 0]
        share = params.group_order / params.torus_normalizer_orders[m]
        total += w * share * float(np.sum(_value_on_torus(params, char, m, s)))
    return total / char.degree


def sz_case_spectrum(case, q: int, t: Optional[int] = None,
                     tolerance: float = 1e-9) -> SzCaseSpectrum:
    """Evaluates the weighted spectrum of a stabilizer case at a concrete q.

    Args:
        case (SzCase or str): The case tag.
        q (int): 2^e, e odd >= 3.
        t (Optional[int]):
            t_0 for the `D_2t0_mid`, `Z_t0_mid` and `borel_t0` cases, q_1
            for `subfield_q1`, unused otherwise.
        tolerance (float): Relative tolerance for merging eigenvalues.

    Raises:
        InadmissibleParameters: q or t do not fit the case.
    """
    case = SzCase(case)
    params = SzParameters.from_q(q)
    weights, tori, d_printed, tau_printed = _case_setup(case, params, t)

    by_char = {}
    for char in sz_characters(params):
        by_char[char.name] = _eigenvalue(params, char, weights, tori)
    values = np.array(sorted(by_char.values()))
    scale = max(1.0, float(np.abs(values).max()))
    groups = np.concatenate([[0], np.cumsum(np.diff(values) > tolerance * scale)])
    distinct = np.array([values[groups == g].mean() for g in range(groups[-1] + 1)])

    d = by_char['1']
    tau = float(values[0])
    order = params.group_order
    bound = order / (1 - d / tau)
    printed_bound = Fraction(order) / (1 - d_printed / tau_printed)
    _logger.debug('Case %s at q = %d: d = %.12g, tau = %.12g, bound = %.12g',
                  case.value, q, d, tau, bound)
    return SzCaseSpectrum(case=case, q=q, t=t, weights=weights, fixing_tori=tori,
                          eigenvalue_by_character=by_char, eigenvalues=distinct,
                          d=d, tau=tau, bound=bound, printed_d=d_printed,
                          printed_tau=tau_printed, printed_bound=printed_bound)


def sz_classify(group: GroupTable) -> List[str]:
    """Tags the classes of an enumerated Sz(q) by class family.

    Returns one of '1', 'rho2', 'rho', 'rho_inv', 'A0', 'A1', 'A2' per
    class. Of the two classes of elements of order 4 the one with the
    smaller representative is 'rho'.

    Raises:
        InadmissibleParameters: The class structure does not match Sz(q).
    """
    params = SzParameters.from_group_order(group.order)
    n0, n1, n2 = params.torus_orders
    inverse_class = group.class_of[group.inverse_of[group.class_reps]]
    tags = []
    for c, order in enumerate(group.class_orders):
        order = int(order)
        if order == 1:
            tags.append('1')
        elif order == 2:
            tags.append('rho2')
        elif order == 4:
            tags.append('rho' if c < inverse_class[c] else 'rho_inv')
        elif n0 % order == 0:
            tags.append('A0')
        elif n1 % order == 0:
            tags.append('A1')
        elif n2 % order == 0:
            tags.append('A2')
        else:
            raise InadmissibleParameters(f'Element order {order} does not occur in Sz({params.q})')
    if len(tags) != params.class_count:
        raise InadmissibleParameters(f'Expected {params.class_count} classes, found {len(tags)}')
    return tags


def sz_case_weighting(prof: ActionProfile, case, t: Optional[int] = None) -> ClassWeighting:
    """Builds the case weighting on an enumerated Sz(q) action.

    Fixing classes always weigh 0, so the weighting is compatible with the
    given action whatever its stabilizer.
    """
    case = SzCase(case)
    params = SzParameters.from_group_order(prof.group.order)
    weights, _, _, _ = _case_setup(case, params, t)
    tags = sz_classify(prof.group)
    values = np.zeros(prof.group.class_count)
    for c in prof.derangement_classes:
        tag = 'rho' if tags[c] == 'rho_inv' else tags[c]
        values[c] = float(weights.get(tag, 0))
    return ClassWeighting(values, prof)


class BorelRepresentation(Representation):
    """Elements (alpha, beta, kappa) of Q:K, kappa in GF(q)^x.

    Q multiplies as (a, b)(a1, b1) = (a + a1, a a1^theta + b + b1) and K
    acts by (a, b)^kappa = (a kappa, b kappa^(1 + theta)). A row stands for
    the product q k with q in Q and k in K.
    """

    def __init__(self, fld: FiniteField):
        self.field = fld
        self.theta = theta_exponent(fld)

    @property
    def width(self) -> int:
        return 3

    @property
    def value_bound(self) -> int:
        return self.field.order

    def identity(self) -> npt.NDArray[int]:
        return np.array([0, 0, 1], dtype=np.int64)

    def _conjugate_by_inverse(self, alpha, beta, kappa):
        # k (a, b) k^-1 = (a, b)^(k^-1)
        fld = self.field
        k_inv = fld.inv(kappa)
        return fld.mul(alpha, k_inv), fld.mul(beta, fld.power(k_inv, 1 + self.theta))

    def compose(self, a, b):
        fld = self.field
        a = np.asarray(a, dtype=np.int64).reshape(-1, 3)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64).reshape(-1, 3), a.shape)
        alpha2, beta2 = self._conjugate_by_inverse(b[:, 0], b[:, 1], a[:, 2])
        alpha = fld.add(a[:, 0], alpha2)
        beta = fld.add(fld.add(fld.mul(a[:, 0], fld.power(alpha2, self.theta)), a[:, 1]), beta2)
        return np.stack([alpha, beta, fld.mul(a[:, 2], b[:, 2])], axis=1)

    def invert(self, a):
        fld = self.field
        a = np.asarray(a, dtype=np.int64).reshape(-1, 3)
        # (q k)^-1 = k^-1 q^-1 = (q^-1)^k k^-1
        beta_inv = fld.add(a[:, 1], fld.power(a[:, 0], 1 + self.theta))
        alpha = fld.mul(a[:, 0], a[:, 2])
        beta = fld.mul(beta_inv, fld.power(a[:, 2], 1 + self.theta))
        return np.stack([alpha, beta, fld.inv(a[:, 2])], axis=1)

    def validate(self, rows):
        super().validate(rows)
        if np.any(np.asarray(rows)[:, 2] == 0):
            raise InvalidGenerator('Borel rows need a non-zero kappa')

    def element(self, alpha: int, beta: int, kappa: int = 1) -> npt.NDArray[int]:
        return np.array([alpha, beta, kappa], dtype=np.int64)

    def key(self) -> str:
        return f'borel:2^{self.field.f}'


def sz_borel_group(e: int, cache=None) -> GroupTable:
    """Enumerates the Borel subgroup Q:K of Sz(2^e), of order q^2 (q - 1).

    Raises:
        GroupTooLarge: 2^(3e) exceeds the enumeration cap.
    """
    params = SzParameters(e)
    if params.q ** 3 > 1 << 20:
        raise GroupTooLarge(f'Borel subgroup of Sz({params.q}) is too large to enumerate')
    fld = field_create(2, e)
    rep = BorelRepresentation(fld)
    gens = [rep.element(1 << i, 0) for i in range(e)]
    gens.append(rep.element(0, 1))
    gens.append(rep.element(0, 0, fld.primitive))
    group = close(rep, np.stack(gens), cache=cache)
    if group.order != params.q ** 2 * (params.q - 1):
        raise AssertionError(f'Borel subgroup has order {group.order}')
    return group


def borel_subsets(group: GroupTable) -> Dict[str, npt.NDArray[int]]:
    """Returns the named subsets Q, Z(Q) and K of an enumerated Q:K."""
    rows = group.elements
    return {
        'Q': np.flatnonzero(rows[:, 2] == 1),
        'ZQ': np.flatnonzero((rows[:, 0] == 0) & (rows[:, 2] == 1)),
        'K': np.flatnonzero((rows[:, 0] == 0) & (rows[:, 1] == 0)),
    }


def _unipotent(fld: FiniteField, theta: int, a: int, b: int) -> npt.NDArray[int]:
    # Last row (a^(2+theta) + ab + b^theta, a^(1+theta) + b, a, 1) spans an ovoid point
    a_t = int(fld.power(a, theta))
    a_1t = int(fld.mul(a, a_t))
    corner = int(fld.add(fld.add(fld.mul(a, a_1t), fld.mul(a, b)), fld.power(b, theta)))
    return np.array([
        [1, 0, 0, 0],
        [a, 1, 0, 0],
        [b, a_t, 1, 0],
        [corner, int(fld.add(a_1t, b)), a, 1],
    ], dtype=np.int64)


def sz_matrix_generators(e: int) -> Tuple[FiniteField, List[npt.NDArray[int]]]:
    """Returns 4x4 generator matrices of Sz(2^e) inside Sp(4, 2^e)."""
    params = SzParameters(e)
    fld = field_create(2, e)
    theta = theta_exponent(fld)
    half = 1 << ((params.e - 1) // 2)
    gens = [_unipotent(fld, theta, 1 << i, 0) for i in range(e)]
    gens.append(_unipotent(fld, theta, 0, 1))
    lam = fld.primitive
    exps = [1 + half, half, -half, -1 - half]
    gens.append(np.diag([int(fld.exp(int(fld.log(lam)) * x)) for x in exps]).astype(np.int64))
    gens.append(np.fliplr(np.eye(4, dtype=np.int64)))
    return fld, gens


def _normalize(fld: FiniteField, vectors: npt.NDArray[int]) -> npt.NDArray[int]:
    # Scale each row so its first non-zero coordinate is 1
    first = np.argmax(vectors != 0, axis=1)
    lead = vectors[np.arange(vectors.shape[0]), first]
    return fld.mul(vectors, fld.inv(lead)[:, None])


def sz_ovoid_generators(e: int) -> Tuple[int, npt.NDArray[int]]:
    """Returns Sz(2^e) as permutations of the q^2 + 1 ovoid points.

    The ovoid is the orbit of <e1> under the matrix generators; points are
    numbered in lexicographic order of their normalized coordinates.

    Returns:
        The degree q^2 + 1 and one generator image vector per row.
    """
    params = SzParameters(e)
    if params.e > GROUP_LEVEL_MAX_E:
        raise GroupTooLarge(f'Sz({params.q}) is only handled by formulas')
    fld, mats = sz_matrix_generators(e)
    rep = MatrixRepresentation(fld, 4)

    start = np.array([[1, 0, 0, 0]], dtype=np.int64)
    seen = {tuple(start[0])}
    frontier = start
    while frontier.shape[0]:
        fresh = []
        for m in mats:
            for v in _normalize(fld, rep.act(frontier, m.ravel())):
                key = tuple(int(x) for x in v)
                if key not in seen:
                    seen.add(key)
                    fresh.append(key)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 4)
        if len(seen) > params.q ** 2 + 1:
            raise AssertionError('Matrix generators do not preserve an ovoid')

    points = np.array(sorted(seen), dtype=np.int64)
    if points.shape[0] != params.q ** 2 + 1:
        raise AssertionError(f'Ovoid has {points.shape[0]} points')
    index = {tuple(int(x) for x in p): i for i, p in enumerate(points)}
    perms = []
    for m in mats:
        images = _normalize(fld, rep.act(points, m.ravel()))
        perms.append([index[tuple(int(x) for x in v)] for v in images])
    return points.shape[0], np.array(perms, dtype=np.int64)


def sz_group(e: int, cache=None) -> GroupTable:
    """Enumerates Sz(2^e) on its ovoid, checking order and class count."""
    params = SzParameters(e)
    degree, gens = sz_ovoid_generators(e)
    group = close_group(degree, gens, cache=cache)
    verify_sz_group(group, params)
    return group


def verify_sz_group(group: GroupTable, params: Optional[SzParameters] = None) -> SzParameters:
    """Checks order, class count and involution count of an ingested Sz(q)."""
    params = params if params is not None else SzParameters.from_group_order(group.order)
    if group.order != params.group_order:
        raise InadmissibleParameters(f'Order {group.order} is not |Sz({params.q})|')
    if group.class_count != params.class_count:
        raise InadmissibleParameters(f'Found {group.class_count} classes,'
                                     f' expected {params.class_count}')
    involutions = int(np.count_nonzero(group.order_of == 2))
    if involutions != params.class_inventory['rho2'][1]:
        raise InadmissibleParameters(f'Found {involutions} involutions')
    return params


def sz_family_sizes(group: GroupTable) -> Dict[str, int]:
    """Returns the number of elements per class family of an enumerated Sz(q)."""
    counts: Dict[str, int] = {}
    for c, tag in enumerate(sz_classify(group)):
        counts[tag] = counts.get(tag, 0) + int(group.class_sizes[c])
    return counts
