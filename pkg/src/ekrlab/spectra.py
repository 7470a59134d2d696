import logging
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import linprog

from .derangement import ActionProfile, UpperBound
from .errors import (DegenerateSpectrum, GroupTooLarge, IncompatibleWeighting,
                     NoConvergence, NonRealSpectrum, Unbounded)
from .perm import GroupTable

_logger = logging.getLogger(__name__)

FULL_MATRIX_MAX_ORDER: int = 200
EIGEN_TOLERANCE: float = 1e-7
WEIGHT_TOLERANCE: float = 1e-12


def class_inverse(group: GroupTable) -> npt.NDArray[int]:
    """Returns the class index of c^-1 for every class c."""
    return group.class_of[group.inverse_of[group.class_reps]]


@dataclass
class ClassWeighting:
    """A compatible class function f, one weight per conjugacy class.

    Weights vanish on fixing classes and agree on mutually inverse classes,
    so the matrix M[g1, g2] = f(g1^-1 g2) is a symmetric weighted adjacency
    matrix of the derangement graph.
    """

    weights: npt.NDArray[float]
    profile: ActionProfile

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        group = self.profile.group
        if self.weights.shape != (group.class_count,):
            raise IncompatibleWeighting('Need one weight per conjugacy class')
        if np.any(np.abs(self.weights[self.profile.fixing_classes]) > WEIGHT_TOLERANCE):
            raise IncompatibleWeighting('Weights must vanish on fixing classes')
        if np.any(np.abs(self.weights - self.weights[class_inverse(group)]) > WEIGHT_TOLERANCE):
            raise IncompatibleWeighting('Weights must agree on inverse classes')

    @property
    def total(self) -> float:
        """Returns d = sum of f(g) over the group."""
        return float(np.dot(self.weights, self.profile.group.class_sizes))

    def scaled(self, factor: float) -> 'ClassWeighting':
        return ClassWeighting(self.weights * factor, self.profile)

    def as_dict(self) -> Dict[int, float]:
        return {int(c): float(self.weights[c]) for c in np.flatnonzero(self.weights)}


def unit_weighting(prof: ActionProfile) -> ClassWeighting:
    """Returns the plain adjacency matrix weighting."""
    weights = np.zeros(prof.group.class_count)
    weights[prof.derangement_classes] = 1.0
    return ClassWeighting(weights, prof)


def weighting_from_predicate(prof: ActionProfile,
                             func: Callable[[GroupTable, int], float]) -> ClassWeighting:
    """Builds a weighting by evaluating `func(group, class index)` on derangement classes."""
    weights = np.zeros(prof.group.class_count)
    for c in prof.derangement_classes:
        weights[c] = float(func(prof.group, int(c)))
    return ClassWeighting(weights, prof)


def weighting_from_orders(prof: ActionProfile,
                          by_order: Dict[int, float],
                          default: float = 0.0) -> ClassWeighting:
    """Weights each derangement class by the order of its elements."""
    orders = prof.group.class_orders
    return weighting_from_predicate(
        prof, lambda _group, c: by_order.get(int(orders[c]), default))


def weighting_from_dict(prof: ActionProfile, weights: Dict[int, float]) -> ClassWeighting:
    """Builds a weighting from explicit class weights, missing classes weigh 0."""
    values = np.zeros(prof.group.class_count)
    for c, w in weights.items():
        if not 0 <= int(c) < values.size:
            raise IncompatibleWeighting(f'No conjugacy class {c}')
        values[int(c)] = float(w)
    return ClassWeighting(values, prof)


@dataclass
class CollapsedMatrix:
    """The weighted class sum acting on the class algebra.

    Column i holds the coordinates of T * K_i in the class sum basis, where
    T = sum f(s) s and K_i is the i-th class sum, so
    ``matrix[j, i] = sum over s of f(s) [s^-1 z_j in C_i]`` with z_j the
    representative of class j.
    """

    matrix: npt.NDArray[float]
    weighting: ClassWeighting

    @property
    def n(self) -> int:
        return self.weighting.profile.group.order


@dataclass
class SpectrumReport:
    # Distinct eigenvalues in ascending order.
    eigenvalues: npt.NDArray[float]
    # One eigenvalue per conjugacy class (with repetitions).
    all_eigenvalues: npt.NDArray[float]
    # The common row sum.
    d: float
    # The least eigenvalue.
    tau: float
    # Number of vertices |G|.
    n: int
    # n / (1 - d / tau) or None when undefined.
    hoffman_bound: Optional[float] = None


class Spectra:
    """Class algebra spectra, Delsarte-Hoffman bounds and weight optimization."""

    @dataclass
    class LpParams:
        # A max. number of cutting plane rounds.
        max_rounds: int = 100
        # A tolerance on violated eigenvalue constraints.
        tolerance: float = 1e-8
        # A seed of the random combination used for joint diagonalization.
        seed: int = 0

    @staticmethod
    def collapse(weighting: ClassWeighting, worker_count: int = 1) -> CollapsedMatrix:
        """Builds the collapsed class matrix of a weighting.

        Args:
            weighting (ClassWeighting): A compatible weighting.
            worker_count (int):
                Number of threads scanning the weighted support. If it is
                0 or less, the number of CPUs is used.

        Returns:
            The k x k matrix, k = number of conjugacy classes.
        """
        prof = weighting.profile
        group = prof.group
        k = group.class_count
        w_elem = weighting.weights[group.class_of]
        support = np.flatnonzero(np.abs(w_elem) > WEIGHT_TOLERANCE)
        support_inv = group.inverse_of[support]
        support_w = w_elem[support]

        def row(j: int) -> npt.NDArray[float]:
            if support.size == 0:
                return np.zeros(k)
            classes = group.class_of[group.mul_many(support_inv, int(group.class_reps[j]))]
            return np.bincount(classes, weights=support_w, minlength=k)

        if worker_count == 1 or k == 1:
            rows = [row(j) for j in range(k)]
        else:
            with ThreadPool(processes=worker_count if worker_count > 0 else None) as pool:
                rows = pool.map(row, range(k))
        matrix = np.stack(rows)

        d = weighting.total
        scale = max(1.0, float(np.abs(support_w).sum()))
        if np.any(np.abs(matrix.sum(axis=1) - d) > 1e-9 * scale):
            raise AssertionError('Collapsed matrix rows do not share the common sum')
        _logger.debug('Collapsed %d weighted elements onto %d classes', support.size, k)
        return CollapsedMatrix(matrix, weighting)

    @staticmethod
    def eigenvalues(collapsed: CollapsedMatrix,
                    tolerance: float = EIGEN_TOLERANCE) -> SpectrumReport:
        """Returns the spectrum of the weighted adjacency matrix.

        Raises:
            NonRealSpectrum: An eigenvalue has a non-negligible imaginary part.
        """
        matrix = collapsed.matrix
        if not np.all(np.isfinite(matrix)):
            raise NonRealSpectrum('Collapsed matrix has non-finite entries')
        values = np.linalg.eigvals(matrix)
        scale = max(1.0, float(np.abs(values).max(initial=0.0)))
        if np.any(np.abs(values.imag) > tolerance * scale):
            raise NonRealSpectrum('Spectrum is not real, the weighting is not symmetric')
        values = np.sort(values.real)

        distinct = _distinct(values, tolerance * scale)
        d = collapsed.weighting.total
        tau = float(values[0])
        report = SpectrumReport(eigenvalues=distinct, all_eigenvalues=values, d=d,
                                tau=tau, n=collapsed.n)
        if tau < 0 < d:
            report.hoffman_bound = Spectra.hoffman(report)
        return report

    @staticmethod
    def hoffman(report: SpectrumReport, n: Optional[int] = None) -> float:
        """Returns the Delsarte-Hoffman bound n / (1 - d / tau).

        Raises:
            DegenerateSpectrum: tau >= 0 or d <= 0.
        """
        n = report.n if n is None else n
        if report.tau >= 0 or report.d <= 0:
            raise DegenerateSpectrum(f'Hoffman bound needs tau < 0 < d'
                                     f' (d = {report.d}, tau = {report.tau})')
        return n / (1.0 - report.d / report.tau)

    @staticmethod
    def hoffman_bound(weighting: ClassWeighting, worker_count: int = 1,
                      note: str = '') -> UpperBound:
        """Runs collapse, eigenvalues and hoffman for a weighting."""
        report = Spectra.eigenvalues(Spectra.collapse(weighting, worker_count))
        return UpperBound(UpperBound.Kind.HOFFMAN, Spectra.hoffman(report), note=note)

    @staticmethod
    def full_matrix_spectrum(weighting: ClassWeighting,
                             tolerance: float = 1e-6) -> npt.NDArray[float]:
        """Returns the distinct eigenvalues of the dense |G| x |G| matrix.

        Raises:
            GroupTooLarge: The group has more than 200 elements.
        """
        group = weighting.profile.group
        if group.order > FULL_MATRIX_MAX_ORDER:
            raise GroupTooLarge(f'Dense spectrum limited to order {FULL_MATRIX_MAX_ORDER}')
        everything = np.arange(group.order)
        ratios = group.mul_many(group.inverse_of[everything][:, None], everything[None, :])
        matrix = weighting.weights[group.class_of[ratios]]
        values = np.linalg.eigvalsh(matrix)
        scale = max(1.0, float(np.abs(values).max(initial=0.0)))
        return _distinct(values, tolerance * scale)

    @staticmethod
    def optimize_weights(prof: ActionProfile,
                         params: Optional['Spectra.LpParams'] = None,
                         worker_count: int = 1) -> Tuple[ClassWeighting, float]:
        """Minimizes the Hoffman bound over symmetric compatible class functions.

        Variables are the weights of inverse-closed derangement class pairs.
        With d(f) = 1 the bound is n / (1 + 1 / t) for the least eigenvalue
        -t, so the linear program minimizes t subject to every non-trivial
        eigenvalue functional staying above -t. The functionals come from a
        joint eigenbasis of the pair class sums; after each solve the true
        spectrum is recomputed and violated functionals are added.

        Args:
            prof (ActionProfile): The action.
            params (Optional[Spectra.LpParams]): Cutting plane settings.
            worker_count (int): Threads used by `collapse`.

        Returns:
            The optimal weighting (scaled to max. absolute weight 1) and its
            Hoffman bound.

        Raises:
            Unbounded: There are no derangement classes.
            NoConvergence: The cutting planes did not settle.
        """
        params = params if params is not None else Spectra.LpParams()
        group = prof.group
        inv = class_inverse(group)
        pairs: List[Tuple[int, ...]] = []
        for c in prof.derangement_classes:
            c = int(c)
            if inv[c] >= c:
                pairs.append((c,) if inv[c] == c else (c, int(inv[c])))
        if not pairs:
            raise Unbounded('No derangement classes to weight')

        def pair_weighting(coefs) -> ClassWeighting:
            weights = np.zeros(group.class_count)
            for p, coef in zip(pairs, coefs):
                weights[list(p)] = coef
            return ClassWeighting(weights, prof)

        basis = [Spectra.collapse(pair_weighting(np.eye(len(pairs))[i]), worker_count).matrix
                 for i in range(len(pairs))]
        sizes = np.array([b.sum(axis=1)[0] for b in basis])

        if len(pairs) == 1:
            weighting = pair_weighting([1.0])
            return weighting, Spectra.hoffman(Spectra.eigenvalues(
                Spectra.collapse(weighting, worker_count)))

        rng = np.random.default_rng(params.seed)
        cuts = np.zeros((0, len(pairs)))
        mix = rng.uniform(1.0, 2.0, size=len(pairs))
        for rnd in range(params.max_rounds):
            cuts = np.concatenate([cuts, _eigen_functionals(basis, sizes, mix)])
            n_var = len(pairs) + 1
            cost = np.zeros(n_var)
            cost[-1] = 1.0
            # -lambda(f) - t <= 0
            a_ub = np.hstack([-cuts, -np.ones((cuts.shape[0], 1))])
            b_ub = np.zeros(cuts.shape[0])
            a_eq = np.append(sizes, 0.0)[None, :]
            result = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                             bounds=[(None, None)] * n_var, method='highs')
            if result.status == 3:
                raise Unbounded('Weight optimization is unbounded')
            if result.status != 0:
                raise NoConvergence(f'Linear program failed: {result.message}')

            coefs = result.x[:-1]
            t = float(result.x[-1])
            weighting = pair_weighting(coefs)
            report = Spectra.eigenvalues(Spectra.collapse(weighting, worker_count))
            _logger.debug('LP round %d: t = %.12g, tau = %.12g', rnd + 1, t, report.tau)
            if report.tau >= -t - params.tolerance * max(1.0, abs(t)):
                scale = float(np.abs(weighting.weights).max())
                best = weighting.scaled(1.0 / scale)
                return best, Spectra.hoffman(report)
            # Mix the offending solution into the next joint eigenbasis
            mix = coefs / np.abs(coefs).max() + 1e-3 * rng.uniform(1.0, 2.0, size=len(pairs))

        raise NoConvergence(f'No convergence after {params.max_rounds} cutting plane rounds')


def _distinct(values: npt.NDArray[float], tolerance: float) -> npt.NDArray[float]:
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return values
    groups = np.concatenate([[0], np.cumsum(np.diff(values) > tolerance)])
    return np.array([values[groups == g].mean() for g in range(groups[-1] + 1)])


def _eigen_functionals(basis: List[npt.NDArray[float]],
                       sizes: npt.NDArray[float],
                       mix: npt.NDArray[float]) -> npt.NDArray[float]:
    """Returns lambda_chi(pair) for every non-trivial joint eigenvector.

    The pair class sums are central, so they commute and a generic
    combination of them is diagonalized by the common eigenvectors.
    """
    combo = sum(m * b for m, b in zip(mix, basis))
    _, vectors = np.linalg.eig(combo)
    values = np.stack([np.linalg.solve(vectors, b @ vectors).diagonal() for b in basis], axis=1)
    values = values.real
    trivial = int(np.argmin(np.abs(values - sizes[None, :]).sum(axis=1)))
    return np.delete(values, trivial, axis=0)
