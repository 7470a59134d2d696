import json
import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .config import Config
from .derangement import (ActionProfile, RhoCertificate, RhoValue, UpperBound, certify_rho,
                          profile)
from .errors import DegenerateSpectrum, GroupTooLarge, NoConvergence, Unbounded
from .perm import TransitiveAction
from .solver import EXACT_MAX_VERTICES, DerangementGraph, SearchResult, Solver
from .spectra import ClassWeighting, Spectra, SpectrumReport, unit_weighting

_logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS: int = 12


def sig(value: float) -> float:
    """Rounds to 12 significant digits, the precision of every reported float."""
    return float(f'{float(value):.{SIGNIFICANT_DIGITS}g}')


def exact_value(value: Any) -> Any:
    # Exact values are reported as a float and a string
    if isinstance(value, RhoValue):
        return {'value': sig(value.value), 'exact': value.render()}
    if isinstance(value, Fraction):
        return {'value': sig(value), 'exact': str(value)}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return sig(value)
    return value


@dataclass
class AnalysisReport:
    """The machine-readable outcome of one analysis run.

    Sections are plain JSON-compatible dicts in a fixed key order, so the
    serialized form is stable and `from_json(to_json(r)) == r`.
    """

    source: str
    group: Dict[str, int]
    derangements: Dict[str, Any]
    spectrum: Optional[Dict[str, Any]] = None
    hoffman: Optional[Dict[str, Any]] = None
    solver: Optional[Dict[str, Any]] = None
    certificate: Optional[Dict[str, Any]] = None
    expected: Dict[str, Any] = field(default_factory=dict)
    # Wall times in ms, omitted unless requested since they differ per run
    timings: Optional[Dict[str, float]] = None

    def to_json(self, **kwargs) -> str:
        indent = kwargs.pop('indent', 4)  # Indent with 4 spaces by default
        return json.dumps(asdict(self), indent=indent, ensure_ascii=False, **kwargs)

    @staticmethod
    def from_json(dump: str) -> 'AnalysisReport':
        return AnalysisReport(**json.loads(dump))

    @property
    def passed(self) -> bool:
        """False if an expected value was checked and missed."""
        return all(entry['ok'] is not False for entry in self.expected.values())


def group_section(action: TransitiveAction) -> Dict[str, int]:
    return {
        'order': int(action.group.order),
        'degree': int(action.omega_size),
        'stabilizer_order': int(action.stabilizer_order),
        'class_count': int(action.group.class_count),
    }


def derangement_section(prof: ActionProfile) -> Dict[str, Any]:
    group = prof.group
    return {
        'derangement_count': int(prof.derangement_count),
        'fixing_classes': [int(c) for c in prof.fixing_classes],
        'derangement_classes': [int(c) for c in prof.derangement_classes],
        'derangement_class_orders': [int(group.class_orders[c])
                                     for c in prof.derangement_classes],
        'derangement_class_sizes': [int(group.class_sizes[c])
                                    for c in prof.derangement_classes],
    }


def spectrum_section(report: SpectrumReport) -> Dict[str, Any]:
    return {
        'eigenvalues': [sig(v) for v in report.eigenvalues],
        'd': sig(report.d),
        'tau': sig(report.tau),
        'hoffman_bound': sig(report.hoffman_bound) if report.hoffman_bound is not None else None,
    }


def solver_section(result: SearchResult) -> Dict[str, Any]:
    return {
        'size': result.size,
        'optimal': bool(result.optimal),
        'upper_bound_used': sig(result.upper_bound_used),
        'nodes_explored': int(result.nodes_explored),
        'time_limit_hit': bool(result.time_limit_hit),
        'best_set': [int(v) for v in result.best_set],
    }


def certificate_section(cert: RhoCertificate) -> Dict[str, Any]:
    return {
        'lower_size': cert.lower_size,
        'upper_bound': int(cert.upper_bound),
        'upper_kind': cert.upper_kind.name,
        'upper_raw': sig(cert.upper_raw),
        'rho_lower': exact_value(cert.rho_lower),
        'rho_upper': exact_value(cert.rho_upper),
        'tight': bool(cert.tight),
        'gap': sig(cert.gap),
    }


def _matches(expected: Any, computed: Any, tolerance: float) -> bool:
    if isinstance(expected, RhoValue) and isinstance(computed, RhoValue):
        return expected.radicand == computed.radicand
    if isinstance(expected, (bool, str)) or isinstance(computed, (bool, str)):
        return expected == computed
    expected = float(expected)
    return abs(float(computed) - expected) <= tolerance * max(1.0, abs(expected))


def compare_expected(expected: Dict[str, Any], computed: Dict[str, Any],
                     tolerance: float = 1e-6) -> Dict[str, Any]:
    """Matches expected values against computed ones.

    Args:
        expected (Dict[str, Any]): Name -> ExpectedValue (value and source).
        computed (Dict[str, Any]): Name -> computed value, missing when not computed.
        tolerance (float): Relative tolerance for floats; exact values compare exactly.

    Returns:
        Name -> {expected, computed, ok, source}, with `ok` None if nothing was computed.
    """
    section = {}
    for name, entry in expected.items():
        value = computed.get(name)
        ok = None if value is None else bool(_matches(entry.value, value, tolerance))
        section[name] = {
            'expected': exact_value(entry.value),
            'computed': exact_value(value),
            'ok': ok,
            'source': entry.source,
        }
    return section


@dataclass
class Analysis:
    """The in-memory results behind an `AnalysisReport`."""

    profile: ActionProfile
    unit_spectrum: Optional[SpectrumReport] = None
    optimized: Optional[Tuple[ClassWeighting, float]] = None
    search: Optional[SearchResult] = None
    certificate: Optional[RhoCertificate] = None
    bounds: List[UpperBound] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    def computed_values(self) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        if self.certificate is not None:
            cert = self.certificate
            values['rho'] = cert.rho_lower
            values['upper_bound'] = cert.upper_bound
            if cert.tight:
                values['max_intersecting'] = cert.upper_bound
        if self.search is not None and self.search.optimal:
            values['max_intersecting'] = self.search.size
        return values


def analyze(action: TransitiveAction,
            cfg: Optional[Config] = None,
            lower_witness: Optional[Sequence[int]] = None,
            upper_bounds: Sequence[UpperBound] = (),
            exact: bool = False,
            optimize: bool = True,
            prof: Optional[ActionProfile] = None) -> Analysis:
    """Runs profile, spectra, Hoffman bounds, the optional exact solver and the certificate.

    The point stabilizer is the lower witness unless a larger intersecting
    subset is given or found by the solver.

    Raises:
        InconsistentCertificate: A witness contradicts an upper bound.
    """
    cfg = cfg if cfg is not None else Config()
    workers = cfg.max_workers
    result = Analysis(profile=prof if prof is not None else profile(action, verify=True))
    prof = result.profile

    tic = time.time()
    if prof.derangement_count:
        try:
            result.unit_spectrum = Spectra.eigenvalues(
                Spectra.collapse(unit_weighting(prof), workers), tolerance=cfg.eigen_tolerance)
        except DegenerateSpectrum as ex:
            _logger.warning('Unit spectrum: %s', ex)
        if result.unit_spectrum is not None and result.unit_spectrum.hoffman_bound is not None:
            result.bounds.append(UpperBound(UpperBound.Kind.HOFFMAN,
                                            result.unit_spectrum.hoffman_bound, 'unit weights'))
        if optimize:
            try:
                result.optimized = Spectra.optimize_weights(prof, cfg.lp_params, workers)
                result.bounds.append(UpperBound(UpperBound.Kind.HOFFMAN, result.optimized[1],
                                                'optimized weights'))
            except (Unbounded, NoConvergence, DegenerateSpectrum) as ex:
                _logger.warning('Weight optimization failed: %s', ex)
    result.timings['spectra'] = 1e3 * (time.time() - tic)
    result.bounds.extend(upper_bounds)

    witness = np.asarray(lower_witness if lower_witness is not None else action.stabilizer,
                         dtype=np.int64)
    if exact:
        tic = time.time()
        if action.group.order > EXACT_MAX_VERTICES:
            raise GroupTooLarge(f'Exact search limited to {EXACT_MAX_VERTICES} elements')
        graph = DerangementGraph(prof)
        prune = min((b.value for b in result.bounds), default=None)
        result.search = Solver.max_coclique(graph, prune_bound=prune,
                                            params=cfg.solver_params, worker_count=workers,
                                            initial=_initial(graph, witness))
        if result.search.size > witness.size:
            witness = result.search.best_set
        bound = result.search.as_upper_bound()
        if bound is not None:
            result.bounds.append(bound)
        result.timings['solver'] = 1e3 * (time.time() - tic)

    result.certificate = certify_rho(prof, witness, result.bounds,
                                     tolerance=cfg.compare_tolerance)
    return result


def _initial(graph: DerangementGraph, witness: npt.NDArray[int]) -> npt.NDArray[int]:
    # The solver needs an incumbent through the identity
    if witness.size and witness.min() == 0 and graph.is_coclique(witness):
        return witness
    return graph.profile.action.stabilizer


def build_report(source: str, action: TransitiveAction, result: Analysis,
                 expected: Optional[Dict[str, Any]] = None,
                 measured: Optional[Dict[str, Any]] = None,
                 tolerance: float = 1e-6,
                 timings: bool = False) -> AnalysisReport:
    report = AnalysisReport(
        source=source,
        group=group_section(action),
        derangements=derangement_section(result.profile),
    )
    if result.unit_spectrum is not None:
        report.spectrum = spectrum_section(result.unit_spectrum)
    hoffman = {}
    if result.unit_spectrum is not None and result.unit_spectrum.hoffman_bound is not None:
        hoffman['unit'] = sig(result.unit_spectrum.hoffman_bound)
    if result.optimized is not None:
        weighting, bound = result.optimized
        hoffman['optimized'] = sig(bound)
        hoffman['optimized_weights'] = {str(k): sig(v)
                                        for k, v in weighting.as_dict().items()}
    report.hoffman = hoffman or None
    if result.search is not None:
        report.solver = solver_section(result.search)
    if result.certificate is not None:
        report.certificate = certificate_section(result.certificate)
    if expected:
        computed = dict(measured or {})
        computed.update(result.computed_values())
        report.expected = compare_expected(expected, computed, tolerance)
    if timings:
        report.timings = {k: sig(v) for k, v in result.timings.items()}
    return report
