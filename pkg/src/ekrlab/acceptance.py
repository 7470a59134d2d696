"""The acceptance suite: desk-scale instances of the library's headline results.

Each check builds its groups from scratch, runs the relevant pipeline and
records failures through a `CheckContext`. Checks are numbered 1..12 and
tagged by the module they exercise, so the CLI can filter them.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import field_create
from .config import Config
from .constructions import (ConstructionOutput, build_affine_tower, build_agl1_sharply_transitive,
                            build_product_action, build_psl2_even, build_psu3_example,
                            build_suzuki_borel_example, build_table2, SZ8_STABILIZER_CASES)
from .derangement import (RhoValue, UpperBound, certify_rho, factorization_check,
                          find_semiregular_element, is_intersecting, is_semiregular, profile)
from .errors import GroupTooLarge
from .perm import MatrixRepresentation, close, close_group, coset_action
from .solver import DerangementGraph, Solver
from .spectra import Spectra, unit_weighting
from .subgroups import find_subgroup
from .suzuki import (sz_case_spectrum, sz_case_weighting, sz_character_checks, sz_group,
                     verify_sz_group)

_logger = logging.getLogger(__name__)

# Random triples per field in the algebra property check
FIELD_SAMPLE_SIZE: int = 1024


class CheckContext:
    """Collects failures and notes of a running check."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.failures: List[str] = []
        self.notes: List[str] = []

    def expect(self, condition: bool, message: str) -> bool:
        if not condition:
            self.failures.append(message)
            _logger.debug('Failed: %s', message)
        return bool(condition)

    def expect_equal(self, computed, expected, what: str) -> bool:
        return self.expect(computed == expected, f'{what}: got {computed}, expected {expected}')

    def expect_close(self, computed: float, expected: float, what: str) -> bool:
        tol = self.cfg.compare_tolerance * max(1.0, abs(float(expected)))
        return self.expect(abs(float(computed) - float(expected)) <= tol,
                           f'{what}: got {computed}, expected {float(expected)}')

    def note(self, message: str):
        self.notes.append(message)


@dataclass
class Check:
    id: int
    tags: Tuple[str, ...]
    title: str
    func: Callable[[CheckContext], None]


@dataclass
class CheckResult:
    check: Check
    passed: bool
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    elapsed_ms: float = 0.0


def _verify_roles(ctx: CheckContext, out: ConstructionOutput):
    for name, ok in out.verify().items():
        ctx.expect(ok, f'{out.name}: subset {name} is not {out.roles.get(name, "subgroup")}')


def _expect_rho(ctx: CheckContext, computed: RhoValue, radicand: Fraction, what: str):
    ctx.expect(computed.radicand == radicand,
               f'{what}: got {computed.render()}, expected {RhoValue(radicand).render()}')


def _exact_coclique(ctx: CheckContext, out: ConstructionOutput, prune: Optional[float] = None):
    graph = DerangementGraph(out.profile)
    result = Solver.max_coclique(graph, prune_bound=prune, params=ctx.cfg.solver_params,
                                 worker_count=ctx.cfg.max_workers)
    ctx.note(f'{out.name}: coclique {result.size}, optimal {result.optimal},'
             f' {result.nodes_explored} nodes')
    return result


def check_psl2_4(ctx: CheckContext):
    out = build_psl2_even(2)
    _verify_roles(ctx, out)
    ctx.expect_equal(out.action.omega_size, 10, 'degree')
    hoffman = Spectra.hoffman_bound(unit_weighting(out.profile))
    ctx.expect_close(hoffman.value, 12, 'unit Hoffman bound')
    ctx.expect_equal(hoffman.integral(), 12, 'floored unit Hoffman bound')
    result = _exact_coclique(ctx, out)
    ctx.expect(result.optimal and result.size == 12, f'max coclique {result.size} != 12')
    cert = out.certificate([hoffman])
    ctx.expect(cert.tight, 'certificate is not tight')
    _expect_rho(ctx, cert.rho_lower, Fraction(2, 5), 'rho')


def check_psl2_8(ctx: CheckContext):
    out = build_psl2_even(3)
    _verify_roles(ctx, out)
    ctx.expect_equal(out.action.omega_size, 36, 'degree')
    result = _exact_coclique(ctx, out)
    ctx.expect(result.optimal and result.size == 56, f'max coclique {result.size} != 56')
    cert = out.certificate()
    ctx.expect(cert.tight, 'certificate is not tight')
    _expect_rho(ctx, cert.rho_lower, Fraction(4, 9), 'rho')


def check_agl1_9(ctx: CheckContext):
    out = build_agl1_sharply_transitive(9)
    _verify_roles(ctx, out)
    ctx.expect_equal(out.named_subsets['R'].size, 36, '|R|')
    ctx.expect(is_semiregular(out.profile, out.named_subsets['R']), 'R is not semiregular')
    result = _exact_coclique(ctx, out)
    ctx.expect(result.optimal and result.size == 2, f'max coclique {result.size} != 2')
    cert = out.certificate()
    ctx.expect(cert.tight and cert.upper_bound == 2, 'EKR certificate is not tight')


def check_table2_small(ctx: CheckContext):
    expected = {1: Fraction(10, 3), 2: Fraction(10, 3), 5: Fraction(2)}
    for row, radicand in expected.items():
        out = build_table2(row)
        _verify_roles(ctx, out)
        ctx.notes.extend(f'row {row}: {n}' for n in out.notes)
        extra: List[UpperBound] = []
        if 'R' not in out.named_subsets:
            result = _exact_coclique(ctx, out)
            bound = result.as_upper_bound()
            if bound is not None:
                extra.append(bound)
        cert = out.certificate(extra)
        ctx.expect(cert.tight, f'row {row}: certificate is not tight'
                               f' ({cert.lower_size} < {cert.upper_bound})')
        _expect_rho(ctx, cert.rho_lower, radicand, f'row {row} rho')
        if 'R' in out.named_subsets:
            ctx.expect(factorization_check(out.group, out.named_subsets['R'],
                                           out.named_subsets['S']), f'row {row}: G != RS')


def check_table2_large(ctx: CheckContext):
    for row in (3, 4):
        out = build_table2(row)
        s = out.named_subsets['S']
        ctx.expect(is_intersecting(out.profile, s), f'row {row}: S is not intersecting')
        bounds = []
        r = find_semiregular_element(out.profile)
        if r is not None:
            bounds.append(UpperBound(UpperBound.Kind.SEMIREGULAR_CLIQUE,
                                     out.group.order / r.size, f'|R| = {r.size}'))
        cert = certify_rho(out.profile, s, bounds, check=False)
        _expect_rho(ctx, cert.rho_lower, Fraction(58, 15), f'row {row} rho lower')
        ctx.note(f'row {row}: upper bound {cert.upper_bound} ({cert.upper_kind.name}),'
                 f' gap {cert.gap:.6g}')


def check_product(ctx: CheckContext):
    out = build_product_action(build_psl2_even(2), 2)
    _verify_roles(ctx, out)
    s = out.named_subsets['S']
    r = out.named_subsets['R']
    ctx.expect_equal(out.group.order, 7200, '|G|')
    ctx.expect_equal(s.size, 288, '|S|')
    ctx.expect_equal(r.size, 25, '|R|')
    ctx.expect_equal(r.size * s.size, out.group.order, '|R||S|')
    cert = out.certificate()
    ctx.expect(cert.tight, 'certificate is not tight')
    _expect_rho(ctx, cert.rho_lower, Fraction(4, 25), 'rho')


def check_suzuki_cases(ctx: CheckContext):
    table = sz_group(3)
    printed = {
        'D_2q-1': Fraction(224),
        'Z_q-1': Fraction(8 * 7 * 7, 2),
        'borel_order4_exponent': Fraction(64),
        'torus_plus': Fraction(1040, 7),
        'torus_minus': Fraction(64),
    }
    tol = ctx.cfg.compare_tolerance
    for (order, shape), case in SZ8_STABILIZER_CASES.items():
        spectrum = sz_case_spectrum(case, 8)
        ctx.expect_equal(spectrum.printed_bound, printed[case.value], f'{case.value} bound')
        ctx.expect(spectrum.consistent(tol), f'{case.value}: closed forms disagree')
        h = find_subgroup(table, order, shape)
        prof = profile(coset_action(table, h), verify=False)
        weighting = sz_case_weighting(prof, case)
        report = Spectra.eigenvalues(Spectra.collapse(weighting), ctx.cfg.eigen_tolerance)
        closed = np.unique(np.round(np.asarray(spectrum.eigenvalues, dtype=float), 6))
        got = np.unique(np.round(report.eigenvalues, 6))
        scale = max(1.0, float(np.abs(closed).max()))
        same = closed.size == got.size and np.allclose(got, closed, rtol=tol, atol=tol * scale)
        ctx.expect(same, f'{case.value}: eigenvalues {got.tolist()} != {closed.tolist()}')
        ctx.expect_close(Spectra.hoffman(report), spectrum.printed_bound,
                         f'{case.value} Hoffman bound')


def check_suzuki_sanity(ctx: CheckContext):
    table = sz_group(3)
    verify_sz_group(table)
    ctx.expect_equal(table.order, 29120, '|Sz(8)|')
    ctx.expect_equal(table.class_count, 11, 'class count')
    involutions = int(np.count_nonzero(table.order_of == 2))
    ctx.expect_equal(involutions, 455, 'involutions')
    chars = sz_character_checks(8, tolerance=ctx.cfg.compare_tolerance)
    ctx.expect_equal(chars.degree_square_sum, 29120, 'sum of squared degrees')
    ctx.expect(chars.ok, f'character table checks failed'
                         f' (orthogonality error {chars.orthogonality_error:.3g})')


def check_suzuki_borel(ctx: CheckContext):
    out = build_suzuki_borel_example(3)
    _verify_roles(ctx, out)
    ctx.expect_equal(out.named_subsets['S'].size, 64, '|Q|')
    cert = out.certificate()
    ctx.expect(cert.tight, 'certificate is not tight')
    _expect_rho(ctx, cert.rho_lower, Fraction(16, 7), 'rho')
    ctx.expect(cert.rho_lower.value > 1, 'rho does not exceed 1')


def check_psu3(ctx: CheckContext):
    q = 7
    out = build_psu3_example(q)
    _verify_roles(ctx, out)
    fld = field_create(q, 2)
    zq = out.group.elements[out.named_subsets['ZQ']]
    ctx.expect_equal(zq.shape[0], q, '|Z(Q)|')
    a = zq[:, 1]
    ctx.expect(np.all(fld.add(a, fld.power(a, q)) == 0), 'Z(Q) violates a + a^q = 0')
    ctx.expect_equal(out.measured().get('noncentral_class_size'), q * (q * q - 1),
                     'non-central class size')
    cert = out.certificate()
    ctx.expect(cert.tight, 'certificate is not tight')
    _expect_rho(ctx, cert.rho_lower, Fraction(1, 48), 'rho')


def check_affine_tower(ctx: CheckContext):
    for p in (3, 5):
        out = build_affine_tower(p)
        _verify_roles(ctx, out)
        cert = certify_rho(out.profile, out.named_subsets['S'])
        _expect_rho(ctx, cert.rho_lower, Fraction(p, p + 1), f'p = {p} rho lower')
        if p == 3:
            result = _exact_coclique(ctx, out)
            bound = result.as_upper_bound()
            cert = out.certificate([bound] if bound is not None else [])
            ctx.note(f'p = 3: exact {result.size}, tight {cert.tight}, gap {cert.gap:.6g}')


def _random_groups(rng: np.random.Generator, count: int, max_order: int = 360):
    found = 0
    attempts = 0
    while found < count and attempts < 50 * count:
        attempts += 1
        degree = int(rng.integers(4, 7))
        gens = np.stack([rng.permutation(degree) for _ in range(2)])
        try:
            group = close_group(degree, gens, cap=max_order)
        except GroupTooLarge:
            continue
        if group.order < 4:
            continue
        found += 1
        yield group


def check_properties(ctx: CheckContext):
    rng = np.random.default_rng(ctx.cfg.seed)
    compared = 0
    for group in _random_groups(rng, 20):
        x = int(rng.integers(1, group.order))
        action = coset_action(group, group.closure([x]))
        prof = profile(action)
        if prof.derangement_count == 0:
            continue
        weighting = unit_weighting(prof)
        report = Spectra.eigenvalues(Spectra.collapse(weighting), ctx.cfg.eigen_tolerance)
        if group.order <= 200:
            compared += 1
            full = Spectra.full_matrix_spectrum(weighting)
            ctx.expect(full.size == report.eigenvalues.size
                       and np.allclose(full, report.eigenvalues, atol=1e-6),
                       f'order {group.order}: collapsed and dense spectra differ')
            if report.hoffman_bound is not None:
                graph = DerangementGraph(prof)
                best = Solver.max_coclique(graph, params=ctx.cfg.solver_params)
                ctx.expect(report.hoffman_bound + 1e-6 >= best.size,
                           f'order {group.order}: Hoffman {report.hoffman_bound}'
                           f' below coclique {best.size}')
    ctx.note(f'{compared} dense spectra compared')

    for out in (build_psl2_even(2), build_agl1_sharply_transitive(9),
                build_suzuki_borel_example(3)):
        s = out.lower_witness()
        for name, role in out.roles.items():
            if role in ('semiregular', 'sharply_transitive'):
                r = out.named_subsets[name]
                ctx.expect(r.size * s.size <= out.group.order,
                           f'{out.name}: |{name}||S| exceeds |G|')

    for p, f in ((2, 3), (3, 2), (5, 2)):
        fld = field_create(p, f)
        a, b, c = (rng.integers(0, fld.order, size=FIELD_SAMPLE_SIZE) for _ in range(3))
        ctx.expect(np.array_equal(fld.mul(a, fld.add(b, c)),
                                  fld.add(fld.mul(a, b), fld.mul(a, c))),
                   f'GF({p}^{f}): distributivity')
        nonzero = a[a != 0]
        ctx.expect(np.all(fld.mul(nonzero, fld.inv(nonzero)) == 1), f'GF({p}^{f}): inverses')
    sl = close(MatrixRepresentation(field_create(5, 1), 2),
               np.array([[1, 1, 0, 1], [1, 0, 1, 1]]))
    rep = sl.rep
    idx = rng.integers(0, sl.order, size=(3, 32))
    x, y, z = (sl.elements[i] for i in idx)
    ctx.expect(np.array_equal(rep.compose(rep.compose(x, y), z),
                              rep.compose(x, rep.compose(y, z))),
               'matrix products are not associative')
    ctx.expect(np.all(rep.compose(x, rep.invert(x)) == rep.identity()[None, :]),
               'matrix inverses')


CHECKS: Tuple[Check, ...] = (
    Check(1, ('constructions', 'solver', 'psl2'), 'PSL(2,4) on 10 points', check_psl2_4),
    Check(2, ('constructions', 'solver', 'psl2'), 'PSL(2,8) on 36 points', check_psl2_8),
    Check(3, ('constructions', 'solver', 'agl1'), 'AGL(1,9) sharply transitive set',
          check_agl1_9),
    Check(4, ('constructions', 'table2'), 'Table rows 1, 2 and 5 tight', check_table2_small),
    Check(5, ('constructions', 'table2', 'slow'), 'Table rows 3 and 4 in large mode',
          check_table2_large),
    Check(6, ('constructions', 'product'), 'Product action of PSL(2,4) wr 2', check_product),
    Check(7, ('suzuki', 'spectra'), 'Sz(8) case spectra and Hoffman bounds',
          check_suzuki_cases),
    Check(8, ('suzuki',), 'Sz(8) order, classes and character table', check_suzuki_sanity),
    Check(9, ('suzuki', 'constructions'), 'Suzuki Borel example at q = 8', check_suzuki_borel),
    Check(10, ('constructions', 'psu3'), 'PSU(3,7) Borel example', check_psu3),
    Check(11, ('constructions', 'affine'), 'Affine tower at p = 3 and p = 5',
          check_affine_tower),
    Check(12, ('properties', 'spectra', 'algebra'), 'Property suites', check_properties),
)


def select(only: Sequence[str] = ()) -> List[Check]:
    """Returns the checks whose id or one of whose tags is listed, all if none is."""
    if not only:
        return list(CHECKS)
    wanted = set(only)
    return [c for c in CHECKS if str(c.id) in wanted or wanted.intersection(c.tags)]


def run(checks: Sequence[Check], cfg: Optional[Config] = None,
        progress_func: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    cfg = cfg if cfg is not None else Config()
    results = []
    for check in checks:
        ctx = CheckContext(cfg)
        tic = time.time()
        try:
            check.func(ctx)
        except Exception as ex:
            # Internal failures fail this check only
            _logger.debug('Check %d raised', check.id, exc_info=True)
            ctx.failures.append(f'{type(ex).__name__}: {ex}')
        result = CheckResult(check, not ctx.failures, ctx.failures, ctx.notes,
                             1e3 * (time.time() - tic))
        results.append(result)
        if progress_func is not None:
            progress_func(result)
    return results
