#!/usr/bin/env python3

import argparse
import json
import logging
import pkgutil
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

import ekrlab
from ekrlab import constructions
from ekrlab.errors import (EkrError, InconsistentCertificate, InfeasibleError,
                           InadmissibleParameters)

# Exit codes
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_INCONSISTENT = 4

EXIT_CODES_HELP = f'''exit codes:
  0  success
  {EXIT_FAILED}  an expected value or acceptance check failed
  {EXIT_PARSE}  invalid input: arguments, files, inadmissible parameters or any
     other library error (e.g. NotSemiregular, NoSuchSubgroup)
  {EXIT_INFEASIBLE}  infeasible at desk scale (GroupTooLarge, FieldTooLarge)
  {EXIT_INCONSISTENT}  inconsistent certificate or a named subset failing its role
'''

# Option names of `construct NAME --opt ...`, in builder argument order
CONSTRUCT_OPTIONS = {
    'agl1st': ('q',),
    'pgl2': ('q',),
    'psl2even': ('e', 'stabilizer'),
    'product': ('inner', 'ell'),
    'affine': ('p', 'd'),
    'table2': ('row',),
    'szborel': ('e',),
    'psu3': ('q',),
    'psl2odd': ('p', 'case', 'param'),
    'sz8': ('order', 'shape'),
}
# Max. |G| * |Omega| for writing subset files re-indexed to the written group
SUBSET_EXPORT_MAX_ENTRIES = 50_000_000


def _add_source_args(parser: argparse.ArgumentParser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument('--construct', metavar='NAME[:ARGS]',
                     help='a built-in construction, e.g. psl2even:2 or table2:5')
    src.add_argument('--group', type=Path, metavar='FILE', help='a group file')
    stab = parser.add_argument_group('stabilizer of a group file')
    stab.add_argument('--point', type=int, help='stabilizer of this point')
    stab.add_argument('--subgroup-file', type=Path, help='a subgroup given by element indices')
    stab.add_argument('--subgroup-order', type=int, help='first subgroup of this order')
    stab.add_argument('--shape', default='any',
                      help='subgroup predicate: ' + ', '.join(ekrlab.PREDICATES))


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ekrlab-cli',
        description='Intersection density of transitive permutation groups.',
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--config', type=Path, help='a JSON configuration file')
    parser.add_argument('--threads', type=int, help='number of workers, 0 for all CPUs')
    parser.add_argument('--seed', type=int, help='seed of randomized steps')
    parser.add_argument('--time-limit', type=float, help='solver time limit in seconds')
    parser.add_argument('--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', help='profile, spectra, Hoffman bounds and rho certificate')
    _add_source_args(p)
    p.add_argument('--exact', action='store_true', help='run the exact coclique solver')
    p.add_argument('--no-optimize', action='store_true', help='skip the weight LP')
    p.add_argument('--report', type=Path, help='write the JSON report to this file')
    p.add_argument('--timings', action='store_true', help='include timings in the report')

    p = sub.add_parser('construct', help='write a construction to group and subset files')
    p.add_argument('name', help=f'one of {", ".join(CONSTRUCT_OPTIONS)} or sz,'
                                ' optionally with :ARGS')
    for opt in ('q', 'e', 'ell', 'p', 'd', 'row', 'param', 'order'):
        p.add_argument(f'--{opt}', type=int)
    p.add_argument('--inner', help='inner construction of product, e.g. psl2even:2')
    p.add_argument('--case', choices=('parabolic', 'dihedral'))
    p.add_argument('--stabilizer', choices=('dihedral', 'parabolic'), help='stabilizer of psl2even')
    p.add_argument('--shape')
    p.add_argument('--out', type=Path, help='output folder')

    p = sub.add_parser('accept', help='run the acceptance suite')
    p.add_argument('--list', action='store_true', help='list the checks and exit')
    p.add_argument('--only', nargs='+', default=[], metavar='TAG|ID')

    p = sub.add_parser('solve', help='exact maximum coclique or clique search')
    _add_source_args(p)
    p.add_argument('--clique', action='store_true', help='max. semiregular subset instead')

    p = sub.add_parser('spectrum', help='collapsed class matrix spectrum')
    _add_source_args(p)
    w = p.add_mutually_exclusive_group()
    w.add_argument('--weights', type=Path, help='JSON object of class index -> weight')
    w.add_argument('--optimize', action='store_true', help='LP-optimized weights')
    return parser


def _load_config(args) -> ekrlab.Config:
    if args.config is not None:
        with open(args.config, 'rt', encoding='utf-8') as file:
            cfg_dump = file.read()
    else:
        cfg_dump = pkgutil.get_data(
            ekrlab.__name__, 'data/default-config.json').decode()

    cfg = ekrlab.Config.from_json(cfg_dump)

    # CLI options take precedence
    if args.threads is not None:
        cfg.max_workers = args.threads
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.lp_params.seed = args.seed
    if args.time_limit is not None:
        cfg.solver_params.time_limit = args.time_limit
    ekrlab.set_order_caps(cfg.group_order_cap, cfg.large_group_order_cap)
    return cfg


def _load_source(args, cfg: ekrlab.Config
                 ) -> Tuple[str, ekrlab.TransitiveAction, Optional[ekrlab.ConstructionOutput]]:
    if args.construct is not None:
        out = constructions.build(args.construct)
        return out.name, out.action, out

    cache_dir = cfg.effective_cache_dir()
    cache = ekrlab.GroupCache(cache_dir) if cache_dir is not None else None
    gfile = ekrlab.GroupFile(args.group)
    gfile.read()
    group = ekrlab.close_group(gfile.degree, gfile.generators, cache=cache)
    print(f'Loaded group of order {group.order} and degree {gfile.degree}'
          f' with {group.class_count} classes')

    name = str(args.group.name)
    if args.point is not None:
        if not 0 <= args.point < gfile.degree:
            raise InadmissibleParameters(f'Point {args.point} out of range')
        return f'{name}:point={args.point}', ekrlab.natural_action(group, args.point), None
    if args.subgroup_file is not None:
        sub = ekrlab.read_subset(args.subgroup_file)
        return f'{name}:{args.subgroup_file.name}', ekrlab.coset_action(group, sub), None
    if args.subgroup_order is not None:
        if (args.subgroup_order, args.shape) in constructions.SZ8_STABILIZER_CASES \
                and group.order == ekrlab.SzParameters(3).group_order:
            out = constructions.build_sz8_dihedral(group, args.subgroup_order, args.shape)
            return f'{name}:{out.name}', out.action, out
        sub = ekrlab.find_subgroup(group, args.subgroup_order, args.shape)
        return (f'{name}:order={args.subgroup_order},{args.shape}',
                ekrlab.coset_action(group, sub), None)
    raise InadmissibleParameters('A group file needs --point, --subgroup-file'
                                 ' or --subgroup-order')


def _cmd_analyze(args, cfg: ekrlab.Config) -> int:
    # 1. Build the action

    tic = time.time()
    source, action, out = _load_source(args, cfg)
    print(f'Action {source}: |G| = {action.group.order}, |Omega| = {action.omega_size},'
          f' |G_omega| = {action.stabilizer_order}')
    if cfg.log_timing:
        print(f'Building the action took {1e3 * (time.time() - tic):.3f} ms')

    # 2. Profile, verify named subsets and collect their bounds

    tic = time.time()
    prof = out.profile if out is not None else ekrlab.profile(action)
    print(f'Derangements: {prof.derangement_count} in {prof.derangement_classes.size}'
          f' of {action.group.class_count} classes')
    bounds = []
    witness = None
    measured = {}
    if out is not None:
        for name, ok in out.verify().items():
            if not ok:
                print(f'ERROR: Subset {name} is not {out.roles[name]}')
                return EXIT_INCONSISTENT
        bounds = out.upper_bounds()
        witness = out.lower_witness()
        measured = out.measured()
        if 'case' in out.expected:
            weighting = ekrlab.sz_case_weighting(prof, out.expected['case'].value)
            bound = ekrlab.Spectra.hoffman_bound(weighting, note='case weights')
            bounds.append(bound)
            measured['hoffman_bound'] = bound.value
            print(f'Hoffman bound with case weights: {bound.value:.12g}')
    if cfg.log_timing:
        print(f'Profiling took {1e3 * (time.time() - tic):.3f} ms')

    # 3. Spectra, solver and certificate

    tic = time.time()
    result = ekrlab.analyze(action, cfg, lower_witness=witness, upper_bounds=bounds,
                            exact=args.exact, optimize=not args.no_optimize, prof=prof)
    if cfg.log_timing:
        print(f'Analysis took {1e3 * (time.time() - tic):.3f} ms')

    cert = result.certificate
    print(f'Intersecting subsets: {cert.lower_size} <= max <= {cert.upper_bound}'
          f' ({cert.upper_kind.name})')
    print(f'rho in [{cert.rho_lower.render()}, {cert.rho_upper.render()}]'
          f'{" (tight)" if cert.tight else ""}')

    # 4. Report

    report = ekrlab.build_report(
        source, action, result,
        expected=out.expected if out is not None else None,
        measured=measured, tolerance=cfg.compare_tolerance, timings=args.timings)
    for name, entry in report.expected.items():
        if entry['ok'] is False:
            print(f'WARNING: Expected {name} = {entry["expected"]},'
                  f' computed {entry["computed"]}')
    dump = report.to_json()
    if args.report is not None:
        with open(args.report, 'wt', encoding='utf-8') as file:
            file.write(dump)
        print(f'Report written to "{args.report}"')
    else:
        print(dump)
    return 0 if report.passed else EXIT_FAILED


def _construct_spec(args) -> str:
    name = args.name
    if ':' in name:
        return name
    if name not in CONSTRUCT_OPTIONS:
        raise InadmissibleParameters(f'Unknown construction {repr(name)}')
    values: List[str] = []
    for opt in CONSTRUCT_OPTIONS[name]:
        value = getattr(args, opt)
        if opt == 'inner' and value is not None:
            inner, _, inner_args = value.partition(':')
            if inner != 'psl2even':
                raise InadmissibleParameters('The product action supports psl2even inners only')
            value = inner_args or None
        if value is None:
            break
        values.append(str(value))
    return name + (':' + ','.join(values) if values else '')


def _cmd_construct(args, cfg: ekrlab.Config) -> int:
    tic = time.time()
    timestamp_str = datetime.now().strftime('%Y%m%d-%H%M%S')

    if args.name.partition(':')[0] == 'sz':
        e = args.e if args.e is not None else int(args.name.partition(':')[2] or 3)
        degree, gens = ekrlab.sz_ovoid_generators(e)
        group = ekrlab.close_group(degree, gens)
        ekrlab.verify_sz_group(group)
        print(f'Sz({1 << e}) of order {group.order} on {degree} points')
        name = f'sz:{e}'
        subsets = {}
        expected = {'group_order': {'value': group.order, 'source': 'q^2 (q^2+1) (q-1)'}}
    else:
        out = constructions.build(_construct_spec(args))
        name = out.name
        degree = out.action.omega_size
        gens = out.action.generator_images()
        print(f'{out.name}: |G| = {out.group.order}, |Omega| = {degree}')
        for sub_name, ok in out.verify().items():
            if not ok:
                print(f'ERROR: Subset {sub_name} is not {out.roles[sub_name]}')
                return EXIT_INCONSISTENT
        subsets = _reindex_subsets(out, gens)
        expected = {k: {'value': ekrlab.exact_value(v.value), 'source': v.source}
                    for k, v in out.expected.items()}
    if cfg.log_timing:
        print(f'Construction took {1e3 * (time.time() - tic):.3f} ms')

    if args.out is not None:
        folder = args.out
    elif cfg.save_dir is not None:
        folder = Path(f'Construct - {timestamp_str} - {name.replace(":", "_")}')
    else:
        print('WARNING: No output folder configured, nothing saved')
        return 0

    results = ekrlab.OutputFiles(cfg, folder)
    print(f'Saving results to folder: "{results.folder}"')
    try:
        results.mkdir()
    except Exception as ex:
        print(f'ERROR: Failed to create target folder ({repr(ex)})')
        return EXIT_FAILED
    try:
        results.save_config()
        results.save_group(degree, gens, comments=[name])
        results.save_subsets(subsets)
        results.save_json(results.EXPECTED_FILE_NAME, json.dumps(expected, indent=4))
    except Exception as ex:
        print(f'ERROR: Failed to save results ({repr(ex)})')
        return EXIT_FAILED
    return 0


def _reindex_subsets(out: 'ekrlab.ConstructionOutput', gens: np.ndarray):
    # Subset files refer to the element order of the written group
    action = out.action
    if action.group.order * action.omega_size > SUBSET_EXPORT_MAX_ENTRIES:
        print('WARNING: Group too large to re-index subsets, subset files skipped')
        return {}
    written = ekrlab.close_group(action.omega_size, gens)
    index = written.lookup(action.point_images())
    return {name: np.unique(index[subset]) for name, subset in out.named_subsets.items()}


def _cmd_accept(args, cfg: ekrlab.Config) -> int:
    checks = ekrlab.acceptance.select(args.only)
    if args.list:
        for check in ekrlab.acceptance.CHECKS:
            print(f'{check.id:>2}  {check.title}  [{", ".join(check.tags)}]')
        return 0
    if not checks:
        print(f'ERROR: No check matches {" ".join(args.only)}')
        return EXIT_PARSE

    def progress(result):
        status = 'PASS' if result.passed else 'FAIL'
        print(f'{status} {result.check.id:>2} {result.check.title}'
              + (f' ({result.elapsed_ms:.3f} ms)' if cfg.log_timing else ''))
        for note in result.notes:
            print(f'       {note}')
        for failure in result.failures:
            print(f'ERROR: {failure}')

    results = ekrlab.acceptance.run(checks, cfg, progress_func=progress)
    failed = sum(not r.passed for r in results)
    print(f'{len(results) - failed} of {len(results)} checks passed')
    return EXIT_FAILED if failed else 0


def _cmd_solve(args, cfg: ekrlab.Config) -> int:
    source, action, _ = _load_source(args, cfg)
    tic = time.time()
    prof = ekrlab.profile(action)
    graph = ekrlab.DerangementGraph(prof)
    if args.clique:
        result = ekrlab.Solver.max_clique(graph, params=cfg.solver_params,
                                          worker_count=cfg.max_workers)
        what = 'semiregular subset'
    else:
        result = ekrlab.Solver.max_coclique(graph, params=cfg.solver_params,
                                            worker_count=cfg.max_workers)
        what = 'intersecting subset'
    if cfg.log_timing:
        print(f'Search took {1e3 * (time.time() - tic):.3f} ms')
    print(f'{source}: max. {what} of size {result.size}'
          f' ({"optimal" if result.optimal else "time limit hit"},'
          f' {result.nodes_explored} nodes)')
    print(' '.join(str(int(v)) for v in result.best_set))
    return 0


def _cmd_spectrum(args, cfg: ekrlab.Config) -> int:
    source, action, _ = _load_source(args, cfg)
    prof = ekrlab.profile(action)
    tic = time.time()
    if args.optimize:
        weighting, _ = ekrlab.Spectra.optimize_weights(prof, cfg.lp_params, cfg.max_workers)
    elif args.weights is not None:
        with open(args.weights, 'rt', encoding='utf-8') as file:
            try:
                raw = json.load(file)
            except json.JSONDecodeError as ex:
                raise InadmissibleParameters(f'Malformed weight file ({ex})') from None
        weighting = ekrlab.weighting_from_dict(prof, {int(k): float(v) for k, v in raw.items()})
    else:
        weighting = ekrlab.unit_weighting(prof)
    report = ekrlab.Spectra.eigenvalues(ekrlab.Spectra.collapse(weighting, cfg.max_workers),
                                        tolerance=cfg.eigen_tolerance)
    if cfg.log_timing:
        print(f'Spectrum took {1e3 * (time.time() - tic):.3f} ms')
    print(f'{source}: d = {report.d:.12g}, tau = {report.tau:.12g}')
    print('Eigenvalues: ' + ', '.join(f'{v:.12g}' for v in report.eigenvalues))
    if report.hoffman_bound is not None:
        print(f'Hoffman bound: {report.hoffman_bound:.12g}')
    return 0


COMMANDS = {
    'analyze': _cmd_analyze,
    'construct': _cmd_construct,
    'accept': _cmd_accept,
    'solve': _cmd_solve,
    'spectrum': _cmd_spectrum,
}


def main(argv: Optional[List[str]] = None) -> int:
    tic_total = time.time()
    try:
        args = _parser().parse_args(argv)
    except SystemExit as ex:
        return EXIT_PARSE if ex.code else 0

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        cfg = _load_config(args)
    except (OSError, ValueError, TypeError) as ex:
        print(f'ERROR: Failed to load configuration ({repr(ex)})')
        return EXIT_PARSE

    try:
        code = COMMANDS[args.command](args, cfg)
    except InconsistentCertificate as ex:
        print(f'ERROR: Inconsistent certificate ({ex})')
        return EXIT_INCONSISTENT
    except InfeasibleError as ex:
        print(f'ERROR: Infeasible at desk scale ({ex})')
        return EXIT_INFEASIBLE
    except EkrError as ex:
        print(f'ERROR: {type(ex).__name__}: {ex}')
        return EXIT_PARSE
    except OSError as ex:
        print(f'ERROR: {repr(ex)}')
        return EXIT_PARSE

    if cfg.log_timing:
        print(f'Total time: {1e3 * (time.time() - tic_total):.3f} ms')
    return code


def app():
    sys.exit(main())


if __name__ == '__main__':
    app()
