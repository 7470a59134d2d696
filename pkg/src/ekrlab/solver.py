import logging
import multiprocessing as mp
import time
from dataclasses import dataclass
from enum import Enum, unique
from math import floor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .derangement import ActionProfile, UpperBound
from .errors import GroupTooLarge, TimeLimitExceeded

_logger = logging.getLogger(__name__)

EXACT_MAX_VERTICES: int = 5000
_TIME_CHECK_NODES: int = 1024


class DerangementGraph:
    """The Cayley graph Cay(G, D(G, Omega)) with bitset adjacency rows.

    Vertices are element indices, u ~ v iff u v^-1 is a derangement. Row v
    is a Python int with bit u set for every neighbour u.

    Attributes:
        n (int): Number of vertices |G|.
        degree (int): Common vertex degree |D(G, Omega)|.
        adjacency (List[int]): Neighbour bitsets.
    """

    def __init__(self, prof: ActionProfile, max_vertices: int = EXACT_MAX_VERTICES):
        group = prof.group
        if group.order > max_vertices:
            raise GroupTooLarge(f'Derangement graph limited to {max_vertices} vertices')
        self.profile = prof
        self.n = group.order
        self.degree = prof.derangement_count

        derangements = prof.derangements()
        everything = np.arange(self.n)
        adj = np.zeros((self.n, self.n), dtype=bool)
        if derangements.size:
            # Neighbours of v are d v for derangements d
            nbrs = group.mul_many(derangements[:, None], everything[None, :])
            adj[np.broadcast_to(everything[None, :], nbrs.shape), nbrs] = True

        if adj.diagonal().any() or np.any(adj != adj.T):
            raise AssertionError('Derangement graph must be symmetric without loops')
        if np.any(adj.sum(axis=1) != self.degree):
            raise AssertionError('Derangement graph must be regular')

        packed = np.packbits(adj, axis=1, bitorder='little')
        self.adjacency: List[int] = [int.from_bytes(row.tobytes(), 'little') for row in packed]
        self.full = (1 << self.n) - 1

    def is_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def is_clique(self, vertices: Sequence[int]) -> bool:
        vertices = list(vertices)
        return all(self.is_edge(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1:])

    def is_coclique(self, vertices: Sequence[int]) -> bool:
        vertices = list(vertices)
        return not any(self.is_edge(u, v)
                       for i, u in enumerate(vertices) for v in vertices[i + 1:])


@dataclass
class SearchResult:
    best_set: npt.NDArray[int]
    optimal: bool
    upper_bound_used: float
    nodes_explored: int
    time_limit_hit: bool

    @property
    def size(self) -> int:
        return int(self.best_set.size)

    def as_upper_bound(self) -> Optional[UpperBound]:
        """Returns the solver's exact size as an upper bound if it is proven."""
        if not self.optimal:
            return None
        return UpperBound(UpperBound.Kind.EXACT_SOLVER, float(self.size))


class _Search:
    """Branch and bound for a maximum clique with greedy coloring bounds.

    In coclique mode the complement graph is searched by negating the
    adjacency rows on the fly.
    """

    def __init__(self, adjacency: List[int], n: int, coclique: bool):
        self.adjacency = adjacency
        self.full = (1 << n) - 1
        self.coclique = coclique
        self.nodes = 0
        self.deadline: Optional[float] = None
        self.timed_out = False

    def candidates(self, v: int) -> int:
        if self.coclique:
            return self.full & ~self.adjacency[v] & ~(1 << v)
        return self.adjacency[v]

    def same_color(self, v: int) -> int:
        # Vertices allowed to share a color with v are mutually non-adjacent
        # in the searched graph
        if self.coclique:
            return self.adjacency[v]
        return self.full & ~self.adjacency[v] & ~(1 << v)

    def color_order(self, p: int) -> List[Tuple[int, int]]:
        """Returns (vertex, color) in branching order, highest color first."""
        classes = []
        uncolored = p
        while uncolored:
            q = uncolored
            members = []
            while q:
                low = q & -q
                v = low.bit_length() - 1
                members.append(v)
                q &= self.same_color(v) & ~low
                uncolored &= ~low
            classes.append(members)
        return [(v, c + 1) for c in range(len(classes) - 1, -1, -1) for v in classes[c]]

    def run(self, r: List[int], p: int, best: List[int], target: Optional[int]) -> List[int]:
        """Extends `r` by vertices of `p`, returns the best set found.

        `best` is the incumbent; only strictly larger sets replace it.
        """
        best = list(best)
        if target is not None and len(best) >= target:
            return best
        stack = [[p, self.color_order(p), 0]]
        base = len(r)
        r = list(r)
        if not p and len(r) > len(best):
            return r

        while stack:
            self.nodes += 1
            if self.deadline is not None and self.nodes % _TIME_CHECK_NODES == 0:
                if time.monotonic() > self.deadline:
                    self.timed_out = True
                    break
            frame = stack[-1]
            if frame[2] == len(frame[1]):
                stack.pop()
                if len(r) > base:
                    r.pop()
                continue
            v, color = frame[1][frame[2]]
            frame[2] += 1
            if len(r) + color <= len(best):
                stack.pop()
                if len(r) > base:
                    r.pop()
                continue
            new_p = frame[0] & self.candidates(v)
            frame[0] &= ~(1 << v)
            r.append(v)
            if new_p:
                stack.append([new_p, self.color_order(new_p), 0])
            else:
                if len(r) > len(best):
                    best = list(r)
                    _logger.debug('New incumbent of size %d', len(best))
                    if target is not None and len(best) >= target:
                        break
                r.pop()
        return best


# Worker state shared via the pool initializer
_worker_search: Optional[_Search] = None


def _worker_init(adjacency: List[int], n: int, coclique: bool, deadline: Optional[float]):
    global _worker_search  # pylint: disable=global-statement
    _worker_search = _Search(adjacency, n, coclique)
    _worker_search.deadline = deadline


def _worker_task(r: List[int], p: int, best: List[int], target: Optional[int]):
    _worker_search.nodes = 0
    _worker_search.timed_out = False
    found = _worker_search.run(r, p, best, target)
    return found, _worker_search.nodes, _worker_search.timed_out


class Solver:
    """Exact maximum coclique and clique search on derangement graphs."""

    @unique
    class Mode(Enum):
        COCLIQUE = 1
        CLIQUE = 2

    @dataclass
    class Params:
        # A time limit of a single search (in seconds), zero or less for none.
        time_limit: float = 60.0
        # Seed the identity vertex, valid by vertex transitivity.
        seed_identity: bool = True

    @staticmethod
    def search(graph: DerangementGraph,
               mode: 'Solver.Mode',
               params: Optional['Solver.Params'] = None,
               prune_bound: Optional[float] = None,
               initial: Optional[Sequence[int]] = None,
               worker_count: int = 1,
               raise_on_timeout: bool = False,
               progress_func: Optional[Callable[[int, int], None]] = None
               ) -> SearchResult:
        """Finds a maximum clique or coclique.

        Args:
            graph (DerangementGraph): The graph to search.
            mode (Solver.Mode): Clique (semiregular) or coclique (intersecting).
            params (Optional[Solver.Params]): Time limit and identity seeding.
            prune_bound (Optional[float]):
                A known upper bound, e.g. a Hoffman value. The search stops
                with a proven optimum once floor(prune_bound) is reached.
            initial (Optional[Sequence[int]]):
                A valid incumbent to start from, e.g. a point stabilizer.
            worker_count (int):
                Number of processes the root branches are split across. If
                it is 0 or less, the number returned by `os.cpu_count()` is
                used. The optimal size does not depend on it, the witness
                set is reproducible only with a single worker.
            raise_on_timeout (bool):
                Raise `TimeLimitExceeded` instead of returning the best set.
            progress_func (Optional[Callable[[int, int], None]]):
                Called with (finished root branches, all root branches) in
                parallel mode.

        Returns:
            The search result.
        """
        params = params if params is not None else Solver.Params()
        coclique = mode == Solver.Mode.COCLIQUE
        search = _Search(graph.adjacency, graph.n, coclique)
        deadline = (time.monotonic() + params.time_limit) if params.time_limit > 0 else None
        search.deadline = deadline

        target = int(floor(prune_bound + 1e-9)) if prune_bound is not None else None
        best = sorted(int(v) for v in initial) if initial is not None else []
        if initial is not None:
            valid = graph.is_coclique(best) if coclique else graph.is_clique(best)
            if not valid:
                raise ValueError('The initial set is not a valid incumbent')

        if params.seed_identity:
            r = [0]
            p = search.candidates(0)
        else:
            r = []
            p = graph.full
        root_bound = len(r) + len({c for _, c in search.color_order(p)})
        upper = float(min(root_bound, prune_bound)) if prune_bound is not None \
            else float(root_bound)

        if worker_count == 1 or not p:
            found = search.run(r, p, best, target)
            nodes = search.nodes
            timed_out = search.timed_out
        else:
            found, nodes, timed_out = Solver._search_parallel(
                graph, search, r, p, best, target, deadline, worker_count, progress_func)

        reached_target = target is not None and len(found) >= target
        optimal = reached_target or not timed_out
        if timed_out and not reached_target:
            _logger.warning('Search time limit hit after %d nodes', nodes)
            if raise_on_timeout:
                raise TimeLimitExceeded(f'Time limit of {params.time_limit} s exceeded,'
                                        f' best size {len(found)}')
        return SearchResult(
            best_set=np.array(sorted(found), dtype=np.int64),
            optimal=optimal,
            upper_bound_used=upper,
            nodes_explored=nodes,
            time_limit_hit=timed_out and not reached_target,
        )

    @staticmethod
    def _search_parallel(graph, search, r, p, best, target, deadline, worker_count,
                         progress_func):
        order = search.color_order(p)
        tasks = []
        remaining = p
        for v, _ in order:
            tasks.append((r + [v], remaining & search.candidates(v)))
            remaining &= ~(1 << v)

        processes = worker_count if worker_count > 0 else None
        found = list(best)
        nodes = 0
        timed_out = False
        with mp.Pool(processes=processes, initializer=_worker_init,
                     initargs=(graph.adjacency, graph.n, search.coclique, deadline)) as pool:
            procs = [pool.apply_async(_worker_task, (tr, tp, best, target))
                     for tr, tp in tasks]
            for idx, proc in enumerate(procs):
                result, task_nodes, task_timed_out = proc.get()
                nodes += task_nodes
                timed_out |= task_timed_out
                if len(result) > len(found):
                    found = result
                if progress_func is not None:
                    progress_func(idx + 1, len(procs))
        return found, nodes, timed_out

    @staticmethod
    def max_coclique(graph: DerangementGraph,
                     prune_bound: Optional[float] = None,
                     time_limit: Optional[float] = None,
                     params: Optional['Solver.Params'] = None,
                     **kwargs) -> SearchResult:
        """Returns a maximum intersecting subset (coclique of the derangement graph).

        The point stabilizer is used as the initial incumbent.
        """
        params = Solver._params(params, time_limit)
        if 'initial' not in kwargs:
            kwargs['initial'] = graph.profile.action.stabilizer
        return Solver.search(graph, Solver.Mode.COCLIQUE, params, prune_bound, **kwargs)

    @staticmethod
    def max_clique(graph: DerangementGraph,
                   time_limit: Optional[float] = None,
                   params: Optional['Solver.Params'] = None,
                   **kwargs) -> SearchResult:
        """Returns a maximum semiregular subset (clique through the identity)."""
        params = Solver._params(params, time_limit)
        if 'prune_bound' not in kwargs:
            # A clique has at most |Omega| members
            kwargs['prune_bound'] = graph.profile.action.omega_size
        return Solver.search(graph, Solver.Mode.CLIQUE, params, **kwargs)

    @staticmethod
    def _params(params: Optional['Solver.Params'], time_limit: Optional[float]):
        params = params if params is not None else Solver.Params()
        if time_limit is not None:
            params = Solver.Params(time_limit=time_limit, seed_identity=params.seed_identity)
        return params
