"""
Instance generators: worked examples, hardness reductions with witness builders, and seeded random instances
"""
import logging
from collections import Counter
from itertools import combinations
from typing import Dict, Hashable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from config import LOG_LEVEL, RANDOM_INSTANCE_DEFAULTS, SAT_GADGET_ETA
from core import CapacityVector, Instance, Matching
from documents import FormulaDocument, GraphDocument, SetSystemDocument
from exceptions import InstanceValidationError, ReductionInputError, UnknownExampleError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


class Reduction(NamedTuple):
    instance: Instance
    budget: int


class Witness(NamedTuple):
    increase: CapacityVector
    matching: Matching


class InstanceDraft:
    """Mutable lists that become an Instance once every agent is added"""

    def __init__(self):
        self.students: List[str] = []
        self.schools: List[str] = []
        self.capacities: Dict[str, int] = {}
        self.preferences: Dict[str, List[str]] = {}
        self.priorities: Dict[str, List[str]] = {}

    def student(self, sid: str, preferences: Sequence[str]) -> None:
        self.students.append(sid)
        self.preferences[sid] = list(preferences)

    def school(self, wid: str, priorities: Sequence[str], capacity: int = 1) -> None:
        self.schools.append(wid)
        self.priorities[wid] = list(priorities)
        self.capacities[wid] = capacity

    def build(self) -> Instance:
        return Instance.build(self.students, self.schools, self.capacities, self.preferences, self.priorities)


def _witness(instance: Instance, assignment: Mapping[str, str]) -> Witness:
    """Matching from ids plus the increase r[w] = max(0, occupancy - q[w]) it needs"""
    matching = instance.matching(assignment)
    load = matching.occupancy(instance.m)
    increase = CapacityVector(tuple(max(0, load[w] - q) for w, q in enumerate(instance.capacities)))
    return Witness(increase, matching)


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------

STABLE_EFF_PREFERENCES = {
    "u1": ["w1", "w3", "w4"],
    "u2": ["w1", "w2"],
    "u3": ["w2", "w1", "w3"],
    "u4": ["w2", "w3", "w5"],
    "u5": ["w3", "w2", "w1"],
}
STABLE_EFF_PRIORITIES = {
    "w1": ["u5", "u3", "u2", "u1"],
    "w2": ["u2", "u5", "u3", "u4"],
    "w3": ["u3", "u4", "u1", "u5"],
    "w4": ["u1"],
    "w5": ["u4"],
}


def _intro() -> Instance:
    draft = InstanceDraft()
    draft.student("u1", ["w1", "w3", "w2"])
    draft.student("u2", ["w2", "w1", "w3"])
    draft.student("u3", ["w2", "w3"])
    draft.student("u4", ["w1", "w2"])
    draft.student("u5", ["w1", "w2"])
    draft.school("w1", ["u2", "u4", "u1", "u5"])
    draft.school("w2", ["u1", "u2", "u3", "u4", "u5"])
    draft.school("w3", ["u3", "u1", "u2"])
    return draft.build()


def _problems() -> Instance:
    draft = InstanceDraft()
    for sid in ["u1", "u2", "u3", "u4", "u5"]:
        draft.student(sid, ["w1", "w2", "w3"] if sid == "u3" else ["w1", "w2"])
    draft.school("w1", ["u1", "u2", "u3", "u4", "u5"])
    draft.school("w2", ["u1", "u2", "u3", "u4", "u5"])
    draft.school("w3", ["u3"])
    return draft.build()


def _stable_eff() -> Instance:
    draft = InstanceDraft()
    for sid, prefs in STABLE_EFF_PREFERENCES.items():
        draft.student(sid, prefs)
    for wid, prio in STABLE_EFF_PRIORITIES.items():
        draft.school(wid, prio)
    return draft.build()


def _minmaxse_gap() -> Instance:
    """Example stable-eff with a primed copy of every school, a private school v_i per student and dummies"""
    draft = InstanceDraft()
    for i, (sid, prefs) in enumerate(STABLE_EFF_PREFERENCES.items(), start=1):
        draft.student(sid, prefs + [f"v{i}"] + [f"{w}'" for w in prefs])
    for wid in STABLE_EFF_PRIORITIES:
        draft.student(f"d_{wid}", [wid])
    for i in range(1, 6):
        draft.student(f"d_v{i}", [f"v{i}"])
    for wid, prio in STABLE_EFF_PRIORITIES.items():
        draft.school(wid, [f"d_{wid}"] + prio)
    for wid, prio in STABLE_EFF_PRIORITIES.items():
        draft.school(f"{wid}'", prio)
    for i in range(1, 6):
        draft.school(f"v{i}", [f"d_v{i}", f"u{i}"])
    return draft.build()


def _greedy_tight(s_hat: int = 2, n: int = 3) -> Instance:
    """
    Family on which the greedy placement pays (n+1)*s_hat while s_hat+n suffices

    Element student e_i lists c_i then the shared school c_{s_hat+1}; every set
    school c_j ranks its dummy d_j, then a block of n students who like it best,
    then its element students.
    """
    if s_hat < 1 or n < 1:
        raise ReductionInputError("greedy-tight needs s_hat >= 1 and n >= 1")
    shared = s_hat + 1
    draft = InstanceDraft()
    for i in range(1, s_hat + 1):
        draft.student(f"e{i}", [f"c{i}", f"c{shared}"])
    for j in range(1, shared + 1):
        draft.student(f"d{j}", [f"c{j}"])
        for ell in range(1, n + 1):
            draft.student(f"u{j}_{ell}", [f"c{j}", f"w{j}_{ell}"])
    for j in range(1, shared + 1):
        elements = [f"e{i}" for i in range(1, s_hat + 1)] if j == shared else [f"e{j}"]
        draft.school(f"c{j}", [f"d{j}"] + [f"u{j}_{ell}" for ell in range(1, n + 1)] + elements)
        for ell in range(1, n + 1):
            draft.school(f"w{j}_{ell}", [f"u{j}_{ell}"])
    return draft.build()


EXAMPLES = {
    "intro": _intro,
    "problems": _problems,
    "stable-eff": _stable_eff,
    "minmaxse-gap": _minmaxse_gap,
    "greedy-tight": _greedy_tight,
}


def gen_example(name: str, **params) -> Instance:
    """
    Build a named worked example

    Args:
        name: One of intro, problems, stable-eff, minmaxse-gap, greedy-tight
        params: s_hat and n for greedy-tight

    Returns:
        Instance with the example's identifiers
    """
    if name not in EXAMPLES:
        raise UnknownExampleError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    if params and name != "greedy-tight":
        raise ReductionInputError(f"example {name!r} takes no parameters")
    instance = EXAMPLES[name](**params)
    logger.info(f"Generated example {name} with {instance.n} students and {instance.m} schools")
    return instance


# ---------------------------------------------------------------------------
# Graph helpers
# ---------------------------------------------------------------------------

def graph_from_document(document: GraphDocument) -> Tuple[nx.Graph, Dict[str, int]]:
    """Graph and (possibly empty) coloring from a graph document"""
    graph = nx.Graph()
    graph.add_nodes_from(document.vertices)
    for edge in document.edges:
        if len(edge) != 2 or edge[0] == edge[1]:
            raise ReductionInputError(f"edge {edge} is not a pair of distinct vertices")
        if edge[0] not in graph or edge[1] not in graph:
            raise ReductionInputError(f"edge {edge} names an unknown vertex")
        graph.add_edge(edge[0], edge[1])
    return graph, dict(document.coloring)


def _indexed(graph: nx.Graph) -> Tuple[List[Hashable], List[Tuple[int, int]]]:
    """Vertices in node order and edges as increasing index pairs, sorted"""
    if nx.number_of_selfloops(graph):
        raise ReductionInputError("graph must be simple")
    vertices = list(graph.nodes())
    position = {v: i for i, v in enumerate(vertices)}
    edges = sorted(tuple(sorted((position[a], position[b]))) for a, b in graph.edges())
    return vertices, edges


def _incident(n_vertices: int, edges: Sequence[Tuple[int, int]]) -> List[List[int]]:
    incident: List[List[int]] = [[] for _ in range(n_vertices)]
    for t, (i, j) in enumerate(edges):
        incident[i].append(t)
        incident[j].append(t)
    return incident


# ---------------------------------------------------------------------------
# Vertex cover (constant degree)
# ---------------------------------------------------------------------------

def gen_vertex_cover(graph: nx.Graph, h: int) -> Reduction:
    """
    Encode vertex cover of size h as MinSumSP with budget |E| + h

    Per edge e_t = {v_i, v_j} (i < j): an edge student listing v_i^t then v_j^t,
    and per endpoint a school v_x^t with a dummy d_x^t ranked first. Vertex
    student u_i lists its v_i^t schools by edge index, then its own school w_i.

    Args:
        graph: Simple undirected graph
        h: Cover size

    Returns:
        Reduction with unit capacities
    """
    vertices, edges = _indexed(graph)
    incident = _incident(len(vertices), edges)
    draft = InstanceDraft()
    for t, (i, j) in enumerate(edges, start=1):
        draft.student(f"e{t}", [f"v{i + 1}_{t}", f"v{j + 1}_{t}"])
    for t, (i, j) in enumerate(edges, start=1):
        for x in (i, j):
            draft.student(f"d{x + 1}_{t}", [f"v{x + 1}_{t}"])
    for i in range(len(vertices)):
        draft.student(f"u{i + 1}", [f"v{i + 1}_{t + 1}" for t in incident[i]] + [f"w{i + 1}"])
    for t, (i, j) in enumerate(edges, start=1):
        for x in (i, j):
            draft.school(f"v{x + 1}_{t}", [f"d{x + 1}_{t}", f"u{x + 1}", f"e{t}"])
    for i in range(len(vertices)):
        draft.school(f"w{i + 1}", [f"u{i + 1}"])
    instance = draft.build()
    logger.info(f"Vertex cover encoding: {len(vertices)} vertices, {len(edges)} edges, budget {len(edges) + h}")
    return Reduction(instance, len(edges) + h)


def vertex_cover_witness(instance: Instance, graph: nx.Graph, cover: Sequence[Hashable]) -> Witness:
    """
    Stable perfect matching of the vertex cover encoding built from a cover

    Each edge student goes to the school of its smallest covered endpoint; each
    covered vertex student to its first school; everyone else stays home.
    """
    vertices, edges = _indexed(graph)
    position = {v: i for i, v in enumerate(vertices)}
    chosen = set()
    for v in cover:
        if v not in position:
            raise ReductionInputError(f"cover names unknown vertex {v!r}")
        chosen.add(position[v])
    incident = _incident(len(vertices), edges)
    assignment = {}
    for t, (i, j) in enumerate(edges, start=1):
        if i not in chosen and j not in chosen:
            raise ReductionInputError(f"edge {vertices[i]!r}-{vertices[j]!r} is not covered")
        x = i if i in chosen else j
        assignment[f"e{t}"] = f"v{x + 1}_{t}"
        for y in (i, j):
            assignment[f"d{y + 1}_{t}"] = f"v{y + 1}_{t}"
    for i in range(len(vertices)):
        if i in chosen and incident[i]:
            assignment[f"u{i + 1}"] = f"v{i + 1}_{incident[i][0] + 1}"
        else:
            assignment[f"u{i + 1}"] = f"w{i + 1}"
    return _witness(instance, assignment)


# ---------------------------------------------------------------------------
# Set cover
# ---------------------------------------------------------------------------

def _check_set_system(sets: Sequence[Sequence[int]], universe: int) -> List[List[int]]:
    if universe < 1:
        raise ReductionInputError("universe must contain at least one element")
    cleaned = []
    for j, members in enumerate(sets, start=1):
        for element in members:
            if not 1 <= element <= universe:
                raise ReductionInputError(f"set {j} contains {element}, outside 1..{universe}")
        cleaned.append(sorted(set(members)))
    covered = set().union(*cleaned) if cleaned else set()
    missing = sorted(set(range(1, universe + 1)) - covered)
    if missing:
        raise ReductionInputError(f"element {missing[0]} belongs to no set")
    return cleaned


def gen_set_cover(sets: Sequence[Sequence[int]], universe: int, k: int) -> Reduction:
    """
    Encode set cover of size k as MinSumSP with budget (k+1)*universe

    Args:
        sets: Subsets of 1..universe
        universe: Number of elements n
        k: Cover size

    Returns:
        Reduction with unit capacities
    """
    cleaned = _check_set_system(sets, universe)
    n = universe
    draft = InstanceDraft()
    for i in range(1, n + 1):
        draft.student(f"e{i}", [f"c{j}" for j, members in enumerate(cleaned, start=1) if i in members])
    for j in range(1, len(cleaned) + 1):
        draft.student(f"d{j}", [f"c{j}"])
        for ell in range(1, n + 1):
            draft.student(f"u{j}_{ell}", [f"c{j}", f"w{j}_{ell}"])
    for j, members in enumerate(cleaned, start=1):
        block = [f"u{j}_{ell}" for ell in range(1, n + 1)]
        draft.school(f"c{j}", [f"d{j}"] + block + [f"e{i}" for i in members])
        for ell in range(1, n + 1):
            draft.school(f"w{j}_{ell}", [f"u{j}_{ell}"])
    instance = draft.build()
    logger.info(f"Set cover encoding: {len(cleaned)} sets over {n} elements, budget {(k + 1) * n}")
    return Reduction(instance, (k + 1) * n)


def set_cover_witness(instance: Instance, sets: Sequence[Sequence[int]], universe: int,
                      cover: Sequence[int]) -> Witness:
    """
    Stable perfect matching from a cover given as 0-based set indices

    Chosen set schools admit their whole block; each element goes to the
    chosen set with the smallest index that contains it.
    """
    cleaned = _check_set_system(sets, universe)
    chosen = sorted(set(cover))
    for j in chosen:
        if not 0 <= j < len(cleaned):
            raise ReductionInputError(f"cover names set index {j}, outside 0..{len(cleaned) - 1}")
    assignment = {}
    for j in range(len(cleaned)):
        assignment[f"d{j + 1}"] = f"c{j + 1}"
        for ell in range(1, universe + 1):
            assignment[f"u{j + 1}_{ell}"] = f"c{j + 1}" if j in chosen else f"w{j + 1}_{ell}"
    for i in range(1, universe + 1):
        home = next((j for j in chosen if i in cleaned[j]), None)
        if home is None:
            raise ReductionInputError(f"element {i} is not covered")
        assignment[f"e{i}"] = f"c{home + 1}"
    return _witness(instance, assignment)


# ---------------------------------------------------------------------------
# Multi-colored clique
# ---------------------------------------------------------------------------

class _ColoredGraph(NamedTuple):
    vertices: List[Hashable]
    edges: List[Tuple[int, int]]
    colors: List[int]
    h: int
    pair_edges: Dict[Tuple[int, int], List[int]]


def _colored(graph: nx.Graph, coloring: Mapping[Hashable, int]) -> _ColoredGraph:
    vertices, edges = _indexed(graph)
    missing = [v for v in vertices if v not in coloring]
    if missing:
        raise ReductionInputError(f"vertex {missing[0]!r} has no color")
    palette = sorted(set(coloring[v] for v in vertices))
    if len(palette) < 2:
        raise ReductionInputError("a multi-colored clique reduction needs at least two colors")
    relabel = {c: k for k, c in enumerate(palette)}
    colors = [relabel[coloring[v]] for v in vertices]
    pair_edges: Dict[Tuple[int, int], List[int]] = {pair: [] for pair in combinations(range(len(palette)), 2)}
    for t, (i, j) in enumerate(edges):
        if colors[i] != colors[j]:
            pair_edges[tuple(sorted((colors[i], colors[j])))].append(t)
    for (a, b), members in pair_edges.items():
        if not members:
            raise ReductionInputError(f"no edge joins colors {palette[a]} and {palette[b]}")
    return _ColoredGraph(vertices, edges, colors, len(palette), pair_edges)


def _selector(pair: Tuple[int, int]) -> str:
    return f"{pair[0] + 1}_{pair[1] + 1}"


def _mcc_draft(data: _ColoredGraph, selector_ids: Mapping[Tuple[int, int], str]) -> InstanceDraft:
    """Edge schools/students and vertex schools/students; selectors are added by the caller"""
    draft = InstanceDraft()
    incident = _incident(len(data.vertices), data.edges)
    for t in range(1, len(data.edges) + 1):
        draft.student(f"f{t}", [f"e{t}"])
    for i in range(len(data.vertices)):
        draft.student(f"v{i + 1}", [f"e{t + 1}" for t in incident[i]] + [f"w{i + 1}"])
    edge_pair = {t: pair for pair, members in data.pair_edges.items() for t in members}
    for t, (i, j) in enumerate(data.edges):
        tail = [selector_ids[edge_pair[t]]] if t in edge_pair else []
        draft.school(f"e{t + 1}", [f"f{t + 1}", f"v{i + 1}", f"v{j + 1}"] + tail)
    for i in range(len(data.vertices)):
        draft.school(f"w{i + 1}", [f"v{i + 1}"])
    return draft


def gen_mcc(graph: nx.Graph, coloring: Mapping[Hashable, int]) -> Reduction:
    """
    Encode multi-colored clique as MinSumSP with budget C(h,2) + h

    Args:
        graph: Simple undirected graph
        coloring: Vertex -> color; h is the number of colors used

    Returns:
        Reduction with unit capacities
    """
    data = _colored(graph, coloring)
    selectors = {pair: f"s{_selector(pair)}" for pair in data.pair_edges}
    draft = _mcc_draft(data, selectors)
    for pair, members in data.pair_edges.items():
        draft.student(selectors[pair], [f"e{t + 1}" for t in members])
    budget = data.h * (data.h - 1) // 2 + data.h
    logger.info(f"Multi-colored clique encoding with h={data.h}, budget {budget}")
    return Reduction(draft.build(), budget)


def _clique_assignment(data: _ColoredGraph, clique: Sequence[Hashable],
                       selectors: Mapping[Tuple[int, int], str]) -> Dict[str, str]:
    position = {v: i for i, v in enumerate(data.vertices)}
    members = []
    for v in clique:
        if v not in position:
            raise ReductionInputError(f"clique names unknown vertex {v!r}")
        members.append(position[v])
    if sorted(data.colors[i] for i in members) != list(range(data.h)):
        raise ReductionInputError("clique must hold exactly one vertex of every color")
    edge_index = {edge: t for t, edge in enumerate(data.edges)}
    clique_edges = {}
    for i, j in combinations(sorted(members), 2):
        if (i, j) not in edge_index:
            raise ReductionInputError(f"{data.vertices[i]!r} and {data.vertices[j]!r} are not adjacent")
        clique_edges[tuple(sorted((data.colors[i], data.colors[j])))] = edge_index[(i, j)]

    assignment = {f"f{t + 1}": f"e{t + 1}" for t in range(len(data.edges))}
    for i in range(len(data.vertices)):
        assignment[f"v{i + 1}"] = f"w{i + 1}"
    for i in members:
        first = min(t for t in clique_edges.values() if i in data.edges[t])
        assignment[f"v{i + 1}"] = f"e{first + 1}"
    for pair, t in clique_edges.items():
        assignment[selectors[pair]] = f"e{t + 1}"
    return assignment


def witness_from_clique(instance: Instance, graph: nx.Graph, coloring: Mapping[Hashable, int],
                        clique: Sequence[Hashable]) -> Witness:
    """Stable perfect matching of the clique encoding; clique edge schools absorb the extra students"""
    data = _colored(graph, coloring)
    selectors = {pair: f"s{_selector(pair)}" for pair in data.pair_edges}
    return _witness(instance, _clique_assignment(data, clique, selectors))


def _gadget_id(pair: Tuple[int, int], name: str) -> str:
    return f"g{_selector(pair)}.{name}"


def gen_se_mcc(graph: nx.Graph, coloring: Mapping[Hashable, int]) -> Reduction:
    """
    Clique encoding for MinSumSE with no unassigned students

    Each edge selector is the fifth student of its own copy of example
    stable-eff; it lists its colour pair's edges before w3, w2, w1 of the copy.

    Args:
        graph: Simple undirected graph
        coloring: Vertex -> color

    Returns:
        Reduction with unit capacities and budget C(h,2) + h
    """
    data = _colored(graph, coloring)
    selectors = {pair: _gadget_id(pair, "u5") for pair in data.pair_edges}
    draft = _mcc_draft(data, selectors)
    for pair, members in data.pair_edges.items():
        for sid, prefs in STABLE_EFF_PREFERENCES.items():
            local = [_gadget_id(pair, w) for w in prefs]
            if sid == "u5":
                local = [f"e{t + 1}" for t in members] + local
            draft.student(_gadget_id(pair, sid), local)
        for wid, prio in STABLE_EFF_PRIORITIES.items():
            draft.school(_gadget_id(pair, wid), [_gadget_id(pair, u) for u in prio])
    budget = data.h * (data.h - 1) // 2 + data.h
    logger.info(f"Stable-efficient clique encoding with h={data.h}, budget {budget}")
    return Reduction(draft.build(), budget)


def se_mcc_witness(instance: Instance, graph: nx.Graph, coloring: Mapping[Hashable, int],
                   clique: Sequence[Hashable]) -> Witness:
    """Stable, perfect and efficient matching of the stable-efficient clique encoding"""
    data = _colored(graph, coloring)
    selectors = {pair: _gadget_id(pair, "u5") for pair in data.pair_edges}
    assignment = _clique_assignment(data, clique, selectors)
    for pair in data.pair_edges:
        for sid, wid in (("u2", "w1"), ("u3", "w2"), ("u4", "w3"), ("u1", "w4")):
            assignment[_gadget_id(pair, sid)] = _gadget_id(pair, wid)
    return _witness(instance, assignment)


# ---------------------------------------------------------------------------
# (2,2)-3SAT gadgets
# ---------------------------------------------------------------------------

def _type1(draft: InstanceDraft, prefix: str, eta: int, c_head: Sequence[str] = ()) -> None:
    """Clause gadget: u1, u2, c with schools w1..w3 and two chains of eta dummies"""
    def name(local: str) -> str:
        return prefix + local

    def chain(i: int) -> List[str]:
        return [name(f"d{i}_{j}") for j in range(1, eta + 1)]

    draft.student(name("u1"), [name("w1"), name("w2")])
    draft.student(name("u2"), [name("w1"), name("w2"), name("w3")])
    draft.student(name("c"), list(c_head) + [name("w2"), name("w1")])
    for i in (1, 2):
        for j in range(1, eta + 1):
            draft.student(name(f"d{i}_{j}"), [name(f"w{i}"), name(f"s{i}_{j}")])

    draft.school(name("w1"), [name("c"), name("u1")] + chain(1) + [name("u2")])
    draft.school(name("w2"), [name("u1"), name("u2")] + chain(2) + [name("c")])
    draft.school(name("w3"), [name("u2")])
    for i in (1, 2):
        for j in range(1, eta + 1):
            draft.school(name(f"s{i}_{j}"), [name(f"d{i}_{j}")])


def _type2(draft: InstanceDraft, prefix: str, eta: int,
           t_head: Sequence[str] = (), f_head: Sequence[str] = ()) -> None:
    """Variable gadget: p1..p3, T, F with schools z1..z5 and two chains of eta dummies"""
    def name(local: str) -> str:
        return prefix + local

    def chain(i: int) -> List[str]:
        return [name(f"e{i}_{j}") for j in range(1, eta + 1)]

    draft.student(name("p1"), [name("z1"), name("z2")])
    draft.student(name("p2"), [name("z1"), name("z2"), name("z3")])
    draft.student(name("p3"), [name("z2"), name("z1"), name("z4")])
    draft.student(name("T"), list(t_head) + [name("z1")])
    draft.student(name("F"), list(f_head) + [name("z1"), name("z5")])
    for i in (1, 2):
        for j in range(1, eta + 1):
            draft.student(name(f"e{i}_{j}"), [name(f"z{i}"), name(f"t{i}_{j}")])

    draft.school(name("z1"), [name("T"), name("F"), name("p3")] + chain(1) + [name("p1"), name("p2")])
    draft.school(name("z2"), [name("p1")] + chain(2) + [name("p2"), name("p3")])
    draft.school(name("z3"), [name("p2")])
    draft.school(name("z4"), [name("p3")])
    draft.school(name("z5"), [name("F")])
    for i in (1, 2):
        for j in range(1, eta + 1):
            draft.school(name(f"t{i}_{j}"), [name(f"e{i}_{j}")])


def type1_gadget(eta: int = SAT_GADGET_ETA) -> Instance:
    """Stand-alone clause gadget (3 + 2*eta students and schools)"""
    if eta < 1:
        raise ReductionInputError("gadget chains need eta >= 1")
    draft = InstanceDraft()
    _type1(draft, "", eta)
    return draft.build()


def type2_gadget(eta: int = SAT_GADGET_ETA) -> Instance:
    """Stand-alone variable gadget (5 + 2*eta students and schools)"""
    if eta < 1:
        raise ReductionInputError("gadget chains need eta >= 1")
    draft = InstanceDraft()
    _type2(draft, "", eta)
    return draft.build()


Formula = Sequence[Sequence[int]]


def _check_formula(formula: Formula) -> int:
    """Number of variables of a (2,2)-3SAT formula, or ReductionInputError"""
    if not formula:
        raise ReductionInputError("formula has no clauses")
    positive, negative = Counter(), Counter()
    for j, clause in enumerate(formula, start=1):
        if len(clause) != 3:
            raise ReductionInputError(f"clause {j} has {len(clause)} literals, expected 3")
        if len(set(clause)) != 3:
            raise ReductionInputError(f"clause {j} repeats a literal")
        for literal in clause:
            if literal == 0:
                raise ReductionInputError(f"clause {j} contains literal 0")
            (positive if literal > 0 else negative)[abs(literal)] += 1
    n_vars = max(max(abs(lit) for lit in clause) for clause in formula)
    for x in range(1, n_vars + 1):
        if positive[x] != 2 or negative[x] != 2:
            raise ReductionInputError(
                f"variable {x} occurs {positive[x]} times positive and {negative[x]} times negated, expected 2 and 2"
            )
    return n_vars


def _literal_school(literal: int) -> str:
    return f"x{literal}" if literal > 0 else f"~x{-literal}"


def gen_sat22(formula: Formula, eta: int = SAT_GADGET_ETA) -> Reduction:
    """
    Encode (2,2)-3SAT as MinMaxSE with budget 3 (the MinSumSE budget is 3 times the variable count)

    One clause gadget per clause whose c student first lists its three literal
    schools; one variable gadget per variable whose T and F students first list
    x_i and ~x_i. Literal school x_i ranks its dummy y_i, then T, then the
    clause students of its two occurrences.

    Args:
        formula: Clauses of three signed variable indices (1-based)
        eta: Dummy-chain length, at least 3

    Returns:
        Reduction with unit capacities and no unassigned students
    """
    if eta < 3:
        raise ReductionInputError("gen_sat22 needs eta >= 3")
    n_vars = _check_formula(formula)
    occurrences: Dict[int, List[int]] = {}
    for j, clause in enumerate(formula, start=1):
        for literal in clause:
            occurrences.setdefault(literal, []).append(j)

    draft = InstanceDraft()
    for j, clause in enumerate(formula, start=1):
        _type1(draft, f"C{j}.", eta, [_literal_school(lit) for lit in clause])
    for x in range(1, n_vars + 1):
        _type2(draft, f"X{x}.", eta, [f"x{x}"], [f"~x{x}"])
    for x in range(1, n_vars + 1):
        for literal, head in ((x, f"X{x}.T"), (-x, f"X{x}.F")):
            school = _literal_school(literal)
            dummy = f"y{x}" if literal > 0 else f"~y{x}"
            draft.student(dummy, [school])
            draft.school(school, [dummy, head] + [f"C{j}.c" for j in occurrences[literal]])
    instance = draft.build()
    logger.info(f"(2,2)-3SAT encoding: {n_vars} variables, {len(formula)} clauses, eta={eta}")
    return Reduction(instance, 3)


def sat22_witness(instance: Instance, formula: Formula,
                  assignment: Union[Mapping[int, bool], Sequence[bool]], eta: int = SAT_GADGET_ETA) -> Witness:
    """
    Stable, perfect and efficient matching of the SAT encoding from a satisfying assignment

    True literal schools take three extra seats; each clause student sits at its
    first true literal; the gadgets settle into their efficient interiors.

    Args:
        instance: Output of gen_sat22 for the same formula and eta
        formula: Clauses of signed variable indices
        assignment: Variable (1-based) -> truth value, or a sequence indexed from variable 1
        eta: Dummy-chain length used by gen_sat22
    """
    n_vars = _check_formula(formula)
    if isinstance(assignment, Mapping):
        truth = {x: bool(assignment[x]) for x in range(1, n_vars + 1)}
    else:
        if len(assignment) != n_vars:
            raise ReductionInputError(f"assignment has {len(assignment)} values, expected {n_vars}")
        truth = {x: bool(value) for x, value in enumerate(assignment, start=1)}

    def holds(literal: int) -> bool:
        return truth[abs(literal)] == (literal > 0)

    matching = {}
    for j, clause in enumerate(formula, start=1):
        first_true = next((lit for lit in clause if holds(lit)), None)
        if first_true is None:
            raise ReductionInputError(f"assignment falsifies clause {j}")
        prefix = f"C{j}."
        matching[f"{prefix}c"] = _literal_school(first_true)
        matching[f"{prefix}u1"] = f"{prefix}w1"
        matching[f"{prefix}u2"] = f"{prefix}w2"
        for i in (1, 2):
            for k in range(1, eta + 1):
                matching[f"{prefix}d{i}_{k}"] = f"{prefix}s{i}_{k}"
    for x in range(1, n_vars + 1):
        prefix = f"X{x}."
        matching[f"y{x}"] = f"x{x}"
        matching[f"~y{x}"] = f"~x{x}"
        outside, inside = ("T", "F") if truth[x] else ("F", "T")
        matching[f"{prefix}{outside}"] = _literal_school(x if truth[x] else -x)
        matching[f"{prefix}{inside}"] = f"{prefix}z1"
        matching[f"{prefix}p1"] = f"{prefix}z2"
        matching[f"{prefix}p2"] = f"{prefix}z3"
        matching[f"{prefix}p3"] = f"{prefix}z4"
        for i in (1, 2):
            for k in range(1, eta + 1):
                matching[f"{prefix}e{i}_{k}"] = f"{prefix}t{i}_{k}"

    extra = {_literal_school(x if truth[x] else -x): 3 for x in range(1, n_vars + 1)}
    return Witness(instance.increase(extra), instance.matching(matching))


def formula_from_document(document: FormulaDocument) -> List[Tuple[int, ...]]:
    formula = [tuple(clause) for clause in document.clauses]
    for clause in formula:
        if any(abs(lit) > document.variables for lit in clause):
            raise ReductionInputError(f"clause {list(clause)} uses a variable above {document.variables}")
    return formula


def sets_from_document(document: SetSystemDocument) -> Tuple[List[List[int]], int]:
    return [list(members) for members in document.sets], document.universe


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def gen_random(n: int, m: int,
               cap_range: Tuple[int, int] = RANDOM_INSTANCE_DEFAULTS["cap_range"],
               pref_len_range: Optional[Tuple[int, Optional[int]]] = None,
               seed: int = RANDOM_INSTANCE_DEFAULTS["seed"]) -> Instance:
    """
    Seeded random instance with consistent acceptability

    Each student samples a preference list without replacement; a school's
    priority list is a seeded shuffle of the students who list it. Schools
    nobody lists are left out and keep their sampled identifiers.

    Args:
        n: Number of students
        m: Number of schools before dropping unlisted ones
        cap_range: Inclusive capacity range
        pref_len_range: Inclusive preference-length range (upper end defaults to m)
        seed: numpy seed

    Returns:
        Instance
    """
    if n < 1 or m < 1:
        raise ReductionInputError("gen_random needs n >= 1 and m >= 1")
    low_len, high_len = pref_len_range or RANDOM_INSTANCE_DEFAULTS["pref_len_range"]
    high_len = m if high_len is None else min(high_len, m)
    low_cap, high_cap = cap_range
    if not 1 <= low_len <= high_len or not 1 <= low_cap <= high_cap:
        raise ReductionInputError(f"invalid ranges: lengths {pref_len_range}, capacities {cap_range}")

    rng = np.random.default_rng(seed)
    capacities = rng.integers(low_cap, high_cap + 1, size=m)
    preferences = {}
    members: List[List[str]] = [[] for _ in range(m)]
    for u in range(n):
        length = int(rng.integers(low_len, high_len + 1))
        schools = [int(w) for w in rng.choice(m, size=length, replace=False)]
        sid = f"u{u + 1}"
        preferences[sid] = [f"w{w + 1}" for w in schools]
        for w in schools:
            members[w].append(sid)

    draft = InstanceDraft()
    for sid, prefs in preferences.items():
        draft.student(sid, prefs)
    for w in range(m):
        if members[w]:
            order = rng.permutation(len(members[w]))
            draft.school(f"w{w + 1}", [members[w][k] for k in order], int(capacities[w]))
    try:
        return draft.build()
    except InstanceValidationError as exc:
        raise ReductionInputError(f"random instance is invalid: {exc}") from exc
