"""Evolving tag genomes to mirror a target bipartite graph.

A genome holds one tag per graph node, queries first. Fitness asks,
for every query with outgoing edges, which k operands its tag matches
best (k = the query's out-degree), and scores the fraction of all
edges that these best-match pairs reproduce.

Selection is tournament-based with full generational replacement and
no elitism; variation is per-bit mutation only. The generation loop
keeps the population's raw distance matrices incrementally up to
date, which is exact because normalization is monotone: ranking by
raw distance equals ranking by normalized distance, ties included.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .bitstring import RngStream, Tag, derive_seed
from .kernels import raw_distance_batch, uniform_tag_values
from .metrics import MetricKind

DEFAULT_POPULATION = 500
DEFAULT_GENERATIONS = 512
DEFAULT_TOURNAMENT = 7
DEFAULT_SWEEP_MIN_FLIPS = 0.75
DEFAULT_SWEEP_MAX_FLIPS = 16.0
DEFAULT_SWEEP_POINTS = 10


class GraphStructure(str, Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"


@dataclass(frozen=True)
class TargetGraph:
    """Bipartite target: query nodes 0..Q-1, operand nodes 0..O-1."""

    query_count: int
    operand_count: int
    edges: tuple  # (query_index, operand_index) pairs, no duplicates
    mean_degree: int
    structure: GraphStructure
    gen_seed: int

    def __post_init__(self) -> None:
        seen = set()
        for q, o in self.edges:
            if not (0 <= q < self.query_count and 0 <= o < self.operand_count):
                raise ValueError(f"edge ({q}, {o}) out of range")
            if (q, o) in seen:
                raise ValueError(f"duplicate edge ({q}, {o})")
            seen.add((q, o))
        if len(self.edges) != self.query_count * self.mean_degree:
            raise ValueError("edge count must equal query_count * mean_degree")

    def out_degrees(self) -> np.ndarray:
        degrees = np.zeros(self.query_count, dtype=np.int64)
        for q, _ in self.edges:
            degrees[q] += 1
        return degrees


def generate_target_graph(
    node_count: int,
    mean_degree: int,
    structure: GraphStructure,
    rng: RngStream,
) -> TargetGraph:
    """Generates a random target graph over an even node split.

    Regular graphs give every node exact degree `mean_degree` via one
    or two uniformly random perfect matchings (the second resampled
    until edge-disjoint from the first). Irregular graphs draw
    query_count * mean_degree edges uniformly without replacement, so
    individual degrees vary and zero-degree queries are possible.
    """
    structure = GraphStructure(structure)
    if node_count < 2 or node_count % 2 != 0:
        raise ValueError(f"node_count must be even and >= 2, got {node_count}")
    if mean_degree not in (1, 2):
        raise ValueError(f"mean_degree must be 1 or 2, got {mean_degree}")
    q_count = o_count = node_count // 2
    if structure is GraphStructure.REGULAR and mean_degree > o_count:
        raise ValueError("regular degree exceeds operand count")
    gen = rng.gen
    if structure is GraphStructure.REGULAR:
        first = gen.permutation(o_count)
        edges = [(q, int(first[q])) for q in range(q_count)]
        if mean_degree == 2:
            while True:
                second = gen.permutation(o_count)
                if np.all(second != first):
                    break
            edges.extend((q, int(second[q])) for q in range(q_count))
    else:
        edge_count = q_count * mean_degree
        flat = gen.choice(q_count * o_count, size=edge_count, replace=False)
        edges = [(int(f) // o_count, int(f) % o_count) for f in flat]
    return TargetGraph(
        query_count=q_count,
        operand_count=o_count,
        edges=tuple(sorted(edges)),
        mean_degree=mean_degree,
        structure=structure,
        gen_seed=derive_seed(rng.root_seed, *rng.stream_key),
    )


def save_graph(graph: TargetGraph, path) -> None:
    lines = [
        f"query_count {graph.query_count}",
        f"operand_count {graph.operand_count}",
        f"mean_degree {graph.mean_degree}",
        f"structure {graph.structure.value}",
        f"gen_seed {graph.gen_seed}",
    ]
    lines.extend(f"{q},{o}" for q, o in graph.edges)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def load_graph(path) -> TargetGraph:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    header = {}
    for i, key in enumerate(
        ("query_count", "operand_count", "mean_degree", "structure", "gen_seed")
    ):
        if i >= len(lines) or not lines[i].startswith(key + " "):
            raise ValueError(f"graph header line {i + 1} must be '{key} <value>'")
        header[key] = lines[i][len(key) + 1 :]
    edges = []
    for line in lines[5:]:
        q_text, _, o_text = line.partition(",")
        edges.append((int(q_text), int(o_text)))
    return TargetGraph(
        query_count=int(header["query_count"]),
        operand_count=int(header["operand_count"]),
        edges=tuple(edges),
        mean_degree=int(header["mean_degree"]),
        structure=GraphStructure(header["structure"]),
        gen_seed=int(header["gen_seed"]),
    )


@dataclass(frozen=True)
class Genome:
    """One tag per node; queries first, then operands."""

    tags: tuple


@dataclass(frozen=True)
class EvolutionConfig:
    per_bit_mutation_rate: float
    replicate_seed: int
    population_size: int = DEFAULT_POPULATION
    generations: int = DEFAULT_GENERATIONS
    tournament_size: int = DEFAULT_TOURNAMENT

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("tournament_size must be in [1, population_size]")
        if not 0.0 <= self.per_bit_mutation_rate <= 1.0:
            raise ValueError("per_bit_mutation_rate must be in [0, 1]")


@dataclass(frozen=True)
class Trajectory:
    """Per-generation fitness records; index 0 is the random start."""

    max_fitness: tuple
    mean_fitness: tuple
    best_genome: Genome


def random_genome(width: int, node_count: int, rng: RngStream) -> Genome:
    values = uniform_tag_values(rng.gen, node_count, width)
    return Genome(tags=tuple(Tag(int(v), width) for v in values))


def evaluate_fitness(engine, genome: Genome, graph: TargetGraph) -> float:
    """Fraction of edges reproduced by best-k matching; the contract path.

    For each query q with out-degree k >= 1, asks the engine for the k
    best-matching operand indices of q's tag among the genome's
    operand tags and counts how many returned (q, o) pairs are edges.
    Queries without edges contribute nothing.
    """
    q_count, o_count = graph.query_count, graph.operand_count
    if len(genome.tags) != q_count + o_count:
        raise ValueError("genome size does not match graph node count")
    operand_tags = list(genome.tags[q_count:])
    edge_set = set(graph.edges)
    degrees = graph.out_degrees()
    correct = 0
    for q in range(q_count):
        k = int(degrees[q])
        if k == 0:
            continue
        for o in engine.best_k_matches(genome.tags[q], operand_tags, k):
            if (q, o) in edge_set:
                correct += 1
    return correct / len(graph.edges)


class _FitnessEvaluator:
    """Vectorized fitness over a population tag matrix.

    Works on raw distances; normalization is monotone so best-k sets
    and their lowest-index tie-breaks are unchanged (tests pin this
    against evaluate_fitness).
    """

    def __init__(self, engine, graph: TargetGraph) -> None:
        self.metric = MetricKind(engine.metric)
        self.width = engine.width
        self.q_count = graph.query_count
        self.o_count = graph.operand_count
        edges = np.array(graph.edges, dtype=np.int64)
        self.edge_queries = edges[:, 0]
        self.edge_operands = edges[:, 1]
        degrees = graph.out_degrees()
        self.edge_k = degrees[self.edge_queries]
        # lower_index[e, j]: operand j breaks a distance tie against edge e's operand
        self.lower_index = np.arange(self.o_count)[None, :] < self.edge_operands[:, None]

    def full_matrix(self, tags: np.ndarray) -> np.ndarray:
        pop, _ = tags.shape
        shape = (pop, self.q_count, self.o_count)
        queries = np.ascontiguousarray(
            np.broadcast_to(tags[:, : self.q_count, None], shape)
        )
        operands = np.ascontiguousarray(
            np.broadcast_to(tags[:, None, self.q_count :], shape)
        )
        return raw_distance_batch(self.metric, queries, operands, self.width)

    def fitness(self, matrix: np.ndarray) -> np.ndarray:
        """Edge hit fractions from a (pop, Q, O) raw distance matrix."""
        edge_rows = matrix[:, self.edge_queries, :]
        edge_cells = matrix[:, self.edge_queries, self.edge_operands][:, :, None]
        beats = (edge_rows < edge_cells) | (
            (edge_rows == edge_cells) & self.lower_index[None, :, :]
        )
        ranks = beats.sum(axis=2)
        correct = (ranks < self.edge_k[None, :]).sum(axis=1)
        return correct / len(self.edge_queries)


def population_fitness(engine, tags: np.ndarray, graph: TargetGraph) -> np.ndarray:
    """Vectorized evaluate_fitness over rows of packed tag values."""
    evaluator = _FitnessEvaluator(engine, graph)
    return evaluator.fitness(evaluator.full_matrix(np.asarray(tags, dtype=np.uint64)))


def evolve(config: EvolutionConfig, engine, graph: TargetGraph, observer=None) -> Trajectory:
    """Runs one replicate; deterministic for a given replicate_seed.

    Records population-max and population-mean fitness for
    config.generations generations, generation 0 being the uniformly
    random starting population. Offspring are tournament winners
    (ties to the lower population index) mutated per bit; there is no
    elitism. The optional observer is called with
    (generation_index, tags_matrix, fitness_array) after each
    evaluation.
    """
    node_count = graph.query_count + graph.operand_count
    width = engine.width
    if width > 64:
        raise ValueError("evolution supports widths up to 64")
    evaluator = _FitnessEvaluator(engine, graph)
    pop = config.population_size
    rate = config.per_bit_mutation_rate
    gen = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([int(config.replicate_seed)]))
    )

    tags = uniform_tag_values(gen, (pop, node_count), width)
    matrix = evaluator.full_matrix(tags)
    packed_bytes = (width + 7) // 8
    max_trace = []
    mean_trace = []
    fitness = None

    for generation in range(config.generations):
        fitness = evaluator.fitness(matrix)
        max_trace.append(float(fitness.max()))
        mean_trace.append(float(fitness.mean()))
        if observer is not None:
            observer(generation, tags.copy(), fitness.copy())
        if generation == config.generations - 1:
            break

        # Tournament selection, full replacement.
        entrants = gen.integers(0, pop, size=(pop, config.tournament_size))
        entrant_fitness = fitness[entrants]
        winning = entrant_fitness.max(axis=1, keepdims=True)
        winners = np.where(entrant_fitness == winning, entrants, pop).min(axis=1)
        tags = tags[winners]
        matrix = matrix[winners]

        # Per-bit mutation of every offspring.
        if rate > 0.0:
            flips = gen.random((pop, node_count, width)) < rate
            packed = np.packbits(flips, axis=2, bitorder="little")
            buffer = np.zeros((pop, node_count, 8), dtype=np.uint8)
            buffer[:, :, :packed_bytes] = packed
            flip_values = buffer.view("<u8")[:, :, 0]
            tags = tags ^ flip_values
            dirty = flip_values != 0
            self_update_pairs = (
                dirty[:, : evaluator.q_count].sum() * evaluator.o_count
                + dirty[:, evaluator.q_count :].sum() * evaluator.q_count
            )
            if self_update_pairs * 2 >= pop * evaluator.q_count * evaluator.o_count:
                matrix = evaluator.full_matrix(tags)
            else:
                _update_matrix(evaluator, matrix, tags, dirty)

    best_index = int(np.argmax(fitness))
    best = Genome(tags=tuple(Tag(int(v), width) for v in tags[best_index]))
    return Trajectory(
        max_fitness=tuple(max_trace), mean_fitness=tuple(mean_trace), best_genome=best
    )


def _update_matrix(evaluator, matrix, tags, dirty) -> None:
    """Recomputes only the rows/columns touched by mutated tags."""
    q_count, o_count = evaluator.q_count, evaluator.o_count
    rows, row_queries = np.nonzero(dirty[:, :q_count])
    if rows.size:
        queries = np.repeat(tags[rows, row_queries][:, None], o_count, axis=1)
        operands = tags[rows][:, q_count:]
        matrix[rows, row_queries] = raw_distance_batch(
            evaluator.metric, queries, operands, evaluator.width
        )
    cols, col_operands = np.nonzero(dirty[:, q_count:])
    if cols.size:
        operands = np.repeat(tags[cols, q_count + col_operands][:, None], q_count, axis=1)
        queries = tags[cols][:, :q_count]
        matrix[cols, :, col_operands] = raw_distance_batch(
            evaluator.metric, queries, operands, evaluator.width
        )


def _run_one(task):
    config, engine, graph = task
    return evolve(config, engine, graph)


def run_evolutions(configs, engine, graph, jobs: int = 1) -> list:
    """Runs independent replicates, optionally across processes.

    Results come back in config order regardless of jobs, so outputs
    are identical whatever the parallelism.
    """
    tasks = [(config, engine, graph) for config in configs]
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_one(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


def flips_to_per_bit(flips_per_genome: float, node_count: int, width: int) -> float:
    """Converts an expected-flips-per-genome rate to a per-bit rate."""
    if flips_per_genome < 0:
        raise ValueError("flips_per_genome must be >= 0")
    bits = node_count * width
    rate = flips_per_genome / bits
    if rate > 1.0:
        raise ValueError(f"rate {flips_per_genome} exceeds one flip per bit ({bits} bits)")
    return rate


def default_sweep_rates(
    low: float = DEFAULT_SWEEP_MIN_FLIPS,
    high: float = DEFAULT_SWEEP_MAX_FLIPS,
    points: int = DEFAULT_SWEEP_POINTS,
) -> tuple:
    """Log-spaced expected-flips-per-genome values, endpoints included."""
    if points < 2 or not 0 < low < high:
        raise ValueError("need points >= 2 and 0 < low < high")
    return tuple(float(r) for r in np.geomspace(low, high, points))


@dataclass(frozen=True)
class SweepResult:
    rates_flips_per_genome: tuple
    per_bit_rates: tuple
    replicate_scores: tuple  # per rate, per replicate: sum of max fitness
    mean_scores: tuple
    selected_rate: float
    selected_per_bit: float
    trajectories: tuple  # per rate, per replicate


def mutation_rate_sweep(
    base_config: EvolutionConfig,
    engine,
    graph: TargetGraph,
    rates=None,
    replicates: int = 3,
    jobs: int = 1,
) -> SweepResult:
    """Scores mutation rates and selects the best one.

    A replicate's score is the sum of population-max fitness across
    its generations; a rate's score is the mean over its replicates.
    The highest score wins, ties to the lower rate. Replicate seeds
    derive from (base replicate_seed, rate index, replicate index).
    """
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    node_count = graph.query_count + graph.operand_count
    rate_list = tuple(sorted(default_sweep_rates() if rates is None else rates))
    if not rate_list:
        raise ValueError("rates must be non-empty")
    per_bit = tuple(flips_to_per_bit(r, node_count, engine.width) for r in rate_list)

    configs = []
    for rate_index, bit_rate in enumerate(per_bit):
        for rep in range(replicates):
            configs.append(
                replace(
                    base_config,
                    per_bit_mutation_rate=bit_rate,
                    replicate_seed=derive_seed(base_config.replicate_seed, rate_index, rep),
                )
            )
    results = run_evolutions(configs, engine, graph, jobs=jobs)

    trajectories = []
    scores = []
    for rate_index in range(len(rate_list)):
        runs = results[rate_index * replicates : (rate_index + 1) * replicates]
        trajectories.append(tuple(runs))
        scores.append(tuple(float(np.sum(t.max_fitness)) for t in runs))
    mean_scores = tuple(float(np.mean(s)) for s in scores)
    selected_index = int(np.argmax(mean_scores))  # first max = lowest rate
    return SweepResult(
        rates_flips_per_genome=rate_list,
        per_bit_rates=per_bit,
        replicate_scores=tuple(scores),
        mean_scores=mean_scores,
        selected_rate=rate_list[selected_index],
        selected_per_bit=per_bit[selected_index],
        trajectories=tuple(trajectories),
    )
