"""Target graphs, fitness evaluation, and the evolutionary loop.

The vectorized fitness path is held against the scalar best-k contract,
including engineered distance ties, because the two routes must agree
exactly for the trajectories to mean anything.
"""

import numpy as np
import pytest

from tagmatch.bitstring import Tag, derive_seed, derive_stream
from tagmatch.engine import MatchEngine
from tagmatch.evolve import (
    EvolutionConfig,
    Genome,
    GraphStructure,
    TargetGraph,
    default_sweep_rates,
    evaluate_fitness,
    evolve,
    flips_to_per_bit,
    generate_target_graph,
    load_graph,
    mutation_rate_sweep,
    population_fitness,
    random_genome,
    run_evolutions,
    save_graph,
)
from tagmatch.metrics import MetricKind

WIDTH = 32


def _config(**overrides):
    base = dict(
        per_bit_mutation_rate=2 / (16 * WIDTH),
        replicate_seed=derive_seed(70, 0),
        population_size=30,
        generations=15,
        tournament_size=7,
    )
    base.update(overrides)
    return EvolutionConfig(**base)


# --- graphs -------------------------------------------------------------------


def test_regular_degree_1_is_a_perfect_matching():
    for seed in range(30):
        g = generate_target_graph(32, 1, GraphStructure.REGULAR, derive_stream(71, seed))
        assert g.query_count == g.operand_count == 16
        assert len(g.edges) == 16
        assert sorted(q for q, _ in g.edges) == list(range(16))
        assert sorted(o for _, o in g.edges) == list(range(16))


def test_regular_degree_2_is_two_disjoint_matchings():
    for seed in range(30):
        g = generate_target_graph(32, 2, GraphStructure.REGULAR, derive_stream(72, seed))
        assert len(g.edges) == 32
        assert len(set(g.edges)) == 32  # edge-disjoint
        degrees_q = np.zeros(16, dtype=int)
        degrees_o = np.zeros(16, dtype=int)
        for q, o in g.edges:
            degrees_q[q] += 1
            degrees_o[o] += 1
        assert np.all(degrees_q == 2)
        assert np.all(degrees_o == 2)


def test_irregular_draws_distinct_edges():
    saw_uneven = False
    for seed in range(30):
        g = generate_target_graph(32, 2, GraphStructure.IRREGULAR, derive_stream(73, seed))
        assert len(g.edges) == 32
        assert len(set(g.edges)) == 32
        assert all(0 <= q < 16 and 0 <= o < 16 for q, o in g.edges)
        if len(set(g.out_degrees())) > 1:
            saw_uneven = True
    assert saw_uneven  # degrees are not forced to be uniform


def test_graph_argument_validation():
    rng = derive_stream(74, 0)
    with pytest.raises(ValueError):
        generate_target_graph(31, 1, GraphStructure.REGULAR, rng)
    with pytest.raises(ValueError):
        generate_target_graph(32, 3, GraphStructure.REGULAR, rng)
    with pytest.raises(ValueError):
        generate_target_graph(0, 1, GraphStructure.IRREGULAR, rng)


def test_graph_round_trip(tmp_path):
    g = generate_target_graph(16, 2, GraphStructure.IRREGULAR, derive_stream(75, 0))
    path = tmp_path / "graph.txt"
    save_graph(g, path)
    assert load_graph(path) == g


# --- fitness ------------------------------------------------------------------


def _perfect_genome(graph, width=WIDTH):
    # query tags equal their matched operand tag; all tags distinct
    tags = [Tag(1000 + i, width) for i in range(graph.query_count + graph.operand_count)]
    for q, o in graph.edges:
        tags[q] = Tag(2000 + o, width)
        tags[graph.query_count + o] = Tag(2000 + o, width)
    return Genome(tags=tuple(tags))


def test_perfect_genome_scores_one(engines):
    g = generate_target_graph(32, 1, GraphStructure.REGULAR, derive_stream(76, 0))
    for kind in (MetricKind.HAMMING, MetricKind.INTEGER_BI, MetricKind.STREAK):
        assert evaluate_fitness(engines[kind], _perfect_genome(g), g) == 1.0


def test_random_genome_fitness_near_chance(engines):
    # chance level on regular degree-1 with 16 operands is 1/16
    g = generate_target_graph(32, 1, GraphStructure.REGULAR, derive_stream(77, 0))
    rng = derive_stream(77, 1)
    tags = rng.gen.integers(0, 1 << WIDTH, size=(2_000, 32), dtype=np.uint64)
    fits = population_fitness(engines[MetricKind.HAMMING], tags, g)
    assert 0.050 < fits.mean() < 0.075


def test_population_fitness_matches_scalar_contract(engines):
    engine = engines[MetricKind.INTEGER]
    g = generate_target_graph(16, 2, GraphStructure.IRREGULAR, derive_stream(78, 0))
    rng = derive_stream(78, 1)
    tags = rng.gen.integers(0, 1 << WIDTH, size=(40, 16), dtype=np.uint64)
    # engineered ties: make some operands identical within a genome
    tags[:10, 12] = tags[:10, 9]
    tags[5:15, 10] = tags[5:15, 9]
    vector = population_fitness(engine, tags, g)
    for p in range(len(tags)):
        genome = Genome(tags=tuple(Tag(int(v), WIDTH) for v in tags[p]))
        assert vector[p] == evaluate_fitness(engine, genome, g)


def test_fitness_handles_zero_degree_queries(engines):
    # irregular graphs can starve a query of edges; those queries are skipped
    edges = ((0, 0), (0, 1), (2, 2), (2, 3))  # query 1 and 3 have no edges
    g = TargetGraph(
        query_count=4,
        operand_count=4,
        edges=edges,
        mean_degree=1,
        structure=GraphStructure.IRREGULAR,
        gen_seed=0,
    )
    genome = random_genome(WIDTH, 8, derive_stream(79, 0))
    f = evaluate_fitness(engines[MetricKind.HAMMING], genome, g)
    assert 0.0 <= f <= 1.0


# --- evolution ------------------------------------------------------------------


def test_evolution_is_deterministic(engines):
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(80, 0))
    engine = engines[MetricKind.HAMMING]
    a = evolve(_config(), engine, g)
    b = evolve(_config(), engine, g)
    assert a.max_fitness == b.max_fitness
    assert a.mean_fitness == b.mean_fitness
    assert a.best_genome == b.best_genome


def test_trajectory_shape(engines):
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(80, 1))
    t = evolve(_config(generations=9), engines[MetricKind.HAMMING], g)
    # rows count generations, with row 0 the random initial population
    assert len(t.max_fitness) == 9
    assert len(t.mean_fitness) == 9
    assert all(0.0 <= f <= 1.0 for f in t.max_fitness)
    assert all(m <= x for m, x in zip(t.mean_fitness, t.max_fitness))


def test_best_genome_attains_final_max(engines):
    engine = engines[MetricKind.STREAK]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(80, 2))
    t = evolve(_config(), engine, g)
    assert evaluate_fitness(engine, t.best_genome, g) == t.max_fitness[-1]


def test_zero_mutation_rate_never_loses_the_best(engines):
    engine = engines[MetricKind.HAMMING]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(81, 0))
    for seed in range(10):
        t = evolve(
            _config(per_bit_mutation_rate=0.0, replicate_seed=derive_seed(81, seed)),
            engine,
            g,
        )
        # after one selection round the best holds multiple slots, so
        # from generation 1 on the max cannot fall
        tail = t.max_fitness[1:]
        assert all(a <= b for a, b in zip(tail, tail[1:]))


def test_zero_rate_population_stays_within_initial_genomes(engines):
    engine = engines[MetricKind.INTEGER_BI]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(81, 1))
    seen = []
    evolve(
        _config(per_bit_mutation_rate=0.0, generations=6),
        engine,
        g,
        observer=lambda gen, tags, fitness: seen.append(tags),
    )
    initial = {tuple(row) for row in seen[0]}
    for tags in seen[1:]:
        assert {tuple(row) for row in tags} <= initial


def test_single_individual_population(engines):
    engine = engines[MetricKind.HAMMING]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(82, 0))
    t = evolve(_config(population_size=1, tournament_size=1, generations=8), engine, g)
    assert t.max_fitness == t.mean_fitness  # one individual carries both


def test_run_evolutions_preserves_order_and_matches_serial(engines):
    engine = engines[MetricKind.HAMMING]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(83, 0))
    configs = [_config(replicate_seed=derive_seed(83, i)) for i in range(3)]
    serial = [evolve(c, engine, g) for c in configs]
    batched = run_evolutions(configs, engine, g, jobs=2)
    assert batched == serial


def test_config_validation():
    with pytest.raises(ValueError):
        _config(per_bit_mutation_rate=-0.1)
    with pytest.raises(ValueError):
        _config(per_bit_mutation_rate=1.1)
    with pytest.raises(ValueError):
        _config(population_size=0)
    with pytest.raises(ValueError):
        _config(tournament_size=0)
    with pytest.raises(ValueError):
        _config(tournament_size=31)  # exceeds population
    with pytest.raises(ValueError):
        _config(generations=0)


# --- sweep ---------------------------------------------------------------------


def test_flips_to_per_bit():
    assert flips_to_per_bit(16.0, 32, 32) == 0.015625
    assert flips_to_per_bit(2.0, 32, 32) == 2 / 1024


def test_default_sweep_rates_are_log_spaced():
    rates = default_sweep_rates()
    assert len(rates) == 10
    assert rates[0] == pytest.approx(0.75)
    assert rates[-1] == pytest.approx(16.0)
    ratios = [b / a for a, b in zip(rates, rates[1:])]
    assert all(r == pytest.approx(ratios[0]) for r in ratios)


def test_sweep_selects_the_best_scoring_rate(engines):
    engine = engines[MetricKind.HAMMING]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(84, 0))
    base = _config(generations=10, population_size=20)
    result = mutation_rate_sweep(
        base, engine, g, rates=[0.5, 2.0, 8.0], replicates=2, jobs=1
    )
    assert result.rates_flips_per_genome == (0.5, 2.0, 8.0)
    assert len(result.per_bit_rates) == 3
    assert np.asarray(result.replicate_scores).shape == (3, 2)
    # recompute the scores from the returned trajectories
    for i, runs in enumerate(result.trajectories):
        for j, t in enumerate(runs):
            assert result.replicate_scores[i][j] == sum(t.max_fitness)
        assert result.mean_scores[i] == pytest.approx(
            np.mean(result.replicate_scores[i])
        )
    best = int(np.argmax(result.mean_scores))
    assert result.selected_rate == result.rates_flips_per_genome[best]
    assert result.selected_per_bit == result.per_bit_rates[best]


def test_sweep_is_deterministic(engines):
    engine = engines[MetricKind.INTEGER]
    g = generate_target_graph(16, 1, GraphStructure.REGULAR, derive_stream(84, 1))
    base = _config(generations=6, population_size=12)
    a = mutation_rate_sweep(base, engine, g, rates=[1.0, 4.0], replicates=2, jobs=1)
    b = mutation_rate_sweep(base, engine, g, rates=[1.0, 4.0], replicates=2, jobs=1)
    assert a == b
