"""Real-coded genetic algorithm that searches initial weights for BP training.

Each generation evaluates the unevaluated members, records the best fitness,
copies the elite unchanged, then fills the rest of the population by roulette
selection, single-position arithmetic crossover and annealed mutation. The
winner is decoded and trained with the full BP budget.

All selection, crossover and mutation draws come from one generator seeded
with ``GaConfig.seed``. Fitness evaluations get their own stream derived from
(seed, generation, index), so evaluating with one worker or many gives
bit-identical runs.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import InputError, LengthMismatch, NonFiniteLoss
from .models.dataset import Dataset
from .models.run_config import (Activation, BpConfig, CrossoverMode, GaConfig,
                                MutationVariant, NetShape)
from .network import (Chromosome, Network, TrainResult, decode, fitness_error,
                      train_bp)

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["generation", "best_fitness"]

FitnessFn = Callable[[Chromosome], float]


@dataclass
class Individual:
    chromosome: Chromosome
    fitness: Optional[float] = None

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None


@dataclass
class GaRun:
    best_per_generation: List[Tuple[int, float]]
    final_best: Individual
    config: GaConfig
    evaluations: int

    @property
    def best_fitnesses(self) -> List[float]:
        return [fitness for _, fitness in self.best_per_generation]

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.best_per_generation, columns=TRACE_COLUMNS)


@dataclass
class GaResult:
    """Trained network plus, for GA runs, the evolution record"""
    network: Network
    training: Optional[TrainResult] = None
    run: Optional[GaRun] = None
    initial: Optional[Chromosome] = None

    def trace_frame(self) -> pd.DataFrame:
        if self.run is None:
            return pd.DataFrame(columns=TRACE_COLUMNS)
        return self.run.trace_frame()


def _check_config(cfg: GaConfig):
    errors = cfg.errors()
    if errors:
        raise InputError("; ".join(errors), issues=errors, module="evolve")


def init_population(cfg: GaConfig, shape: NetShape,
                    rng: Optional[np.random.Generator] = None) -> List[Chromosome]:
    """N chromosomes with genes uniform in the configured bounds"""
    _check_config(cfg)
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    genes = rng.uniform(cfg.gene_min, cfg.gene_max, size=(cfg.pop_size, shape.gene_length))
    return [Chromosome(genes=row, bounds=cfg.bounds) for row in genes]


def selection_probs(fitnesses: Sequence[float], k: float = 1.0) -> np.ndarray:
    """p_i = g_i / sum(g) with g_i = k / G_i.

    Members with G = 0 share all of the probability uniformly. Members with
    G = +inf (failed evaluations) get g = 0; if every member failed the
    distribution is uniform.
    """
    G = np.asarray(fitnesses, dtype=float)
    if G.size == 0:
        raise InputError("cannot select from an empty population", module="evolve")
    if not k > 0:
        raise InputError(f"fitness coefficient k must be positive, got {k}", module="evolve")
    if np.isnan(G).any() or (G < 0).any():
        raise InputError("fitness values must be non-negative", module="evolve")

    perfect = G == 0.0
    if perfect.any():
        return perfect / perfect.sum()

    finite = np.isfinite(G)
    if not finite.any():
        logger.warning("Every individual failed evaluation; selecting uniformly")
        return np.full(G.size, 1.0 / G.size)

    g = np.zeros(G.size)
    g[finite] = k / G[finite]
    return g / g.sum()


def roulette_indices(probs: Sequence[float], count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent draws with replacement from ``probs``"""
    p = np.asarray(probs, dtype=float)
    if p.size == 0 or (p < 0).any() or not p.sum() > 0:
        raise InputError("roulette needs a non-negative distribution with positive mass",
                         module="evolve")
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(count), side="right")
    return np.minimum(draws, p.size - 1)


def roulette_select(population: Sequence[Individual], probs: Sequence[float], count: int,
                    rng: np.random.Generator) -> List[Individual]:
    if len(population) != len(probs):
        raise LengthMismatch(f"{len(population)} individuals but {len(probs)} probabilities",
                             module="evolve")
    return [population[i] for i in roulette_indices(probs, count, rng)]


def crossover(a: Chromosome, b: Chromosome, rng: np.random.Generator,
              mode: CrossoverMode = CrossoverMode.SIMULTANEOUS,
              position: Optional[int] = None,
              weight: Optional[float] = None) -> Tuple[Chromosome, Chromosome]:
    """Blend one gene position q with coefficient n in [0, 1].

    Simultaneous mode uses the parents' values in both formulas; sequential
    mode feeds the first child's new gene into the second formula.
    ``position`` and ``weight`` pin q and n instead of drawing them.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"cannot cross chromosomes of length {len(a)} and {len(b)}",
                             module="evolve")
    q = int(rng.integers(len(a))) if position is None else int(position)
    n = float(rng.random()) if weight is None else float(weight)
    if not 0.0 <= n <= 1.0:
        raise InputError(f"blend coefficient must lie in [0, 1], got {n}", module="evolve")

    a_q, b_q = a.genes[q], b.genes[q]
    low, high = min(a_q, b_q), max(a_q, b_q)
    new_a = a_q * (1.0 - n) + b_q * n
    partner = new_a if mode == CrossoverMode.SEQUENTIAL else a_q
    new_b = b_q * (1.0 - n) + partner * n

    genes_a = a.genes.copy()
    genes_b = b.genes.copy()
    # rounding must not push a blend outside the parents' interval
    genes_a[q] = min(max(new_a, low), high)
    genes_b[q] = min(max(new_b, low), high)
    return a.with_genes(genes_a), b.with_genes(genes_b)


def mutation_step(gene: float, r: float, r2: float, generation: int, max_generation: int,
                  low: float, high: float,
                  variant: MutationVariant = MutationVariant.LITERAL) -> float:
    """Move one gene with step f = r2 * (1 - generation / max_generation)^2.

    With ``MutationVariant.LITERAL`` an r > 0.5 draw moves the gene by
    (gene - high) * f, away from ``high``. ``STANDARD`` moves it toward ``high``.
    The result is clamped to [low, high].
    """
    f = r2 * (1.0 - generation / max_generation) ** 2
    if r > 0.5:
        step = (gene - high) if variant == MutationVariant.LITERAL else (high - gene)
    else:
        step = low - gene
    return float(min(max(gene + step * f, low), high))


def mutate(c: Chromosome, generation: int, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    if not 0 <= generation <= cfg.generations:
        raise InputError(f"generation {generation} outside [0, {cfg.generations}]", module="evolve")
    position = int(rng.integers(len(c)))
    r, r2 = rng.random(2)
    genes = c.genes.copy()
    genes[position] = mutation_step(genes[position], r, r2, generation, cfg.generations,
                                    cfg.gene_min, cfg.gene_max, cfg.mutation_variant)
    return c.with_genes(genes)


def derived_seed(seed: int, generation: int, index: int) -> int:
    """Independent stream seed for one (generation, individual) evaluation"""
    return int(np.random.SeedSequence([seed, generation, index]).generate_state(1)[0])


def evaluate_fitness(individual: Individual, data: Dataset, shape: NetShape, cfg: GaConfig,
                     generation: int = 0, index: int = 0,
                     hidden_activation: Activation = Activation.TANH) -> float:
    """Decode, briefly BP-train, and score the training-set error G.

    A diverging short training run scores +inf so the member is never selected.
    """
    net = decode(individual.chromosome, shape, hidden_activation)
    try:
        if cfg.fitness_bp_epochs > 0:
            net = train_bp(net, data.train_X, data.train_y, cfg.fitness_bp_lr,
                           cfg.fitness_bp_epochs,
                           seed=derived_seed(cfg.seed, generation, index)).network
        fitness = fitness_error(net, data.train_X, data.train_y, cfg.fitness_k)
    except NonFiniteLoss as e:
        logger.debug("Individual %d of generation %d diverged: %s", index, generation, e)
        return float("inf")
    return fitness if np.isfinite(fitness) else float("inf")


def _evaluate_generation(population: List[Individual], generation: int,
                         score: Callable[[Individual, int], float], workers: int) -> int:
    pending = [i for i, ind in enumerate(population) if not ind.evaluated]
    if workers > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(lambda i: score(population[i], i), pending))
    else:
        scores = [score(population[i], i) for i in pending]

    for i, fitness in zip(pending, scores):
        population[i].fitness = float(fitness)
    return len(pending)


def _ranked(population: List[Individual]) -> List[int]:
    """Indices best first; ties keep population order"""
    return sorted(range(len(population)), key=lambda i: (population[i].fitness, i))


def _breed(population: List[Individual], generation: int, cfg: GaConfig,
           rng: np.random.Generator) -> List[Individual]:
    ranked = _ranked(population)
    elites = [Individual(population[i].chromosome, population[i].fitness)
              for i in ranked[:cfg.elite_count]]

    n_children = cfg.pop_size - len(elites)
    probs = selection_probs([ind.fitness for ind in population], cfg.fitness_k)
    n_parents = n_children + (n_children % 2)
    parents = [ind.chromosome for ind in roulette_select(population, probs, n_parents, rng)]

    children: List[Chromosome] = []
    for a, b in zip(parents[0::2], parents[1::2]):
        if rng.random() < cfg.crossover_prob:
            a, b = crossover(a, b, rng, cfg.crossover_mode)
        children.extend([a, b])
    children = children[:n_children]

    for i, child in enumerate(children):
        if rng.random() < cfg.mutation_prob:
            children[i] = mutate(child, generation, cfg, rng)

    return elites + [Individual(child) for child in children]


def evolve_population(shape: NetShape, cfg: GaConfig, score: Callable[[Individual, int, int], float],
                      workers: int = 1) -> GaRun:
    """The generational loop with any scoring function (generation, index aware)"""
    _check_config(cfg)
    rng = np.random.default_rng(cfg.seed)
    population = [Individual(c) for c in init_population(cfg, shape, rng)]

    trace: List[Tuple[int, float]] = []
    evaluations = 0
    for generation in range(cfg.generations):
        evaluations += _evaluate_generation(
            population, generation, lambda ind, i: score(ind, generation, i), workers)

        best = population[_ranked(population)[0]]
        trace.append((generation, float(best.fitness)))
        logger.info("Generation %d/%d best fitness %.6g", generation + 1, cfg.generations, best.fitness)

        if generation + 1 < cfg.generations:
            population = _breed(population, generation + 1, cfg, rng)

    final_best = population[_ranked(population)[0]]
    return GaRun(best_per_generation=trace, final_best=final_best, config=cfg, evaluations=evaluations)


def run_ga(data: Optional[Dataset], shape: NetShape, cfg: GaConfig, bp: Optional[BpConfig] = None,
           workers: int = 1, fitness_fn: Optional[FitnessFn] = None,
           hidden_activation: Activation = Activation.TANH) -> GaResult:
    """Evolve initial weights, then train the winner with the full BP budget.

    ``fitness_fn`` replaces BP-based fitness (a surrogate objective on the
    chromosome). Without ``bp`` the winner is returned untrained.
    """
    if fitness_fn is not None:
        def score(ind: Individual, generation: int, index: int) -> float:
            return fitness_fn(ind.chromosome)
    else:
        if data is None:
            raise InputError("GA fitness needs a dataset", module="evolve")

        def score(ind: Individual, generation: int, index: int) -> float:
            return evaluate_fitness(ind, data, shape, cfg, generation, index, hidden_activation)

    run = evolve_population(shape, cfg, score, workers)
    winner = run.final_best.chromosome
    network = decode(winner, shape, hidden_activation)
    logger.info("GA finished: best fitness %.6g after %d evaluations",
                run.final_best.fitness, run.evaluations)

    if bp is None or data is None:
        return GaResult(network=network, run=run, initial=winner)

    training = train_bp(network, data.train_X, data.train_y, bp.lr, bp.epochs, seed=cfg.seed)
    return GaResult(network=training.network, training=training, run=run, initial=winner)


def run_baseline(data: Dataset, shape: NetShape, cfg: GaConfig, bp: BpConfig,
                 hidden_activation: Activation = Activation.TANH) -> GaResult:
    """Plain BP from one random chromosome drawn from the GA's gene bounds"""
    _check_config(cfg)
    rng = np.random.default_rng(cfg.seed)
    initial = Chromosome(genes=rng.uniform(cfg.gene_min, cfg.gene_max, size=shape.gene_length),
                         bounds=cfg.bounds)
    network = decode(initial, shape, hidden_activation)
    logger.info("Skipping GA; training a random initialization for %d epochs", bp.epochs)
    training = train_bp(network, data.train_X, data.train_y, bp.lr, bp.epochs, seed=cfg.seed)
    return GaResult(network=training.network, training=training, initial=initial)
