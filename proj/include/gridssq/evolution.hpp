#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "gridssq/errors.hpp"
#include "gridssq/neural.hpp"
#include "gridssq/rng.hpp"

namespace gridssq {

// Flat encoding of a full parameter set, ordered [w_ih, w_ho, a, b] with the
// matrices row-major. The layout is part of the model-file and history
// reproducibility contract; do not reorder.
struct Chromosome {
    std::vector<double> genes;

    bool operator==(const Chromosome&) const = default;
};

struct GaConfig {
    std::size_t population = 40;
    std::size_t generations = 50;
    double crossover_prob = 0.8;
    double mutation_prob = 0.05;  // per gene
    double mutation_sigma = 0.1;
    std::size_t elitism = 1;
    double gene_min = -5.0;
    double gene_max = 5.0;
    double init_min = -1.0;
    double init_max = 1.0;
    std::optional<double> fitness_target;
    std::uint64_t seed = 0;
    int threads = 1;  // fitness evaluation only; results identical at any value
};

inline void validate_config(const GaConfig& cfg) {
    if (cfg.population < 2)
        throw Error(ErrorKind::ConfigInvalid, "population must be at least 2");
    if (cfg.generations < 1)
        throw Error(ErrorKind::ConfigInvalid, "generations must be at least 1");
    if (!(cfg.crossover_prob >= 0.0) || !(cfg.crossover_prob <= 1.0))
        throw Error(ErrorKind::ConfigInvalid, "crossover probability must lie in [0, 1]");
    if (!(cfg.mutation_prob >= 0.0) || !(cfg.mutation_prob <= 1.0))
        throw Error(ErrorKind::ConfigInvalid, "mutation probability must lie in [0, 1]");
    if (!(cfg.mutation_sigma > 0.0))
        throw Error(ErrorKind::ConfigInvalid, "mutation sigma must be positive");
    if (cfg.elitism < 1 || cfg.elitism >= cfg.population)
        throw Error(ErrorKind::ConfigInvalid, "elitism count must satisfy 1 <= elitism < population");
    if (!(cfg.gene_min <= cfg.gene_max) || !(cfg.init_min <= cfg.init_max))
        throw Error(ErrorKind::ConfigInvalid, "gene and init bounds must be ordered");
    if (cfg.threads < 1)
        throw Error(ErrorKind::ConfigInvalid, "thread count must be at least 1");
}

inline Chromosome encode(const MlpParams& p) {
    validate_params(p);
    Chromosome c;
    c.genes.reserve(p.shape().gene_count());
    c.genes.insert(c.genes.end(), p.w_ih.begin(), p.w_ih.end());
    c.genes.insert(c.genes.end(), p.w_ho.begin(), p.w_ho.end());
    c.genes.insert(c.genes.end(), p.a.begin(), p.a.end());
    c.genes.insert(c.genes.end(), p.b.begin(), p.b.end());
    return c;
}

inline MlpParams decode(const std::vector<double>& genes, NetShape shape) {
    if (genes.size() != shape.gene_count())
        throw Error(ErrorKind::LengthMismatch,
                    "chromosome length " + std::to_string(genes.size()) +
                        " does not decode to the requested shape (expected " +
                        std::to_string(shape.gene_count()) + ")");
    MlpParams p = MlpParams::zeros(shape);
    auto it = genes.begin();
    std::copy(it, it + static_cast<std::ptrdiff_t>(p.w_ih.size()), p.w_ih.begin());
    it += static_cast<std::ptrdiff_t>(p.w_ih.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(p.w_ho.size()), p.w_ho.begin());
    it += static_cast<std::ptrdiff_t>(p.w_ho.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(p.a.size()), p.a.begin());
    it += static_cast<std::ptrdiff_t>(p.a.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(p.b.size()), p.b.begin());
    return p;
}

inline double fitness(const Chromosome& chrom, const std::vector<Sample>& samples,
                      NetShape shape) {
    return loss_abs(decode(chrom.genes, shape), samples);
}

// Inverse-fitness roulette weights. The epsilon floor keeps a perfect
// individual (fitness 0) finite; above the floor the weights are exactly
// 1/F, so hand-computed probabilities hold to rounding error.
inline std::vector<double> selection_probabilities(const std::vector<double>& fitness_values) {
    if (fitness_values.empty())
        throw Error(ErrorKind::EmptyPopulation, "no fitness values to select from");
    constexpr double eps = 1e-9;
    std::vector<double> probs(fitness_values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < fitness_values.size(); ++i) {
        probs[i] = 1.0 / std::max(fitness_values[i], eps);
        sum += probs[i];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

namespace detail {

inline std::size_t roulette_spin(const std::vector<double>& probs, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.size() - 1;
}

}  // namespace detail

inline std::pair<std::size_t, std::size_t> select_parents(const std::vector<Chromosome>& population,
                                                          const std::vector<double>& probabilities,
                                                          Rng& rng) {
    if (population.size() != probabilities.size())
        throw Error(ErrorKind::LengthMismatch, "population and probability sizes differ");
    if (population.empty())
        throw Error(ErrorKind::EmptyPopulation, "cannot select from an empty population");
    const std::size_t first = detail::roulette_spin(probabilities, rng.uniform01());
    const std::size_t second = detail::roulette_spin(probabilities, rng.uniform01());
    return {first, second};
}

// Arithmetic crossover: child = alpha * p1 + (1 - alpha) * p2 per gene.
inline Chromosome crossover(const Chromosome& p1, const Chromosome& p2, double alpha) {
    if (p1.genes.size() != p2.genes.size())
        throw Error(ErrorKind::LengthMismatch, "crossover parents have different lengths");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw Error(ErrorKind::ConfigInvalid, "crossover alpha must lie in [0, 1]");
    Chromosome child;
    child.genes.resize(p1.genes.size());
    for (std::size_t i = 0; i < child.genes.size(); ++i)
        child.genes[i] = alpha * p1.genes[i] + (1.0 - alpha) * p2.genes[i];
    return child;
}

// Per-gene Gaussian perturbation with probability mutation_prob, clamped to
// the gene bounds. Consumes one uniform per gene plus two per perturbation.
inline Chromosome mutate(Chromosome chrom, const GaConfig& cfg, Rng& rng) {
    for (double& g : chrom.genes) {
        if (rng.uniform01() < cfg.mutation_prob) {
            g += rng.normal(0.0, cfg.mutation_sigma);
            g = std::clamp(g, cfg.gene_min, cfg.gene_max);
        }
    }
    return chrom;
}

inline Chromosome random_chromosome(NetShape shape, double lo, double hi, Rng& rng) {
    Chromosome c;
    c.genes.resize(shape.gene_count());
    for (double& g : c.genes) g = rng.uniform(lo, hi);
    return c;
}

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
};

struct EvolveResult {
    Chromosome best;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;
};

namespace detail {

// Fitness evaluation is pure and consumes no randomness, so splitting the
// population across threads cannot change any result, only the wall time.
inline void evaluate_population(const std::vector<Chromosome>& population,
                                const std::vector<Sample>& samples, NetShape shape, int threads,
                                std::vector<double>& out) {
    out.resize(population.size());
    const std::size_t n = population.size();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads > 0 ? threads : 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fitness(population[i], samples, shape);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = fitness(population[i], samples, shape);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Genetic search over the flat parameter encoding. Per generation: evaluate,
// carry the elite unchanged, refill via roulette selection, arithmetic
// crossover and Gaussian mutation. All randomness comes from substreams
// derived from the config seed: one for initialization and one per breeding
// round, so results do not depend on the evaluation thread count.
inline EvolveResult evolve(const std::vector<Sample>& samples, NetShape shape,
                           const GaConfig& cfg) {
    validate_config(cfg);
    if (samples.empty()) throw Error(ErrorKind::EmptyDataset, "evolve needs a nonempty dataset");

    std::vector<Chromosome> population;
    population.reserve(cfg.population);
    {
        Rng init_rng(derive_seed(cfg.seed, stream::ga_init));
        for (std::size_t i = 0; i < cfg.population; ++i)
            population.push_back(random_chromosome(shape, cfg.init_min, cfg.init_max, init_rng));
    }

    EvolveResult result;
    result.best_fitness = std::numeric_limits<double>::infinity();
    std::vector<double> fit;
    std::vector<std::size_t> order(cfg.population);

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        detail::evaluate_population(population, samples, shape, cfg.threads, fit);

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

        const double gen_best = fit[order[0]];
        const double gen_mean =
            std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(fit.size());
        result.history.push_back({gen, gen_best, gen_mean});
        if (gen_best < result.best_fitness) {
            result.best_fitness = gen_best;
            result.best = population[order[0]];
        }

        if (cfg.fitness_target && result.best_fitness < *cfg.fitness_target) break;
        if (gen + 1 == cfg.generations) break;

        std::vector<Chromosome> next;
        next.reserve(cfg.population);
        for (std::size_t e = 0; e < cfg.elitism; ++e) next.push_back(population[order[e]]);

        Rng breed(derive_seed(cfg.seed, stream::ga_breed, gen));
        const std::vector<double> probs = selection_probabilities(fit);
        while (next.size() < cfg.population) {
            const auto [i, j] = select_parents(population, probs, breed);
            Chromosome child = breed.uniform01() < cfg.crossover_prob
                                   ? crossover(population[i], population[j], breed.uniform01())
                                   : population[i];
            next.push_back(mutate(std::move(child), cfg, breed));
        }
        population = std::move(next);
    }
    return result;
}

struct HybridResult {
    MlpParams model;
    EvolveResult evolution;
    bool bp_kept = false;       // true when the fine-tuned network was retained
    double ga_loss = 0.0;       // training loss of the decoded GA best
    double final_loss = 0.0;    // training loss of the returned model
};

// GA-then-BP orchestration: the genetic search provides the starting weights,
// backpropagation fine-tunes them, and the better of the two (by training
// absolute error) is returned. The fine-tune step can therefore never make
// the delivered model worse than the GA best.
inline HybridResult hybrid_train(const std::vector<Sample>& samples, NetShape shape,
                                 const GaConfig& ga_cfg, const BpConfig& bp_cfg,
                                 const NormalizationMeta& meta) {
    HybridResult out;
    out.evolution = evolve(samples, shape, ga_cfg);
    MlpParams ga_params = decode(out.evolution.best.genes, shape);
    ga_params.norm = meta;
    out.ga_loss = loss_abs(ga_params, samples);
    if (bp_cfg.epochs == 0) {
        out.model = std::move(ga_params);
        out.final_loss = out.ga_loss;
        return out;
    }
    MlpParams tuned = train_bp(ga_params, samples, bp_cfg);
    const double tuned_loss = loss_abs(tuned, samples);
    if (tuned_loss <= out.ga_loss) {
        out.model = std::move(tuned);
        out.final_loss = tuned_loss;
        out.bp_kept = true;
    } else {
        out.model = std::move(ga_params);
        out.final_loss = out.ga_loss;
    }
    return out;
}

}  // namespace gridssq
