// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <armadillo>

#include "mmo/scenario.hpp"

namespace mmo {

// Real-valued chromosome over the normalized gene space [0, 1]^K. Genes map
// to physical powers through normalize_powers; fitness is the subcarrier
// sum-rate of the normalized allocation.
struct Chromosome {
    std::vector<double> genes;
    std::optional<double> cached_fitness;
};

// An all-zero gene vector cannot be normalized onto the power budget.
struct DegenerateChromosome : std::runtime_error {
    DegenerateChromosome() : std::runtime_error("all-zero chromosome cannot be normalized") {}
};

struct NormalizedPowers {
    std::vector<double> powers_watts;
    double epsilon = 0.0; // scale factor: powers = genes / epsilon^2
};

struct GaResult {
    std::vector<double> powers_watts;
    std::vector<double> best_fitness_trace; // one entry per generation, non-decreasing
};

struct PsoResult {
    std::vector<double> powers_watts;
    double best_fitness = 0.0;
};

// Scales genes onto the per-subcarrier budget: p_k = genes_k / eps^2 with
// eps^2 = sum_k genes_k ||b_k||^2 / (P_T / C), so the transmit-power
// constraint holds with equality. Throws DegenerateChromosome when the
// weighted gene sum is zero.
NormalizedPowers normalize_powers(const std::vector<double>& genes, const arma::cx_mat& b,
                                  double p_t, int c);

// Sum-rate of the normalized allocation on one subcarrier.
double fitness(const std::vector<double>& genes, const arma::cx_mat& eff,
               const arma::cx_mat& b, double sigma2, double p_t, int c);

// Tournament selection: draws ceil(rho_sub * pool size) distinct members
// uniformly and returns the index of the fittest (ties: lower index). All
// pool members must carry cached fitness.
int tournament_select(const std::vector<Chromosome>& pool, double rho_sub,
                      std::mt19937_64& rng);

// Linear crossover: offspring genes (3a - b)/2 and (3b - a)/2 per position;
// a candidate outside [0, 1] is replaced by the corresponding parent's gene.
std::pair<Chromosome, Chromosome> linear_crossover(const Chromosome& p1, const Chromosome& p2);

// Uniform crossover: swaps each gene position between the two offspring with
// probability 1/2.
void uniform_crossover(Chromosome& o1, Chromosome& o2, std::mt19937_64& rng);

// Gaussian mutation: each gene independently perturbed with probability
// rho_mut by N(0, variance) noise, then clamped to [0, 1].
void mutate(Chromosome& chromosome, double rho_mut, double variance, std::mt19937_64& rng);

// Genetic power allocation for one subcarrier (Algorithm: random init,
// mating-pool truncation, tournament parents, linear + uniform crossover,
// merged-population elitism, Gaussian mutation of non-elites).
GaResult ga_allocate(const arma::cx_mat& eff, const arma::cx_mat& b, double sigma2, double p_t,
                     int c, const GaConfig& ga, std::mt19937_64& rng);

// Equal power allocation: identical p_k scaled onto the budget.
std::vector<double> eq_allocate(const arma::cx_mat& b, double p_t, int c, int k_users);

// Global-best PSO baseline over the same gene space, normalization, and
// fitness as the GA.
PsoResult pso_allocate(const arma::cx_mat& eff, const arma::cx_mat& b, double sigma2,
                       double p_t, int c, const PsoConfig& pso, std::mt19937_64& rng);

} // namespace mmo
