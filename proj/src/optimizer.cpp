// SPDX-License-Identifier: Apache-2.0

#include "mmo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmo/metrics.hpp"

namespace mmo {

namespace {

// Quantities reused across all fitness evaluations of one (eff, b) instance:
// the K x K beamforming gain matrix and the precoder column powers.
struct FitnessContext {
    arma::mat gains;
    std::vector<double> col_power;
    double sigma2 = 0.0;
    double budget = 0.0; // P_T / C

    FitnessContext(const arma::cx_mat& eff, const arma::cx_mat& b, double sigma2_in,
                   double p_t, int c)
        : gains(channel_gain_matrix(eff, b)), sigma2(sigma2_in)
    {
        if (c < 1)
            throw std::invalid_argument("subcarrier count must be at least 1");
        if (p_t <= 0.0)
            throw std::invalid_argument("transmit power must be positive");
        budget = p_t / static_cast<double>(c);
        col_power.resize(b.n_cols);
        for (arma::uword k = 0; k < b.n_cols; ++k)
            col_power[k] = arma::accu(arma::square(arma::abs(b.col(k))));
    }

    NormalizedPowers normalize(const std::vector<double>& genes) const
    {
        if (genes.size() != col_power.size())
            throw std::invalid_argument("gene count must match user count");
        double weighted = 0.0;
        for (std::size_t k = 0; k < genes.size(); ++k)
            weighted += genes[k] * col_power[k];
        if (weighted <= 0.0)
            throw DegenerateChromosome();
        const double eps2 = weighted / budget;
        NormalizedPowers out;
        out.epsilon = std::sqrt(eps2);
        out.powers_watts.resize(genes.size());
        for (std::size_t k = 0; k < genes.size(); ++k)
            out.powers_watts[k] = genes[k] / eps2;
        return out;
    }

    double evaluate(const std::vector<double>& genes) const
    {
        return sum_rate_from_gains(gains, normalize(genes).powers_watts, sigma2);
    }
};

bool all_zero(const std::vector<double>& genes)
{
    return std::all_of(genes.begin(), genes.end(), [](double g) { return g == 0.0; });
}

// Draws `count` distinct indices from [0, n) by a partial Fisher-Yates
// shuffle of the scratch index array.
std::vector<int> distinct_indices(std::vector<int>& scratch, int count, std::mt19937_64& rng)
{
    const int n = static_cast<int>(scratch.size());
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(scratch[i], scratch[pick(rng)]);
    }
    return {scratch.begin(), scratch.begin() + count};
}

// Indices of the population sorted by fitness descending, ties by lower
// chromosome index. All fitness values must be cached.
std::vector<int> fitness_order(const std::vector<Chromosome>& pop)
{
    std::vector<int> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&pop](int a, int b) {
        return *pop[static_cast<std::size_t>(a)].cached_fitness >
               *pop[static_cast<std::size_t>(b)].cached_fitness;
    });
    return order;
}

} // namespace

NormalizedPowers normalize_powers(const std::vector<double>& genes, const arma::cx_mat& b,
                                  double p_t, int c)
{
    if (genes.size() != b.n_cols)
        throw std::invalid_argument("gene count must match precoder columns");
    if (c < 1)
        throw std::invalid_argument("subcarrier count must be at least 1");
    if (p_t <= 0.0)
        throw std::invalid_argument("transmit power must be positive");

    const double budget = p_t / static_cast<double>(c);
    double weighted = 0.0;
    for (arma::uword k = 0; k < b.n_cols; ++k)
        weighted += genes[k] * arma::accu(arma::square(arma::abs(b.col(k))));
    if (weighted <= 0.0)
        throw DegenerateChromosome();

    const double eps2 = weighted / budget;
    NormalizedPowers out;
    out.epsilon = std::sqrt(eps2);
    out.powers_watts.resize(genes.size());
    for (std::size_t k = 0; k < genes.size(); ++k)
        out.powers_watts[k] = genes[k] / eps2;
    return out;
}

double fitness(const std::vector<double>& genes, const arma::cx_mat& eff,
               const arma::cx_mat& b, double sigma2, double p_t, int c)
{
    return FitnessContext(eff, b, sigma2, p_t, c).evaluate(genes);
}

int tournament_select(const std::vector<Chromosome>& pool, double rho_sub,
                      std::mt19937_64& rng)
{
    if (pool.empty())
        throw std::invalid_argument("tournament pool must not be empty");
    if (rho_sub <= 0.0 || rho_sub > 1.0)
        throw std::invalid_argument("rho_sub must be in (0, 1]");

    const int n = static_cast<int>(pool.size());
    // Epsilon guard so that e.g. 0.1 * 40 rounds to the intended ceil(4) = 4
    // rather than ceil(4.0000000000000002) = 5.
    const int subset =
        std::clamp(static_cast<int>(std::ceil(rho_sub * n - 1e-9)), 1, n);

    std::vector<int> scratch(pool.size());
    std::iota(scratch.begin(), scratch.end(), 0);
    const std::vector<int> entrants = distinct_indices(scratch, subset, rng);

    int best = entrants.front();
    for (int idx : entrants) {
        const double f = *pool[static_cast<std::size_t>(idx)].cached_fitness;
        const double fb = *pool[static_cast<std::size_t>(best)].cached_fitness;
        if (f > fb || (f == fb && idx < best))
            best = idx;
    }
    return best;
}

std::pair<Chromosome, Chromosome> linear_crossover(const Chromosome& p1, const Chromosome& p2)
{
    if (p1.genes.size() != p2.genes.size())
        throw std::invalid_argument("parents must have equal gene counts");

    const std::size_t n = p1.genes.size();
    Chromosome o1, o2;
    o1.genes.resize(n);
    o2.genes.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = p1.genes[k];
        const double b = p2.genes[k];
        const double c1 = (3.0 * a - b) / 2.0;
        const double c2 = (3.0 * b - a) / 2.0;
        o1.genes[k] = (c1 >= 0.0 && c1 <= 1.0) ? c1 : a;
        o2.genes[k] = (c2 >= 0.0 && c2 <= 1.0) ? c2 : b;
    }
    return {std::move(o1), std::move(o2)};
}

void uniform_crossover(Chromosome& o1, Chromosome& o2, std::mt19937_64& rng)
{
    if (o1.genes.size() != o2.genes.size())
        throw std::invalid_argument("offspring must have equal gene counts");

    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < o1.genes.size(); ++k) {
        if (coin(rng))
            std::swap(o1.genes[k], o2.genes[k]);
    }
    o1.cached_fitness.reset();
    o2.cached_fitness.reset();
}

void mutate(Chromosome& chromosome, double rho_mut, double variance, std::mt19937_64& rng)
{
    if (rho_mut < 0.0 || rho_mut > 1.0)
        throw std::invalid_argument("rho_mut must be in [0, 1]");
    if (variance < 0.0)
        throw std::invalid_argument("variance must be non-negative");

    const double sd = std::sqrt(variance);
    std::bernoulli_distribution hit(rho_mut);
    std::normal_distribution<double> noise(0.0, 1.0);
    bool changed = false;
    for (double& gene : chromosome.genes) {
        if (!hit(rng))
            continue;
        if (sd == 0.0)
            continue; // zero-variance noise is the identity
        gene = std::clamp(gene + sd * noise(rng), 0.0, 1.0);
        changed = true;
    }
    if (changed)
        chromosome.cached_fitness.reset();
}

GaResult ga_allocate(const arma::cx_mat& eff, const arma::cx_mat& b, double sigma2, double p_t,
                     int c, const GaConfig& ga, std::mt19937_64& rng)
{
    ga.validate();
    const FitnessContext ctx(eff, b, sigma2, p_t, c);
    const int k_users = static_cast<int>(b.n_cols);
    const int np = ga.population_np;

    const int pool_size =
        std::clamp(static_cast<int>(std::llround(ga.mating_fraction * np)), 1, np);
    const int offspring_total = np - pool_size;
    const int pairs = offspring_total / 2;
    const int elite_count =
        std::clamp(static_cast<int>(std::llround(ga.elite_fraction * np)), 1, np);

    std::uniform_real_distribution<double> init(0.0, ga.init_kappa);
    auto reinit = [&](Chromosome& ch) {
        ch.genes.resize(static_cast<std::size_t>(k_users));
        for (double& g : ch.genes)
            g = init(rng);
        ch.cached_fitness.reset();
    };
    auto ensure_usable = [&](Chromosome& ch) {
        while (all_zero(ch.genes))
            reinit(ch);
    };

    std::vector<Chromosome> pop(static_cast<std::size_t>(np));
    for (auto& ch : pop) {
        reinit(ch);
        ensure_usable(ch);
    }
    if (ga.seed_equal_chromosome) {
        // Matches EQ-RA after normalization; placed at a fixed slot so the
        // flag does not shift any other random draw.
        pop[0].genes.assign(static_cast<std::size_t>(k_users), ga.init_kappa / 2.0);
        pop[0].cached_fitness.reset();
    }
    for (auto& ch : pop)
        ch.cached_fitness = ctx.evaluate(ch.genes);

    GaResult result;
    result.best_fitness_trace.reserve(static_cast<std::size_t>(ga.generations_q));

    for (int q = 0; q < ga.generations_q; ++q) {
        // Truncate to the mating pool.
        std::vector<int> order = fitness_order(pop);
        std::vector<Chromosome> mating;
        mating.reserve(static_cast<std::size_t>(pool_size));
        for (int i = 0; i < pool_size; ++i)
            mating.push_back(pop[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);

        // Offspring via tournament parents, linear then uniform crossover.
        std::vector<Chromosome> offspring;
        offspring.reserve(static_cast<std::size_t>(offspring_total));
        for (int p = 0; p < pairs; ++p) {
            const int i1 = tournament_select(mating, ga.tournament_fraction, rng);
            const int i2 = tournament_select(mating, ga.tournament_fraction, rng);
            auto [o1, o2] = linear_crossover(mating[static_cast<std::size_t>(i1)],
                                             mating[static_cast<std::size_t>(i2)]);
            uniform_crossover(o1, o2, rng);
            ensure_usable(o1);
            ensure_usable(o2);
            offspring.push_back(std::move(o1));
            offspring.push_back(std::move(o2));
        }
        if (static_cast<int>(offspring.size()) < offspring_total) {
            // Odd offspring count: clone one to restore the population size.
            Chromosome clone = offspring.empty() ? mating.front() : offspring.back();
            offspring.push_back(std::move(clone));
        }
        for (auto& ch : offspring)
            ch.cached_fitness = ctx.evaluate(ch.genes);

        // Merge, protect the elite share, mutate the rest.
        pop = std::move(mating);
        pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
                   std::make_move_iterator(offspring.end()));
        order = fitness_order(pop);
        std::vector<char> elite(pop.size(), 0);
        for (int i = 0; i < elite_count; ++i)
            elite[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (elite[i])
                continue;
            mutate(pop[i], ga.mutation_rate, ga.mutation_variance, rng);
            ensure_usable(pop[i]);
            if (!pop[i].cached_fitness)
                pop[i].cached_fitness = ctx.evaluate(pop[i].genes);
        }

        double best = -1.0;
        for (const auto& ch : pop)
            best = std::max(best, *ch.cached_fitness);
        result.best_fitness_trace.push_back(best);
    }

    const int best_idx = fitness_order(pop).front();
    result.powers_watts = ctx.normalize(pop[static_cast<std::size_t>(best_idx)].genes).powers_watts;
    return result;
}

std::vector<double> eq_allocate(const arma::cx_mat& b, double p_t, int c, int k_users)
{
    if (static_cast<int>(b.n_cols) != k_users)
        throw std::invalid_argument("precoder columns must match k_users");
    if (c < 1)
        throw std::invalid_argument("subcarrier count must be at least 1");
    if (p_t <= 0.0)
        throw std::invalid_argument("transmit power must be positive");

    double weight = 0.0;
    for (arma::uword k = 0; k < b.n_cols; ++k)
        weight += arma::accu(arma::square(arma::abs(b.col(k))));
    if (weight <= 0.0)
        throw std::runtime_error("precoder has zero total column power");

    const double p = (p_t / static_cast<double>(c)) / weight;
    return std::vector<double>(static_cast<std::size_t>(k_users), p);
}

PsoResult pso_allocate(const arma::cx_mat& eff, const arma::cx_mat& b, double sigma2,
                       double p_t, int c, const PsoConfig& pso, std::mt19937_64& rng)
{
    pso.validate();
    const FitnessContext ctx(eff, b, sigma2, p_t, c);
    const std::size_t k_users = b.n_cols;
    const int n = pso.swarm_size;
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto value_of = [&](const std::vector<double>& x) {
        return all_zero(x) ? neg_inf : ctx.evaluate(x);
    };

    std::vector<std::vector<double>> pos(static_cast<std::size_t>(n),
                                         std::vector<double>(k_users, 0.0));
    std::vector<std::vector<double>> vel(static_cast<std::size_t>(n),
                                         std::vector<double>(k_users, 0.0));
    std::vector<std::vector<double>> pbest = pos;
    std::vector<double> pbest_fit(static_cast<std::size_t>(n), neg_inf);

    for (auto& x : pos)
        for (double& xi : x)
            xi = u01(rng);

    int gbest = 0;
    double gbest_fit = neg_inf;
    for (int i = 0; i < n; ++i) {
        const double f = value_of(pos[static_cast<std::size_t>(i)]);
        pbest[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(i)];
        pbest_fit[static_cast<std::size_t>(i)] = f;
        if (f > gbest_fit) {
            gbest_fit = f;
            gbest = i;
        }
    }
    if (!std::isfinite(gbest_fit))
        throw std::runtime_error("PSO initialization produced no usable particle");

    std::vector<double> gbest_pos = pbest[static_cast<std::size_t>(gbest)];

    for (int it = 0; it < pso.iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            auto& x = pos[static_cast<std::size_t>(i)];
            auto& v = vel[static_cast<std::size_t>(i)];
            const auto& pb = pbest[static_cast<std::size_t>(i)];
            for (std::size_t d = 0; d < k_users; ++d) {
                const double r1 = u01(rng);
                const double r2 = u01(rng);
                v[d] = pso.inertia * v[d] + pso.cognitive_c1 * r1 * (pb[d] - x[d]) +
                       pso.social_c2 * r2 * (gbest_pos[d] - x[d]);
                v[d] = std::clamp(v[d], -pso.velocity_clamp, pso.velocity_clamp);
                x[d] = std::clamp(x[d] + v[d], 0.0, 1.0);
            }
        }
        for (int i = 0; i < n; ++i) {
            const double f = value_of(pos[static_cast<std::size_t>(i)]);
            if (f > pbest_fit[static_cast<std::size_t>(i)]) {
                pbest_fit[static_cast<std::size_t>(i)] = f;
                pbest[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(i)];
            }
            if (f > gbest_fit) {
                gbest_fit = f;
                gbest_pos = pos[static_cast<std::size_t>(i)];
            }
        }
    }

    PsoResult result;
    result.best_fitness = gbest_fit;
    result.powers_watts = ctx.normalize(gbest_pos).powers_watts;
    return result;
}

} // namespace mmo
