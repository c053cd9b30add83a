// SPDX-License-Identifier: Apache-2.0

#include "mmo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mmo {

void GaConfig::validate() const
{
    if (population_np < 4 || population_np % 2 != 0)
        throw std::invalid_argument("ga.population_np must be even and at least 4");
    if (generations_q < 1)
        throw std::invalid_argument("ga.generations_q must be at least 1");
    if (init_kappa <= 0.0 || init_kappa > 1.0)
        throw std::invalid_argument("ga.init_kappa must be in (0, 1]");
    if (mating_fraction <= 0.0 || mating_fraction > 1.0)
        throw std::invalid_argument("ga.mating_fraction must be in (0, 1]");
    if (tournament_fraction <= 0.0 || tournament_fraction > 1.0)
        throw std::invalid_argument("ga.tournament_fraction must be in (0, 1]");
    if (elite_fraction <= 0.0 || elite_fraction > 1.0)
        throw std::invalid_argument("ga.elite_fraction must be in (0, 1]");
    if (mutation_rate <= 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("ga.mutation_rate must be in (0, 1]");
    if (mutation_variance < 0.0)
        throw std::invalid_argument("ga.mutation_variance must be non-negative");
}

void PsoConfig::validate() const
{
    if (swarm_size < 1)
        throw std::invalid_argument("pso.swarm_size must be at least 1");
    if (iterations < 0)
        throw std::invalid_argument("pso.iterations must be non-negative");
    if (inertia < 0.0)
        throw std::invalid_argument("pso.inertia must be non-negative");
    if (cognitive_c1 < 0.0 || social_c2 < 0.0)
        throw std::invalid_argument("pso acceleration coefficients must be non-negative");
    if (velocity_clamp <= 0.0)
        throw std::invalid_argument("pso.velocity_clamp must be positive");
}

int ScenarioConfig::total_users() const
{
    int k = 0;
    for (const auto& g : groups)
        k += g.users;
    return k;
}

double ScenarioConfig::total_power_watts() const
{
    return std::pow(10.0, (total_power_dbm - 30.0) / 10.0);
}

double ScenarioConfig::noise_variance_watts() const
{
    return noise_variance(noise_psd_dbm_hz, bandwidth_hz);
}

void ScenarioConfig::validate() const
{
    if (geometry.m_x < 1 || geometry.m_y < 1)
        throw std::invalid_argument("geometry: m_x and m_y must be at least 1");
    if (geometry.spacing_d <= 0.0)
        throw std::invalid_argument("geometry: spacing_d must be positive");
    if (groups.empty())
        throw std::invalid_argument("at least one user group is required");
    for (const auto& g : groups) {
        if (g.users < 1)
            throw std::invalid_argument("every group needs at least one user");
        if (g.eaod_spread_deg < 0.0 || g.aaod_spread_deg < 0.0)
            throw std::invalid_argument("angle spreads must be non-negative");
        if (g.mean_eaod_deg <= 0.0 || g.mean_eaod_deg >= 180.0)
            throw std::invalid_argument("mean_eaod_deg must lie in (0, 180)");
    }
    if (subcarriers < 1)
        throw std::invalid_argument("subcarriers must be at least 1");
    if (paths < 1)
        throw std::invalid_argument("paths must be at least 1");
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth_hz must be positive");
    if (rf_chains_per_group < 1)
        throw std::invalid_argument("rf_chains_per_group must be at least 1");
    if (n_rf_total() > geometry.antennas())
        throw std::invalid_argument("total RF chains cannot exceed the antenna count");
    if (user_height_range_m.lo > user_height_range_m.hi)
        throw std::invalid_argument("user_height_range_m must satisfy lo <= hi");
    if (horizontal_distance_range_m.lo > horizontal_distance_range_m.hi)
        throw std::invalid_argument("horizontal_distance_range_m must satisfy lo <= hi");
    if (horizontal_distance_range_m.lo <= 0.0)
        throw std::invalid_argument("horizontal distances must be positive");
    ga.validate();
    pso.validate();
}

double noise_variance(double noise_psd_dbm_hz, double bandwidth_hz)
{
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth_hz must be positive");
    return std::pow(10.0, (noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
}

std::vector<UserPathSet> draw_realization(const ScenarioConfig& config, std::mt19937_64& rng)
{
    config.validate();

    const int n_paths = config.paths;
    const double gain_sd = std::sqrt(1.0 / (2.0 * n_paths)); // per-component, so var(z) = 1/L

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    auto uniform_in = [&](const Range& r) { return r.lo + (r.hi - r.lo) * u01(rng); };

    std::vector<UserPathSet> users;
    users.reserve(static_cast<std::size_t>(config.total_users()));

    for (std::size_t g = 0; g < config.groups.size(); ++g) {
        const GroupSpec& group = config.groups[g];
        const Range eaod{group.mean_eaod_deg - group.eaod_spread_deg,
                         group.mean_eaod_deg + group.eaod_spread_deg};
        const Range aaod{group.mean_aaod_deg - group.aaod_spread_deg,
                         group.mean_aaod_deg + group.aaod_spread_deg};

        for (int k = 0; k < group.users; ++k) {
            UserPathSet u;
            u.group_index = static_cast<int>(g);

            const double horiz = uniform_in(config.horizontal_distance_range_m);
            const double height = uniform_in(config.user_height_range_m);
            const double dz = config.bs_height_m - height;
            const double dist = std::sqrt(horiz * horiz + dz * dz);

            u.eaod_deg.resize(n_paths);
            u.aaod_deg.resize(n_paths);
            for (int l = 0; l < n_paths; ++l) {
                u.eaod_deg[l] = uniform_in(eaod);
                u.aaod_deg[l] = uniform_in(aaod);
            }
            u.gains.resize(n_paths);
            for (int l = 0; l < n_paths; ++l) {
                const double re = gain_sd * stdnorm(rng);
                const double im = gain_sd * stdnorm(rng);
                u.gains[l] = {re, im};
            }
            u.distances_m.assign(n_paths, dist);
            users.push_back(std::move(u));
        }
    }
    return users;
}

namespace {

using nlohmann::json;

// Reads cfg[key] into out if present; leaves the default otherwise.
template <typename T>
void maybe_get(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end())
        out = it->get<T>();
}

void maybe_get(const json& j, const char* key, Range& out)
{
    if (auto it = j.find(key); it != j.end()) {
        if (!it->is_array() || it->size() != 2)
            throw std::invalid_argument(std::string(key) + " must be a [lo, hi] pair");
        out.lo = (*it)[0].get<double>();
        out.hi = (*it)[1].get<double>();
    }
}

GroupSpec parse_group(const json& j)
{
    GroupSpec g;
    maybe_get(j, "mean_eaod_deg", g.mean_eaod_deg);
    maybe_get(j, "mean_aaod_deg", g.mean_aaod_deg);
    maybe_get(j, "eaod_spread_deg", g.eaod_spread_deg);
    maybe_get(j, "aaod_spread_deg", g.aaod_spread_deg);
    maybe_get(j, "users", g.users);
    return g;
}

json group_json(const GroupSpec& g)
{
    return json{{"mean_eaod_deg", g.mean_eaod_deg},
                {"mean_aaod_deg", g.mean_aaod_deg},
                {"eaod_spread_deg", g.eaod_spread_deg},
                {"aaod_spread_deg", g.aaod_spread_deg},
                {"users", g.users}};
}

} // namespace

ScenarioConfig parse_scenario_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config root must be a JSON object");

    ScenarioConfig cfg;
    if (auto it = j.find("geometry"); it != j.end()) {
        maybe_get(*it, "m_x", cfg.geometry.m_x);
        maybe_get(*it, "m_y", cfg.geometry.m_y);
        maybe_get(*it, "spacing_d", cfg.geometry.spacing_d);
    }
    if (auto it = j.find("groups"); it != j.end()) {
        if (!it->is_array())
            throw std::invalid_argument("groups must be an array");
        cfg.groups.clear();
        for (const auto& gj : *it)
            cfg.groups.push_back(parse_group(gj));
    }
    maybe_get(j, "subcarriers", cfg.subcarriers);
    maybe_get(j, "paths", cfg.paths);
    maybe_get(j, "path_loss_exponent", cfg.path_loss_exponent);
    maybe_get(j, "noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    maybe_get(j, "bandwidth_hz", cfg.bandwidth_hz);
    maybe_get(j, "total_power_dbm", cfg.total_power_dbm);
    maybe_get(j, "bs_height_m", cfg.bs_height_m);
    maybe_get(j, "user_height_range_m", cfg.user_height_range_m);
    maybe_get(j, "horizontal_distance_range_m", cfg.horizontal_distance_range_m);
    maybe_get(j, "rf_chains_per_group", cfg.rf_chains_per_group);

    if (auto it = j.find("ga"); it != j.end()) {
        maybe_get(*it, "population_np", cfg.ga.population_np);
        maybe_get(*it, "generations_q", cfg.ga.generations_q);
        maybe_get(*it, "init_kappa", cfg.ga.init_kappa);
        maybe_get(*it, "mating_fraction", cfg.ga.mating_fraction);
        maybe_get(*it, "tournament_fraction", cfg.ga.tournament_fraction);
        maybe_get(*it, "elite_fraction", cfg.ga.elite_fraction);
        maybe_get(*it, "mutation_rate", cfg.ga.mutation_rate);
        maybe_get(*it, "mutation_variance", cfg.ga.mutation_variance);
        maybe_get(*it, "seed_equal_chromosome", cfg.ga.seed_equal_chromosome);
    }
    if (auto it = j.find("pso"); it != j.end()) {
        maybe_get(*it, "swarm_size", cfg.pso.swarm_size);
        maybe_get(*it, "iterations", cfg.pso.iterations);
        maybe_get(*it, "inertia", cfg.pso.inertia);
        maybe_get(*it, "cognitive_c1", cfg.pso.cognitive_c1);
        maybe_get(*it, "social_c2", cfg.pso.social_c2);
        maybe_get(*it, "velocity_clamp", cfg.pso.velocity_clamp);
    }

    cfg.validate();
    return cfg;
}

std::string scenario_json(const ScenarioConfig& cfg)
{
    json j;
    j["geometry"] = {{"m_x", cfg.geometry.m_x},
                     {"m_y", cfg.geometry.m_y},
                     {"spacing_d", cfg.geometry.spacing_d}};
    j["groups"] = json::array();
    for (const auto& g : cfg.groups)
        j["groups"].push_back(group_json(g));
    j["subcarriers"] = cfg.subcarriers;
    j["paths"] = cfg.paths;
    j["path_loss_exponent"] = cfg.path_loss_exponent;
    j["noise_psd_dbm_hz"] = cfg.noise_psd_dbm_hz;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["total_power_dbm"] = cfg.total_power_dbm;
    j["bs_height_m"] = cfg.bs_height_m;
    j["user_height_range_m"] = {cfg.user_height_range_m.lo, cfg.user_height_range_m.hi};
    j["horizontal_distance_range_m"] = {cfg.horizontal_distance_range_m.lo,
                                        cfg.horizontal_distance_range_m.hi};
    j["rf_chains_per_group"] = cfg.rf_chains_per_group;
    j["ga"] = {{"population_np", cfg.ga.population_np},
               {"generations_q", cfg.ga.generations_q},
               {"init_kappa", cfg.ga.init_kappa},
               {"mating_fraction", cfg.ga.mating_fraction},
               {"tournament_fraction", cfg.ga.tournament_fraction},
               {"elite_fraction", cfg.ga.elite_fraction},
               {"mutation_rate", cfg.ga.mutation_rate},
               {"mutation_variance", cfg.ga.mutation_variance},
               {"seed_equal_chromosome", cfg.ga.seed_equal_chromosome}};
    j["pso"] = {{"swarm_size", cfg.pso.swarm_size},
                {"iterations", cfg.pso.iterations},
                {"inertia", cfg.pso.inertia},
                {"cognitive_c1", cfg.pso.cognitive_c1},
                {"social_c2", cfg.pso.social_c2},
                {"velocity_clamp", cfg.pso.velocity_clamp}};
    return j.dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

void save_scenario(const ScenarioConfig& config, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write config file: " + path);
    out << scenario_json(config);
}

} // namespace mmo
