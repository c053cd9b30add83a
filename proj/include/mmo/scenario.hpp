// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

namespace mmo {

// Uniform rectangular array at the base station: m_x by m_y elements,
// spaced spacing_d wavelengths apart on both axes.
struct ArrayGeometry {
    int m_x = 16;
    int m_y = 16;
    double spacing_d = 0.5;

    int antennas() const { return m_x * m_y; }
};

// One user group. All members share the angular support
// [mean - spread, mean + spread] in elevation and azimuth.
struct GroupSpec {
    double mean_eaod_deg = 60.0;
    double mean_aaod_deg = 21.0;
    double eaod_spread_deg = 15.0;
    double aaod_spread_deg = 11.0;
    int users = 5;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

// Hyperparameters of the genetic power allocator. Fractions are of the
// population size: mating pool kept per generation, tournament subset,
// mutation-exempt elite share, per-gene mutation probability.
struct GaConfig {
    int population_np = 100;
    int generations_q = 10;
    double init_kappa = 0.05;          // genes start uniform in (0, kappa)
    double mating_fraction = 0.40;
    double tournament_fraction = 0.10;
    double elite_fraction = 0.80;
    double mutation_rate = 0.60;
    double mutation_variance = 1e-4;
    bool seed_equal_chromosome = true; // inject one equal-power chromosome at init

    void validate() const; // throws std::invalid_argument
};

// Global-best particle swarm baseline over the same normalized gene space.
struct PsoConfig {
    int swarm_size = 100;
    int iterations = 10;
    double inertia = 0.7;
    double cognitive_c1 = 1.5;
    double social_c2 = 1.5;
    double velocity_clamp = 0.2;

    void validate() const;
};

// Full experiment description. Defaults reproduce the reference microcell
// scenario: 16x16 URA, three groups of five users 120 degrees apart in
// azimuth, 10 paths per user, 12 RF chains per group.
struct ScenarioConfig {
    ArrayGeometry geometry;
    std::vector<GroupSpec> groups{
        {60.0, 21.0, 15.0, 11.0, 5},
        {60.0, 141.0, 15.0, 11.0, 5},
        {60.0, 261.0, 15.0, 11.0, 5},
    };
    int subcarriers = 16;              // C
    int paths = 10;                    // L, per user
    double path_loss_exponent = 3.76;
    double noise_psd_dbm_hz = -174.0;
    double bandwidth_hz = 10e3;
    double total_power_dbm = 40.0;
    double bs_height_m = 10.0;
    Range user_height_range_m{1.5, 2.5};
    Range horizontal_distance_range_m{10.0, 90.0};
    int rf_chains_per_group = 12;      // N_RF per group
    GaConfig ga;
    PsoConfig pso;

    int total_users() const;
    int n_rf_total() const { return rf_chains_per_group * static_cast<int>(groups.size()); }
    double total_power_watts() const;
    double noise_variance_watts() const;

    void validate() const; // throws std::invalid_argument
};

// Path parameters of one user, drawn once per network realization and
// shared by all subcarriers. Angles stay inside the group support; gains
// are complex Gaussian with variance 1/L; every path carries the user's
// 3D base-station distance.
struct UserPathSet {
    int group_index = 0;
    std::vector<double> eaod_deg;
    std::vector<double> aaod_deg;
    std::vector<std::complex<double>> gains;
    std::vector<double> distances_m;
};

// Thermal noise power in watts over the given bandwidth.
double noise_variance(double noise_psd_dbm_hz, double bandwidth_hz);

// Draws one network realization: per user a uniform horizontal distance and
// height (giving the 3D distance), path angles uniform in the group support,
// and gains ~ CN(0, 1/L). Users are emitted group by group.
std::vector<UserPathSet> draw_realization(const ScenarioConfig& config, std::mt19937_64& rng);

// JSON configuration mirroring the struct fields; missing fields take the
// defaults above.
ScenarioConfig parse_scenario_json(const std::string& text);
std::string scenario_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& config, const std::string& path);

} // namespace mmo
