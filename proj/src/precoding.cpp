// SPDX-License-Identifier: Apache-2.0

#include "mmo/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mmo/channel.hpp"

namespace mmo {

AngleGrid quantized_grid(const ArrayGeometry& geometry)
{
    AngleGrid grid;
    grid.lambda_x.resize(geometry.m_x);
    for (int u = 1; u <= geometry.m_x; ++u)
        grid.lambda_x[u - 1] = -1.0 + (2.0 * u - 1.0) / geometry.m_x;
    grid.lambda_y.resize(geometry.m_y);
    for (int n = 1; n <= geometry.m_y; ++n)
        grid.lambda_y[n - 1] = -1.0 + (2.0 * n - 1.0) / geometry.m_y;
    return grid;
}

namespace {

constexpr int kSupportSamples = 64; // per axis, 64x64 grid over the AoD support

struct SupportSample {
    std::vector<double> gx;
    std::vector<double> gy;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

SupportSample sample_support(const GroupSpec& group)
{
    SupportSample s;
    const int n = kSupportSamples;
    s.gx.reserve(n * n);
    s.gy.reserve(n * n);
    for (int a = 0; a < n; ++a) {
        const double frac_a = (n == 1) ? 0.5 : static_cast<double>(a) / (n - 1);
        const double eaod =
            group.mean_eaod_deg + group.eaod_spread_deg * (2.0 * frac_a - 1.0);
        for (int b = 0; b < n; ++b) {
            const double frac_b = (n == 1) ? 0.5 : static_cast<double>(b) / (n - 1);
            const double aaod =
                group.mean_aaod_deg + group.aaod_spread_deg * (2.0 * frac_b - 1.0);
            double gx = 0.0, gy = 0.0;
            direction_cosines(eaod, aaod, gx, gy);
            s.gx.push_back(gx);
            s.gy.push_back(gy);
            s.centroid_x += gx;
            s.centroid_y += gy;
        }
    }
    s.centroid_x /= static_cast<double>(s.gx.size());
    s.centroid_y /= static_cast<double>(s.gy.size());
    return s;
}

bool beam_order(const ScoredBeam& a, const ScoredBeam& b)
{
    if (a.score != b.score)
        return a.score > b.score;
    if (a.centroid_distance != b.centroid_distance)
        return a.centroid_distance < b.centroid_distance;
    return std::tie(a.beam.u, a.beam.n) < std::tie(b.beam.u, b.beam.n);
}

} // namespace

std::vector<ScoredBeam> rank_group_beams(const GroupSpec& group, const AngleGrid& grid)
{
    const SupportSample s = sample_support(group);
    const int m_x = static_cast<int>(grid.lambda_x.size());
    const int m_y = static_cast<int>(grid.lambda_y.size());
    const double half_x = 1.0 / m_x;
    const double half_y = 1.0 / m_y;
    const double n_samples = static_cast<double>(s.gx.size());

    std::vector<ScoredBeam> ranked;
    ranked.reserve(static_cast<std::size_t>(m_x) * m_y);
    for (int u = 1; u <= m_x; ++u) {
        const double cx = grid.lambda_x[u - 1];
        for (int n = 1; n <= m_y; ++n) {
            const double cy = grid.lambda_y[n - 1];
            int hits = 0;
            for (std::size_t i = 0; i < s.gx.size(); ++i) {
                if (std::abs(s.gx[i] - cx) <= half_x && std::abs(s.gy[i] - cy) <= half_y)
                    ++hits;
            }
            ScoredBeam candidate;
            candidate.beam = {u, n};
            candidate.score = hits / n_samples;
            candidate.centroid_distance = std::hypot(cx - s.centroid_x, cy - s.centroid_y);
            ranked.push_back(candidate);
        }
    }
    std::sort(ranked.begin(), ranked.end(), beam_order);
    return ranked;
}

std::vector<BeamIndex> select_group_beams(const GroupSpec& group, const AngleGrid& grid,
                                          int n_rf_g)
{
    const int grid_size =
        static_cast<int>(grid.lambda_x.size()) * static_cast<int>(grid.lambda_y.size());
    if (n_rf_g < 1 || n_rf_g > grid_size)
        throw std::invalid_argument("n_rf_g must be in [1, m_x * m_y]");

    const std::vector<ScoredBeam> ranked = rank_group_beams(group, grid);
    std::vector<BeamIndex> out;
    out.reserve(static_cast<std::size_t>(n_rf_g));
    for (int i = 0; i < n_rf_g; ++i)
        out.push_back(ranked[static_cast<std::size_t>(i)].beam);
    return out;
}

RfBeamformer build_rf_beamformer(const std::vector<GroupSpec>& groups, const AngleGrid& grid,
                                 const ArrayGeometry& geometry, int n_rf_g)
{
    const int n_groups = static_cast<int>(groups.size());
    const int grid_size =
        static_cast<int>(grid.lambda_x.size()) * static_cast<int>(grid.lambda_y.size());
    if (n_groups == 0)
        throw std::invalid_argument("at least one group is required");
    if (n_rf_g < 1 || n_rf_g > grid_size)
        throw std::invalid_argument("n_rf_g must be in [1, m_x * m_y]");
    if (n_groups * n_rf_g > grid_size)
        throw std::invalid_argument("total RF chains exceed the beam grid size");

    std::vector<std::vector<ScoredBeam>> rankings;
    rankings.reserve(static_cast<std::size_t>(n_groups));
    for (const auto& g : groups)
        rankings.push_back(rank_group_beams(g, grid));

    auto key = [](const BeamIndex& b) { return std::pair<int, int>(b.u, b.n); };

    // Each group claims its best still-available beams; contested beams go
    // to the higher-scoring group and the losers re-claim on the next pass.
    std::vector<std::set<std::pair<int, int>>> blocked(static_cast<std::size_t>(n_groups));
    std::vector<std::vector<ScoredBeam>> claims(static_cast<std::size_t>(n_groups));
    while (true) {
        for (int g = 0; g < n_groups; ++g) {
            claims[g].clear();
            for (const auto& cand : rankings[g]) {
                if (blocked[g].count(key(cand.beam)))
                    continue;
                claims[g].push_back(cand);
                if (static_cast<int>(claims[g].size()) == n_rf_g)
                    break;
            }
            if (static_cast<int>(claims[g].size()) < n_rf_g)
                throw std::runtime_error("beam selection infeasible: grid exhausted for a group");
        }

        std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> holders;
        for (int g = 0; g < n_groups; ++g) {
            for (const auto& c : claims[g])
                holders[key(c.beam)].push_back({g, c.score});
        }
        bool conflict = false;
        for (const auto& [beam, list] : holders) {
            if (list.size() < 2)
                continue;
            conflict = true;
            // Winner: highest score, then lowest group index.
            std::pair<int, double> best = list.front();
            for (const auto& h : list) {
                if (h.second > best.second || (h.second == best.second && h.first < best.first))
                    best = h;
            }
            for (const auto& h : list) {
                if (h.first != best.first)
                    blocked[static_cast<std::size_t>(h.first)].insert(beam);
            }
        }
        if (!conflict)
            break;
    }

    RfBeamformer f;
    f.matrix_f.set_size(geometry.antennas(), n_groups * n_rf_g);
    f.group_blocks.resize(static_cast<std::size_t>(n_groups));
    f.selected_pairs.reserve(static_cast<std::size_t>(n_groups * n_rf_g));

    std::set<std::pair<int, int>> seen;
    int col = 0;
    for (int g = 0; g < n_groups; ++g) {
        f.group_blocks[g] = {col, n_rf_g};
        for (const auto& c : claims[g]) {
            if (!seen.insert(key(c.beam)).second)
                throw std::runtime_error("duplicate beam pair across groups");
            f.selected_pairs.push_back(c.beam);
            f.matrix_f.col(col) = steering_vector(grid.lambda_x[c.beam.u - 1],
                                                  grid.lambda_y[c.beam.n - 1], geometry);
            ++col;
        }
    }
    return f;
}

arma::cx_mat effective_channel(const arma::cx_mat& h_i, const RfBeamformer& f)
{
    if (h_i.n_cols != f.matrix_f.n_rows)
        throw std::invalid_argument("channel/beamformer shape mismatch");
    return h_i * f.matrix_f;
}

arma::cx_mat rzf_precoder(const arma::cx_mat& eff, double alpha, int k_users)
{
    if (alpha <= 0.0)
        throw std::invalid_argument("alpha must be positive");
    if (static_cast<int>(eff.n_rows) != k_users)
        throw std::invalid_argument("effective channel row count must equal k_users");

    const arma::cx_mat eff_h = eff.t(); // N x K conjugate transpose
    arma::cx_mat gram = eff_h * eff;
    gram.diag() += k_users * alpha;

    arma::cx_mat b;
    if (!arma::solve(b, gram, eff_h, arma::solve_opts::no_approx))
        throw std::runtime_error("RZF solve failed: system is numerically singular");
    if (!b.is_finite())
        throw std::runtime_error("RZF produced non-finite entries");
    return b;
}

arma::cx_mat fdp_precoder(const arma::cx_mat& h_i, double alpha, int k_users)
{
    return rzf_precoder(h_i, alpha, k_users);
}

std::string beam_pairs_json(const RfBeamformer& f)
{
    nlohmann::json j;
    j["groups"] = nlohmann::json::array();
    for (std::size_t g = 0; g < f.group_blocks.size(); ++g) {
        const ColumnRange& block = f.group_blocks[g];
        nlohmann::json pairs = nlohmann::json::array();
        for (int c = block.first; c < block.first + block.count; ++c) {
            const BeamIndex& b = f.selected_pairs[static_cast<std::size_t>(c)];
            pairs.push_back({{"u", b.u}, {"n", b.n}});
        }
        j["groups"].push_back({{"group", g}, {"beams", pairs}});
    }
    return j.dump(2) + "\n";
}

} // namespace mmo
