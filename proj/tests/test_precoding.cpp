// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mmo/channel.hpp"
#include "mmo/metrics.hpp"
#include "mmo/optimizer.hpp"
#include "mmo/precoding.hpp"
#include "mmo/rng.hpp"

using namespace mmo;

TEST_CASE("quantized grid hits the closed-form lattice")
{
    const AngleGrid g16 = quantized_grid({16, 16, 0.5});
    REQUIRE(g16.lambda_x.size() == 16);
    CHECK(g16.lambda_x.front() == doctest::Approx(-0.9375).epsilon(1e-15));
    CHECK(g16.lambda_x.back() == doctest::Approx(0.9375).epsilon(1e-15));
    for (std::size_t u = 1; u < g16.lambda_x.size(); ++u)
        CHECK(g16.lambda_x[u] > g16.lambda_x[u - 1]);
    for (double v : g16.lambda_x) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
    }

    const AngleGrid g2 = quantized_grid({2, 2, 0.5});
    CHECK(g2.lambda_x[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g2.lambda_x[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("steering vectors on the grid are orthonormal")
{
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);

    std::vector<arma::cx_vec> beams;
    for (double lx : grid.lambda_x)
        for (double ly : grid.lambda_y)
            beams.push_back(steering_vector(lx, ly, geo));

    for (std::size_t p = 0; p < beams.size(); ++p) {
        for (std::size_t q = 0; q < beams.size(); ++q) {
            const double ip = std::abs(arma::cdot(beams[p], beams[q]));
            if (p == q)
                CHECK(ip == doctest::Approx(1.0).epsilon(1e-12));
            else
                CHECK(ip < 1e-10);
        }
    }
}

TEST_CASE("a zero-spread group sitting on a grid pair selects exactly that pair")
{
    const ArrayGeometry geo{16, 16, 0.5};
    const AngleGrid grid = quantized_grid(geo);

    // Direction cosines (0.0625, 0.0625) are grid pair (u, n) = (9, 9):
    // psi = 45 deg, sin(theta) = 0.0625 * sqrt(2).
    const double psi = 45.0;
    const double theta = std::asin(0.0625 * std::sqrt(2.0)) * 180.0 / 3.14159265358979323846;
    const GroupSpec group{theta, psi, 0.0, 0.0, 1};

    const auto pairs = select_group_beams(group, grid, 1);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].u == 9);
    CHECK(pairs[0].n == 9);
}

TEST_CASE("beam selection validates its budget")
{
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const GroupSpec group{60.0, 21.0, 15.0, 11.0, 1};
    CHECK_THROWS_AS(select_group_beams(group, grid, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_group_beams(group, grid, 17), std::invalid_argument);
    CHECK_NOTHROW(select_group_beams(group, grid, 16));
}

TEST_CASE("group rankings are complete and deterministically ordered")
{
    const ArrayGeometry geo{8, 8, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const GroupSpec group{60.0, 141.0, 15.0, 11.0, 5};

    const auto ranked = rank_group_beams(group, grid);
    REQUIRE(ranked.size() == 64);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        const auto& a = ranked[i - 1];
        const auto& b = ranked[i];
        const bool ordered =
            a.score > b.score ||
            (a.score == b.score && a.centroid_distance < b.centroid_distance) ||
            (a.score == b.score && a.centroid_distance == b.centroid_distance &&
             std::pair(a.beam.u, a.beam.n) < std::pair(b.beam.u, b.beam.n));
        CHECK(ordered);
    }
    // Scores are sample fractions of the 64x64 support grid.
    for (const auto& sb : ranked) {
        CHECK(sb.score >= 0.0);
        CHECK(sb.score <= 1.0);
    }
}

TEST_CASE("reference beamformer: 36 disjoint beams, constant modulus, unitary")
{
    const ScenarioConfig cfg;
    const AngleGrid grid = quantized_grid(cfg.geometry);
    const RfBeamformer f =
        build_rf_beamformer(cfg.groups, grid, cfg.geometry, cfg.rf_chains_per_group);

    CHECK(f.n_rf() == 36);
    REQUIRE(f.group_blocks.size() == 3);
    CHECK(f.group_blocks[0].first == 0);
    CHECK(f.group_blocks[1].first == 12);
    CHECK(f.group_blocks[2].first == 24);
    for (const auto& blk : f.group_blocks)
        CHECK(blk.count == 12);

    std::set<std::pair<int, int>> distinct;
    for (const auto& b : f.selected_pairs)
        distinct.insert({b.u, b.n});
    CHECK(distinct.size() == 36);

    const double cm = 1.0 / 16.0;
    for (const auto& entry : f.matrix_f)
        CHECK(std::abs(std::abs(entry) - cm) < 1e-12);

    const arma::cx_mat gram = f.matrix_f.t() * f.matrix_f;
    const arma::cx_mat eye = arma::eye<arma::cx_mat>(36, 36);
    CHECK(arma::abs(gram - eye).max() < 1e-10);

    // Unitarity licenses the reduced power accounting: ||F b|| = ||b||.
    auto rng = make_rng(2024);
    std::normal_distribution<double> n01(0.0, 1.0);
    arma::cx_vec b(36);
    for (auto& v : b)
        v = {n01(rng), n01(rng)};
    CHECK(arma::norm(f.matrix_f * b) == doctest::Approx(arma::norm(b)).epsilon(1e-10));
}

TEST_CASE("azimuth-separated groups get disjoint beam sets even selected independently")
{
    const ScenarioConfig cfg;
    const AngleGrid grid = quantized_grid(cfg.geometry);
    const auto a = select_group_beams(cfg.groups[0], grid, 12);
    const auto b = select_group_beams(cfg.groups[1], grid, 12);
    const auto c = select_group_beams(cfg.groups[2], grid, 12);

    std::set<std::pair<int, int>> seen;
    for (const auto& list : {a, b, c})
        for (const auto& beam : list)
            seen.insert({beam.u, beam.n});
    CHECK(seen.size() == 36);
}

TEST_CASE("single-group single-beam beamformer is one unit-norm steering vector")
{
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const std::vector<GroupSpec> groups{{60.0, 21.0, 5.0, 5.0, 1}};
    const RfBeamformer f = build_rf_beamformer(groups, grid, geo, 1);
    REQUIRE(f.n_rf() == 1);
    CHECK(arma::norm(f.matrix_f.col(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beamformer construction rejects oversubscribed grids")
{
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const std::vector<GroupSpec> groups{{60.0, 21.0, 15.0, 11.0, 1},
                                        {60.0, 141.0, 15.0, 11.0, 1},
                                        {60.0, 261.0, 15.0, 11.0, 1}};
    CHECK_THROWS_AS(build_rf_beamformer(groups, grid, geo, 6), std::invalid_argument);
    CHECK_NOTHROW(build_rf_beamformer(groups, grid, geo, 5));
}

TEST_CASE("overlapping groups still obtain disjoint beams via conflict resolution")
{
    const ArrayGeometry geo{8, 8, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    // Nearly identical supports force heavy contention over the same beams.
    const std::vector<GroupSpec> groups{{60.0, 60.0, 10.0, 10.0, 2},
                                        {61.0, 61.0, 10.0, 10.0, 2},
                                        {59.0, 62.0, 10.0, 10.0, 2}};
    const RfBeamformer f = build_rf_beamformer(groups, grid, geo, 8);
    std::set<std::pair<int, int>> distinct;
    for (const auto& b : f.selected_pairs)
        distinct.insert({b.u, b.n});
    CHECK(distinct.size() == 24);
    const arma::cx_mat gram = f.matrix_f.t() * f.matrix_f;
    CHECK(arma::abs(gram - arma::eye<arma::cx_mat>(24, 24)).max() < 1e-10);
}

TEST_CASE("effective channel is the plain product with shape checks")
{
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const std::vector<GroupSpec> groups{{60.0, 21.0, 5.0, 5.0, 1}};
    const RfBeamformer f = build_rf_beamformer(groups, grid, geo, 1);

    arma::cx_mat h(1, 16, arma::fill::randn);
    const arma::cx_mat eff = effective_channel(h, f);
    REQUIRE(eff.n_rows == 1);
    REQUIRE(eff.n_cols == 1);
    const arma::cx_rowvec expected = h * f.matrix_f.col(0);
    CHECK(std::abs(eff(0, 0) - expected(0)) < 1e-12);

    const arma::cx_mat zero(1, 16, arma::fill::zeros);
    CHECK(arma::abs(effective_channel(zero, f)).max() == 0.0);

    arma::cx_mat wrong(1, 8, arma::fill::zeros);
    CHECK_THROWS_AS(effective_channel(wrong, f), std::invalid_argument);
}

TEST_CASE("effective channel energy concentrates in the user's own group block")
{
    const ScenarioConfig cfg;
    const AngleGrid grid = quantized_grid(cfg.geometry);
    const RfBeamformer f =
        build_rf_beamformer(cfg.groups, grid, cfg.geometry, cfg.rf_chains_per_group);

    auto rng = make_rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        const auto users = draw_realization(cfg, rng);
        const ChannelRealization ch = assemble_channel(users, cfg);
        for (int i = 0; i < cfg.subcarriers; ++i) {
            const arma::cx_mat eff = effective_channel(ch.per_subcarrier[i], f);
            for (std::size_t k = 0; k < users.size(); ++k) {
                std::vector<double> block_energy;
                for (const auto& blk : f.group_blocks) {
                    double e = 0.0;
                    for (int c = blk.first; c < blk.first + blk.count; ++c)
                        e += std::norm(eff(k, c));
                    block_energy.push_back(e);
                }
                const int own = users[k].group_index;
                for (std::size_t g = 0; g < block_energy.size(); ++g) {
                    if (static_cast<int>(g) != own)
                        CHECK(block_energy[static_cast<std::size_t>(own)] >= block_energy[g]);
                }
            }
        }
    }
}

TEST_CASE("RZF closed forms")
{
    // Identity effective channel with K*alpha = 1: B = I/2.
    const arma::cx_mat eye4 = arma::eye<arma::cx_mat>(4, 4);
    const arma::cx_mat b = rzf_precoder(eye4, 0.25, 4);
    CHECK(arma::abs(b - 0.5 * eye4).max() < 1e-12);

    // Single user on the first chain with K*alpha = 0.1: B = e1 / 1.1.
    arma::cx_mat e1(1, 4, arma::fill::zeros);
    e1(0, 0) = 1.0;
    const arma::cx_mat b1 = rzf_precoder(e1, 0.1, 1);
    REQUIRE(b1.n_rows == 4);
    REQUIRE(b1.n_cols == 1);
    CHECK(std::abs(b1(0, 0) - std::complex<double>(1.0 / 1.1, 0.0)) < 1e-12);
    CHECK(arma::abs(b1.rows(1, 3)).max() < 1e-14);

    CHECK_THROWS_AS(rzf_precoder(eye4, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(rzf_precoder(eye4, -1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(rzf_precoder(eye4, 0.25, 3), std::invalid_argument);
}

TEST_CASE("RZF satisfies its defining system on random instances")
{
    auto rng = make_rng(77);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        arma::cx_mat eff(6, 8);
        for (auto& v : eff)
            v = {n01(rng), n01(rng)};
        const double alpha = 0.05 + 0.1 * trial;
        const arma::cx_mat b = rzf_precoder(eff, alpha, 6);

        arma::cx_mat lhs = eff.t() * eff;
        lhs.diag() += 6.0 * alpha;
        const double resid = arma::norm(lhs * b - eff.t(), "fro") / arma::norm(eff.t(), "fro");
        CHECK(resid < 1e-9);
    }
}

TEST_CASE("FDP is RZF on the raw channel")
{
    const arma::cx_mat eye3 = arma::eye<arma::cx_mat>(3, 3);
    const arma::cx_mat b = fdp_precoder(eye3, 1.0 / 3.0, 3);
    CHECK(arma::abs(b - 0.5 * eye3).max() < 1e-12);

    auto rng = make_rng(8);
    std::normal_distribution<double> n01(0.0, 1.0);
    arma::cx_mat h(2, 5);
    for (auto& v : h)
        v = {n01(rng), n01(rng)};
    const arma::cx_mat via_fdp = fdp_precoder(h, 0.2, 2);
    const arma::cx_mat via_rzf = rzf_precoder(h, 0.2, 2);
    CHECK(arma::abs(via_fdp - via_rzf).max() == 0.0);
}

TEST_CASE("hybrid precoding closely tracks the fully-digital sum rate under EQ-RA")
{
    const ScenarioConfig cfg; // reference scenario, P_T = 40 dBm, C = 16
    const double p_t = cfg.total_power_watts();
    const double sigma2 = cfg.noise_variance_watts();
    const double alpha = sigma2 / p_t;
    const int k = cfg.total_users();

    const AngleGrid grid = quantized_grid(cfg.geometry);
    const RfBeamformer f =
        build_rf_beamformer(cfg.groups, grid, cfg.geometry, cfg.rf_chains_per_group);

    auto rng = make_rng(3141);
    double hp_sum = 0.0, fdp_sum = 0.0;
    const int n_real = 30;
    for (int r = 0; r < n_real; ++r) {
        const auto users = draw_realization(cfg, rng);
        const ChannelRealization ch = assemble_channel(users, cfg);
        for (int i = 0; i < cfg.subcarriers; ++i) {
            const arma::cx_mat eff = effective_channel(ch.per_subcarrier[i], f);
            const arma::cx_mat b_hp = rzf_precoder(eff, alpha, k);
            const auto p_hp = eq_allocate(b_hp, p_t, cfg.subcarriers, k);
            hp_sum += sum_rate_subcarrier(eff, b_hp, p_hp, sigma2);

            const arma::cx_mat b_fd = fdp_precoder(ch.per_subcarrier[i], alpha, k);
            const auto p_fd = eq_allocate(b_fd, p_t, cfg.subcarriers, k);
            fdp_sum += sum_rate_subcarrier(ch.per_subcarrier[i], b_fd, p_fd, sigma2);
        }
    }
    const double hp_mean = hp_sum / n_real;
    const double fdp_mean = fdp_sum / n_real;
    CHECK(hp_mean >= 0.85 * fdp_mean);
    CHECK(hp_mean <= 1.05 * fdp_mean);
}

TEST_CASE("beam pair debug dump lists every group")
{
    const ScenarioConfig cfg;
    const AngleGrid grid = quantized_grid(cfg.geometry);
    const RfBeamformer f =
        build_rf_beamformer(cfg.groups, grid, cfg.geometry, cfg.rf_chains_per_group);
    const std::string dump = beam_pairs_json(f);
    CHECK(dump.find("\"groups\"") != std::string::npos);
    CHECK(dump.find("\"beams\"") != std::string::npos);
    CHECK(dump.find("\"u\"") != std::string::npos);
}
