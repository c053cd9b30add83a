// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmo/metrics.hpp"
#include "mmo/precoding.hpp"
#include "mmo/rng.hpp"

using namespace mmo;

TEST_CASE("single-user unit-gain subcarrier rate is log2(2)")
{
    arma::cx_mat eff(1, 1), b(1, 1);
    eff(0, 0) = 1.0;
    b(0, 0) = 1.0;
    CHECK(sum_rate_subcarrier(eff, b, {1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_rate_subcarrier(eff, b, {0.0}, 1.0) == 0.0);
}

TEST_CASE("orthogonal two-user fixture matches the closed form")
{
    arma::cx_mat eff = arma::eye<arma::cx_mat>(2, 2) * 3.0;
    arma::cx_mat b = arma::eye<arma::cx_mat>(2, 2);
    const double g = 9.0;
    const double p = 0.7;
    const double sigma2 = 0.5;
    const double expected = 2.0 * std::log2(1.0 + p * g / sigma2);
    CHECK(sum_rate_subcarrier(eff, b, {p, p}, sigma2) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rate input validation")
{
    arma::cx_mat eff = arma::eye<arma::cx_mat>(2, 2);
    arma::cx_mat b = arma::eye<arma::cx_mat>(2, 2);
    CHECK_THROWS_AS(sum_rate_subcarrier(eff, b, {-0.1, 0.1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sum_rate_subcarrier(eff, b, {0.1, 0.1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sum_rate_subcarrier(eff, b, {0.1}, 1.0), std::invalid_argument);
    arma::cx_mat wrong(3, 2, arma::fill::ones);
    CHECK_THROWS_AS(channel_gain_matrix(wrong, b), std::invalid_argument);
}

TEST_CASE("per-user rate grows with own power and the sum stays finite")
{
    auto rng = make_rng(4);
    std::normal_distribution<double> n01(0.0, 1.0);
    arma::cx_mat eff(3, 5), bsel(5, 3);
    for (auto& v : eff)
        v = {n01(rng), n01(rng)};
    for (auto& v : bsel)
        v = {n01(rng), n01(rng)};
    const arma::mat gains = channel_gain_matrix(eff, bsel);

    std::vector<double> powers{0.2, 0.3, 0.1};
    const auto base = user_rates_from_gains(gains, powers, 0.05);
    for (double extra : {0.1, 0.5, 2.0}) {
        auto boosted = powers;
        boosted[1] += extra;
        const auto rates = user_rates_from_gains(gains, boosted, 0.05);
        CHECK(rates[1] >= base[1]);
    }

    const double total = sum_rate_from_gains(gains, powers, 0.05);
    CHECK(std::isfinite(total));
    CHECK(total >= 0.0);
}

TEST_CASE("scaling powers and noise together leaves the rate unchanged")
{
    auto rng = make_rng(21);
    std::normal_distribution<double> n01(0.0, 1.0);
    arma::cx_mat eff(4, 6), bsel(6, 4);
    for (auto& v : eff)
        v = {n01(rng), n01(rng)};
    for (auto& v : bsel)
        v = {n01(rng), n01(rng)};

    const std::vector<double> powers{0.4, 0.1, 0.25, 0.05};
    const double sigma2 = 0.3;
    const double base = sum_rate_subcarrier(eff, bsel, powers, sigma2);
    for (double scale : {1e-6, 0.5, 7.0, 1e6}) {
        std::vector<double> scaled = powers;
        for (double& p : scaled)
            p *= scale;
        const double r = sum_rate_subcarrier(eff, bsel, scaled, sigma2 * scale);
        CHECK(r == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("overall rate totals and averages")
{
    const auto [total, avg] = overall_rate({1.0, 2.0, 3.0});
    CHECK(total == 6.0);
    CHECK(avg == 2.0);

    const auto [t1, a1] = overall_rate({4.2});
    CHECK(t1 == 4.2);
    CHECK(a1 == 4.2);

    const auto [te, ae] = overall_rate({2.5, 2.5, 2.5, 2.5});
    CHECK(te == 10.0);
    CHECK(ae == 2.5);

    CHECK_THROWS_AS(overall_rate({}), std::invalid_argument);
}

TEST_CASE("transmit power accounting")
{
    arma::cx_mat b = arma::eye<arma::cx_mat>(3, 3); // unit-norm columns
    CHECK(transmit_power(b, {0.2, 0.3, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transmit_power(b, {0.0, 0.0, 0.0}) == 0.0);

    arma::cx_mat one(2, 1);
    one(0, 0) = 2.0;
    one(1, 0) = 0.0;
    CHECK(transmit_power(one, {0.0}) == 0.0);
    CHECK(transmit_power(one, {0.5}) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(transmit_power(b, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("unitary-F shortcut agrees with the explicit-F power")
{
    // Unitary F from the beam grid; random baseband precoder and powers.
    const ArrayGeometry geo{4, 4, 0.5};
    const AngleGrid grid = quantized_grid(geo);
    const std::vector<GroupSpec> groups{{60.0, 21.0, 10.0, 10.0, 1}, {60.0, 141.0, 10.0, 10.0, 1}};
    const RfBeamformer f = build_rf_beamformer(groups, grid, geo, 2);

    auto rng = make_rng(31);
    std::normal_distribution<double> n01(0.0, 1.0);
    arma::cx_mat b(4, 3);
    for (auto& v : b)
        v = {n01(rng), n01(rng)};
    const std::vector<double> powers{0.3, 1.2, 0.05};

    const double direct = transmit_power(b, powers);
    const double through_f = transmit_power(b, powers, f.matrix_f);
    CHECK(through_f == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("energy efficiency uses the architecture power budgets")
{
    const PowerModel hp{0.25, 0.001, 36, 36 * 256};
    const PowerModel fdp{0.25, 0.001, 256, 0};

    CHECK(consumed_power(10.0, hp) == doctest::Approx(28.216).epsilon(1e-12));
    CHECK(consumed_power(10.0, fdp) == doctest::Approx(74.0).epsilon(1e-12));
    CHECK(consumed_power(10.0, fdp) / consumed_power(10.0, hp) ==
          doctest::Approx(2.623).epsilon(0.001 / 2.623));

    CHECK(energy_efficiency(282.16, 10.0, hp) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(energy_efficiency(0.0, 10.0, hp) == 0.0);
    CHECK_THROWS_AS(energy_efficiency(1.0, 0.0, PowerModel{0.0, 0.0, 0, 0}),
                    std::invalid_argument);
}
