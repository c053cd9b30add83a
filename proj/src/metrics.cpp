// SPDX-License-Identifier: Apache-2.0

#include "mmo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace mmo {

const char* alloc_method_name(AllocMethod method)
{
    switch (method) {
    case AllocMethod::GA: return "ga";
    case AllocMethod::EQ: return "eq";
    case AllocMethod::PSO: return "pso";
    }
    return "?";
}

arma::mat channel_gain_matrix(const arma::cx_mat& eff, const arma::cx_mat& b)
{
    if (eff.n_cols != b.n_rows || eff.n_rows != b.n_cols)
        throw std::invalid_argument("effective channel and precoder shapes disagree");
    const arma::cx_mat prod = eff * b; // K x K, entry (k, t) = row_k * col_t
    return arma::square(arma::abs(prod));
}

std::vector<double> user_rates_from_gains(const arma::mat& gains,
                                          const std::vector<double>& powers, double sigma2)
{
    const arma::uword k_users = gains.n_rows;
    if (gains.n_cols != k_users)
        throw std::invalid_argument("gain matrix must be square");
    if (powers.size() != k_users)
        throw std::invalid_argument("power vector length must match user count");
    if (sigma2 <= 0.0)
        throw std::invalid_argument("sigma2 must be positive");
    for (double p : powers) {
        if (p < 0.0 || !std::isfinite(p))
            throw std::invalid_argument("powers must be non-negative and finite");
    }

    std::vector<double> rates(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        double interference = 0.0;
        for (arma::uword t = 0; t < k_users; ++t) {
            if (t != k)
                interference += powers[t] * gains(k, t);
        }
        const double sinr = powers[k] * gains(k, k) / (interference + sigma2);
        rates[k] = std::log2(1.0 + sinr);
    }
    return rates;
}

double sum_rate_from_gains(const arma::mat& gains, const std::vector<double>& powers,
                           double sigma2)
{
    double sum = 0.0;
    for (double r : user_rates_from_gains(gains, powers, sigma2))
        sum += r;
    return sum;
}

double sum_rate_subcarrier(const arma::cx_mat& eff, const arma::cx_mat& b,
                           const std::vector<double>& powers, double sigma2)
{
    return sum_rate_from_gains(channel_gain_matrix(eff, b), powers, sigma2);
}

std::pair<double, double> overall_rate(const std::vector<double>& per_subcarrier)
{
    if (per_subcarrier.empty())
        throw std::invalid_argument("per-subcarrier rate list must not be empty");
    double total = 0.0;
    for (double r : per_subcarrier)
        total += r;
    return {total, total / static_cast<double>(per_subcarrier.size())};
}

double transmit_power(const arma::cx_mat& b, const std::vector<double>& powers)
{
    if (powers.size() != b.n_cols)
        throw std::invalid_argument("power vector length must match precoder columns");
    double sum = 0.0;
    for (arma::uword k = 0; k < b.n_cols; ++k) {
        const double norm2 = arma::accu(arma::square(arma::abs(b.col(k))));
        sum += powers[k] * norm2;
    }
    return sum;
}

double transmit_power(const arma::cx_mat& b, const std::vector<double>& powers,
                      const arma::cx_mat& f)
{
    if (powers.size() != b.n_cols)
        throw std::invalid_argument("power vector length must match precoder columns");
    if (f.n_cols != b.n_rows)
        throw std::invalid_argument("beamformer/precoder shape mismatch");
    double sum = 0.0;
    for (arma::uword k = 0; k < b.n_cols; ++k) {
        const arma::cx_vec fb = f * b.col(k);
        sum += powers[k] * arma::accu(arma::square(arma::abs(fb)));
    }
    return sum;
}

double consumed_power(double p_t_watts, const PowerModel& model)
{
    return p_t_watts + model.n_rf * model.p_rf_watts + model.n_ps * model.p_ps_watts;
}

double energy_efficiency(double total_rate, double p_t_watts, const PowerModel& model)
{
    const double denom = consumed_power(p_t_watts, model);
    if (denom <= 0.0)
        throw std::invalid_argument("consumed power must be positive");
    return total_rate / denom;
}

} // namespace mmo
