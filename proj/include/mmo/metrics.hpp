// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include <armadillo>

namespace mmo {

enum class AllocMethod { GA, EQ, PSO };

const char* alloc_method_name(AllocMethod method);

// Powers and achieved rates of one realization under one allocator.
// powers(k, i) is the power of user k on subcarrier i+1, in watts.
struct AllocationResult {
    arma::mat powers;
    std::vector<double> per_subcarrier_rate;
    double total_rate = 0.0;
    AllocMethod method_tag = AllocMethod::EQ;
};

// Hardware power accounting: P_RF per RF chain, P_PS per phase shifter.
struct PowerModel {
    double p_rf_watts = 0.25;
    double p_ps_watts = 0.001;
    int n_rf = 0;
    int n_ps = 0;
};

// Pairwise beamforming gains g(k, t) = |row_k(eff) * col_t(b)|^2: the power
// user k receives from the stream intended for user t.
arma::mat channel_gain_matrix(const arma::cx_mat& eff, const arma::cx_mat& b);

// Per-user rate terms log2(1 + p_k g_kk / (sum_{t != k} p_t g_kt + sigma2)).
std::vector<double> user_rates_from_gains(const arma::mat& gains,
                                          const std::vector<double>& powers, double sigma2);

double sum_rate_from_gains(const arma::mat& gains, const std::vector<double>& powers,
                           double sigma2);

// Instantaneous sum-rate of one subcarrier given the effective channel and
// baseband precoder.
double sum_rate_subcarrier(const arma::cx_mat& eff, const arma::cx_mat& b,
                           const std::vector<double>& powers, double sigma2);

// (total over subcarriers, average per subcarrier).
std::pair<double, double> overall_rate(const std::vector<double>& per_subcarrier);

// Transmit power sum_k p_k ||b_k||^2. The three-argument form evaluates
// sum_k p_k ||F b_k||^2 instead, for checking against a non-unitary F.
double transmit_power(const arma::cx_mat& b, const std::vector<double>& powers);
double transmit_power(const arma::cx_mat& b, const std::vector<double>& powers,
                      const arma::cx_mat& f);

// Total consumed power P_T + N_RF * P_RF + N_PS * P_PS in watts.
double consumed_power(double p_t_watts, const PowerModel& model);

// Energy efficiency beta = total_rate / consumed_power, in bps/Hz/W.
double energy_efficiency(double total_rate, double p_t_watts, const PowerModel& model);

} // namespace mmo
