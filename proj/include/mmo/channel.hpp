// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <armadillo>

#include "mmo/scenario.hpp"

namespace mmo {

// Per-subcarrier channel matrices of one network realization together with
// the path parameters that generated them. per_subcarrier[i] is K x M; row k
// is the (transposed) channel vector of user k on subcarrier i+1.
struct ChannelRealization {
    std::vector<arma::cx_mat> per_subcarrier;
    std::vector<UserPathSet> users;

    int subcarriers() const { return static_cast<int>(per_subcarrier.size()); }
    int users_count() const { return static_cast<int>(users.size()); }
};

// URA phase response: Kronecker product of the x- and y-axis progressive
// phase vectors, each with elements e^{-j 2 pi d (m-1) gamma}. Every entry
// has unit modulus. gamma_x/gamma_y are direction cosines.
arma::cx_vec phase_response(double gamma_x, double gamma_y, const ArrayGeometry& geometry);

// Unit-norm steering vector: conjugate phase response scaled by 1/sqrt(M).
arma::cx_vec steering_vector(double gamma_x, double gamma_y, const ArrayGeometry& geometry);

// Direction cosines of an (elevation, azimuth) departure angle in degrees:
// gamma_x = sin(theta) cos(psi), gamma_y = sin(theta) sin(psi).
void direction_cosines(double eaod_deg, double aaod_deg, double& gamma_x, double& gamma_y);

// Channel vector of one user at subcarrier i (1-based):
//   h[i] = sum_l tau_l^{-eta} z_l phi(gamma_x_l, gamma_y_l) e^{-j 2 pi l i / C}
// with l the 1-based path index doubling as the delay tap.
arma::cx_vec user_channel(const UserPathSet& paths, int subcarrier_index,
                          const ScenarioConfig& config);

// Builds all C channel matrices for a list of users ordered group-by-group.
// Uses the factored form (C x L tap matrix times L x M phase matrix) per
// user, which is algebraically identical to summing user_channel terms.
ChannelRealization assemble_channel(const std::vector<UserPathSet>& users,
                                    const ScenarioConfig& config);

// Binary channel dump for regression fixtures: magic "MMOCHAN1", then C, K,
// M as little-endian uint64, then the C x K x M tensor as interleaved re/im
// little-endian doubles, subcarrier-major then user then antenna.
void dump_channel(const std::vector<arma::cx_mat>& per_subcarrier, const std::string& path);
std::vector<arma::cx_mat> load_channel_dump(const std::string& path);

} // namespace mmo
