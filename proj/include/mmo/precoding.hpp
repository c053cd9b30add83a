// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <armadillo>

#include "mmo/scenario.hpp"

namespace mmo {

// Quantized direction-cosine grid: lambda[u-1] = -1 + (2u-1)/m for u = 1..m
// on each axis, m_x * m_y beams total. Steering vectors at distinct grid
// pairs are mutually orthogonal for half-wavelength spacing.
struct AngleGrid {
    std::vector<double> lambda_x;
    std::vector<double> lambda_y;
};

// 1-based grid indices of one beam: u indexes lambda_x, n indexes lambda_y.
struct BeamIndex {
    int u = 0;
    int n = 0;

    friend bool operator==(const BeamIndex&, const BeamIndex&) = default;
};

// Beam candidate ranked for one group: fraction of the group's sampled AoD
// support covered by the beam's half-bin rectangle, with centroid distance
// as the tie break.
struct ScoredBeam {
    BeamIndex beam;
    double score = 0.0;
    double centroid_distance = 0.0;
};

struct ColumnRange {
    int first = 0;
    int count = 0;
};

// Shared RF beamformer: column j of matrix_f is the steering vector at
// selected_pairs[j]; group g owns the contiguous column block
// group_blocks[g]. Constant modulus 1/sqrt(M) per entry and F^H F = I.
struct RfBeamformer {
    arma::cx_mat matrix_f;
    std::vector<ColumnRange> group_blocks;
    std::vector<BeamIndex> selected_pairs;

    int n_rf() const { return static_cast<int>(matrix_f.n_cols); }
};

AngleGrid quantized_grid(const ArrayGeometry& geometry);

// Scores every grid pair for one group: a 64x64 uniform sample of the
// (elevation, azimuth) support is mapped to direction cosines; a beam's
// score is the fraction that lands in [lambda_x_u +- 1/m_x] x
// [lambda_y_n +- 1/m_y]. Sorted by score desc, centroid distance asc, then
// (u, n) lexicographic.
std::vector<ScoredBeam> rank_group_beams(const GroupSpec& group, const AngleGrid& grid);

// Top n_rf_g beams of the group ranking.
std::vector<BeamIndex> select_group_beams(const GroupSpec& group, const AngleGrid& grid,
                                          int n_rf_g);

// Builds the block RF beamformer for all groups. Cross-group conflicts over
// a grid pair go to the group scoring it higher (tie: lower group index);
// the loser falls back to its next-ranked beam. Throws if the groups cannot
// be given disjoint beams.
RfBeamformer build_rf_beamformer(const std::vector<GroupSpec>& groups, const AngleGrid& grid,
                                 const ArrayGeometry& geometry, int n_rf_g);

// Effective channel seen by the baseband stage: H[i] * F.
arma::cx_mat effective_channel(const arma::cx_mat& h_i, const RfBeamformer& f);

// Regularized zero-forcing precoder B = (E^H E + K alpha I)^{-1} E^H for an
// effective channel E (K x N). Solved as a linear system, never by explicit
// inverse. The identity has the inner dimension N.
arma::cx_mat rzf_precoder(const arma::cx_mat& eff, double alpha, int k_users);

// Fully-digital baseline: RZF applied to the raw K x M channel.
arma::cx_mat fdp_precoder(const arma::cx_mat& h_i, double alpha, int k_users);

// Debug dump of the selected (u, n) pairs per group as JSON.
std::string beam_pairs_json(const RfBeamformer& f);

} // namespace mmo
