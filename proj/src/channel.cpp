// SPDX-License-Identifier: Apache-2.0

#include "mmo/channel.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mmo {

static_assert(std::endian::native == std::endian::little,
              "channel dump I/O assumes a little-endian host");

namespace {

constexpr double kPi = 3.14159265358979323846;

// One axis of the progressive phase: [e^{-j2pi d 0 g}, ..., e^{-j2pi d (m-1) g}]
arma::cx_vec axis_phase(int m, double spacing_d, double gamma)
{
    arma::cx_vec v(m);
    for (int i = 0; i < m; ++i) {
        const double arg = -2.0 * kPi * spacing_d * i * gamma;
        v[i] = std::polar(1.0, arg);
    }
    return v;
}

} // namespace

arma::cx_vec phase_response(double gamma_x, double gamma_y, const ArrayGeometry& geometry)
{
    const arma::cx_vec px = axis_phase(geometry.m_x, geometry.spacing_d, gamma_x);
    const arma::cx_vec py = axis_phase(geometry.m_y, geometry.spacing_d, gamma_y);
    return arma::kron(px, py);
}

arma::cx_vec steering_vector(double gamma_x, double gamma_y, const ArrayGeometry& geometry)
{
    const double scale = 1.0 / std::sqrt(static_cast<double>(geometry.antennas()));
    return scale * arma::conj(phase_response(gamma_x, gamma_y, geometry));
}

void direction_cosines(double eaod_deg, double aaod_deg, double& gamma_x, double& gamma_y)
{
    const double theta = eaod_deg * kPi / 180.0;
    const double psi = aaod_deg * kPi / 180.0;
    gamma_x = std::sin(theta) * std::cos(psi);
    gamma_y = std::sin(theta) * std::sin(psi);
}

arma::cx_vec user_channel(const UserPathSet& paths, int subcarrier_index,
                          const ScenarioConfig& config)
{
    const int c = config.subcarriers;
    if (subcarrier_index < 1 || subcarrier_index > c)
        throw std::invalid_argument("subcarrier_index must be in [1, C]");

    const int n_paths = static_cast<int>(paths.gains.size());
    const double eta = config.path_loss_exponent;
    arma::cx_vec h(config.geometry.antennas(), arma::fill::zeros);

    for (int l = 0; l < n_paths; ++l) {
        double gx = 0.0, gy = 0.0;
        direction_cosines(paths.eaod_deg[l], paths.aaod_deg[l], gx, gy);
        const double loss = std::pow(paths.distances_m[l], -eta);
        const std::complex<double> tap =
            std::polar(1.0, -2.0 * kPi * (l + 1) * subcarrier_index / static_cast<double>(c));
        h += (loss * paths.gains[l] * tap) * phase_response(gx, gy, config.geometry);
    }
    return h;
}

ChannelRealization assemble_channel(const std::vector<UserPathSet>& users,
                                    const ScenarioConfig& config)
{
    const int c = config.subcarriers;
    const int m = config.geometry.antennas();
    const int k_total = static_cast<int>(users.size());
    const double eta = config.path_loss_exponent;

    for (std::size_t k = 1; k < users.size(); ++k) {
        if (users[k].group_index < users[k - 1].group_index)
            throw std::invalid_argument("users must be ordered group-by-group");
    }

    ChannelRealization out;
    out.users = users;
    out.per_subcarrier.assign(c, arma::cx_mat(k_total, m, arma::fill::zeros));

    for (int k = 0; k < k_total; ++k) {
        const UserPathSet& u = users[static_cast<std::size_t>(k)];
        const int n_paths = static_cast<int>(u.gains.size());

        // Tap matrix W: W(i-1, l-1) = tau_l^{-eta} z_l e^{-j 2 pi l i / C}
        arma::cx_mat taps(c, n_paths);
        for (int l = 0; l < n_paths; ++l) {
            const std::complex<double> weighted =
                std::pow(u.distances_m[l], -eta) * u.gains[l];
            for (int i = 1; i <= c; ++i) {
                taps(i - 1, l) =
                    weighted * std::polar(1.0, -2.0 * kPi * (l + 1) * i / static_cast<double>(c));
            }
        }

        // Phase matrix: row l is phi(gamma_x_l, gamma_y_l)^T
        arma::cx_mat phases(n_paths, m);
        for (int l = 0; l < n_paths; ++l) {
            double gx = 0.0, gy = 0.0;
            direction_cosines(u.eaod_deg[l], u.aaod_deg[l], gx, gy);
            phases.row(l) = phase_response(gx, gy, config.geometry).st();
        }

        const arma::cx_mat rows = taps * phases; // C x M, row i-1 = h_k[i]^T
        for (int i = 0; i < c; ++i)
            out.per_subcarrier[static_cast<std::size_t>(i)].row(k) = rows.row(i);
    }
    return out;
}

namespace {

constexpr char kDumpMagic[8] = {'M', 'M', 'O', 'C', 'H', 'A', 'N', '1'};

void write_u64(std::ofstream& out, std::uint64_t v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in)
{
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

} // namespace

void dump_channel(const std::vector<arma::cx_mat>& per_subcarrier, const std::string& path)
{
    if (per_subcarrier.empty())
        throw std::invalid_argument("channel dump requires at least one subcarrier");
    const arma::uword k = per_subcarrier.front().n_rows;
    const arma::uword m = per_subcarrier.front().n_cols;
    for (const auto& mat : per_subcarrier) {
        if (mat.n_rows != k || mat.n_cols != m)
            throw std::invalid_argument("channel dump requires uniformly sized matrices");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot open channel dump for writing: " + path);
    out.write(kDumpMagic, sizeof(kDumpMagic));
    write_u64(out, per_subcarrier.size());
    write_u64(out, k);
    write_u64(out, m);
    for (const auto& mat : per_subcarrier) {
        for (arma::uword row = 0; row < k; ++row) {
            for (arma::uword col = 0; col < m; ++col) {
                const std::complex<double> z = mat(row, col);
                const double re = z.real();
                const double im = z.imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof(re));
                out.write(reinterpret_cast<const char*>(&im), sizeof(im));
            }
        }
    }
    if (!out)
        throw std::runtime_error("short write on channel dump: " + path);
}

std::vector<arma::cx_mat> load_channel_dump(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open channel dump: " + path);

    char magic[8] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kDumpMagic, sizeof(kDumpMagic)) != 0)
        throw std::invalid_argument("not a channel dump file: " + path);

    const std::uint64_t c = read_u64(in);
    const std::uint64_t k = read_u64(in);
    const std::uint64_t m = read_u64(in);
    if (!in || c == 0 || k == 0 || m == 0)
        throw std::invalid_argument("corrupt channel dump header: " + path);

    std::vector<arma::cx_mat> tensor(c, arma::cx_mat(k, m));
    for (std::uint64_t i = 0; i < c; ++i) {
        for (std::uint64_t row = 0; row < k; ++row) {
            for (std::uint64_t col = 0; col < m; ++col) {
                double re = 0.0, im = 0.0;
                in.read(reinterpret_cast<char*>(&re), sizeof(re));
                in.read(reinterpret_cast<char*>(&im), sizeof(im));
                tensor[i](row, col) = {re, im};
            }
        }
    }
    if (!in)
        throw std::invalid_argument("truncated channel dump: " + path);
    return tensor;
}

} // namespace mmo
