// SPDX-License-Identifier: Apache-2.0

#include "mmo/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mmo/channel.hpp"
#include "mmo/optimizer.hpp"
#include "mmo/precoding.hpp"
#include "mmo/rng.hpp"

namespace mmo {

namespace {

// Fixed tags feeding the seed derivation so that realization draws and the
// per-(method, arch, realization, subcarrier) allocator streams never
// overlap. Realization seeds do not depend on the sweep point, which pairs
// the channel draws across sweep values.
constexpr std::uint64_t kRealizationTag = 0x7265616c697a6531ULL;
constexpr std::uint64_t kAllocatorTag = 0x616c6c6f63617465ULL;

int method_index(AllocMethod m)
{
    switch (m) {
    case AllocMethod::GA: return 0;
    case AllocMethod::EQ: return 1;
    case AllocMethod::PSO: return 2;
    }
    return 3;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_value_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double sample_std(const std::vector<double>& xs, double mean)
{
    if (xs.size() < 2)
        return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        sq[i] = (xs[i] - mean) * (xs[i] - mean);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(xs.size() - 1));
}

} // namespace

const char* architecture_name(Architecture arch)
{
    return arch == Architecture::HP ? "hp" : "fdp";
}

const char* sweep_axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::PtDbm: return "p_t_dbm";
    case SweepAxis::Subcarriers: return "subcarriers";
    case SweepAxis::Users: return "users";
    }
    return "?";
}

std::uint64_t realization_seed(std::uint64_t master_seed, int realization)
{
    return derive_seed(master_seed, kRealizationTag, static_cast<std::uint64_t>(realization));
}

std::uint64_t allocator_seed(std::uint64_t master_seed, int realization, int subcarrier,
                             AllocMethod method, Architecture arch)
{
    const std::uint64_t stream = (static_cast<std::uint64_t>(subcarrier) << 16) |
                                 (static_cast<std::uint64_t>(method_index(method)) << 8) |
                                 static_cast<std::uint64_t>(arch == Architecture::HP ? 0 : 1);
    return derive_seed(master_seed, kAllocatorTag, static_cast<std::uint64_t>(realization),
                       stream);
}

double pairwise_sum(const std::vector<double>& values)
{
    // Recursive halving with a small sequential base case; fixed order makes
    // the result independent of how work was scheduled.
    struct Impl {
        static double sum(const double* data, std::size_t n)
        {
            if (n <= 8) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += data[i];
                return s;
            }
            const std::size_t half = n / 2;
            return sum(data, half) + sum(data + half, n - half);
        }
    };
    return Impl::sum(values.data(), values.size());
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value)
{
    ScenarioConfig cfg = base;
    switch (axis) {
    case SweepAxis::PtDbm:
        cfg.total_power_dbm = value;
        break;
    case SweepAxis::Subcarriers: {
        if (value < 1.0 || value != std::floor(value) || value > 1e9)
            throw std::invalid_argument("subcarrier sweep values must be positive integers");
        cfg.subcarriers = static_cast<int>(value);
        break;
    }
    case SweepAxis::Users: {
        if (value < 1.0 || value != std::floor(value) || value > 1e9)
            throw std::invalid_argument("user sweep values must be positive integers");
        const int total = static_cast<int>(value);
        const int n_groups = static_cast<int>(cfg.groups.size());
        if (n_groups == 0 || total % n_groups != 0)
            throw std::invalid_argument(
                "user sweep values must divide evenly across the groups");
        for (auto& g : cfg.groups)
            g.users = total / n_groups;
        break;
    }
    }
    return cfg;
}

AggregateReport run_experiment(const ExperimentSpec& spec)
{
    if (spec.realizations < 1)
        throw std::invalid_argument("realizations must be at least 1");
    if (spec.sweep_values.empty())
        throw std::invalid_argument("at least one sweep value is required");
    spec.scenario.validate();

    AggregateReport report;

    for (double value : spec.sweep_values) {
        const ScenarioConfig cfg = apply_axis(spec.scenario, spec.sweep_axis, value);
        cfg.validate();

        const int c = cfg.subcarriers;
        const int k_users = cfg.total_users();
        const int m = cfg.geometry.antennas();
        const double p_t = cfg.total_power_watts();
        const double sigma2 = cfg.noise_variance_watts();
        const double alpha = sigma2 / p_t;

        bool need_hp = false, need_fdp = false, need_ga_trace = false;
        for (const auto& ms : spec.methods) {
            (ms.arch == Architecture::HP ? need_hp : need_fdp) = true;
            if (ms.method == AllocMethod::GA && !spec.trace_dir.empty())
                need_ga_trace = true;
        }

        RfBeamformer f;
        PowerModel hp_model{spec.p_rf_watts, spec.p_ps_watts, 0, 0};
        if (need_hp) {
            const AngleGrid grid = quantized_grid(cfg.geometry);
            f = build_rf_beamformer(cfg.groups, grid, cfg.geometry, cfg.rf_chains_per_group);
            hp_model.n_rf = f.n_rf();
            hp_model.n_ps = f.n_rf() * m;
        }
        const PowerModel fdp_model{spec.p_rf_watts, spec.p_ps_watts, m, 0};

        const std::size_t n_real = static_cast<std::size_t>(spec.realizations);
        std::vector<std::vector<double>> method_rates(spec.methods.size(),
                                                      std::vector<double>(n_real, 0.0));
        std::vector<double> eq_hp_rates(need_hp ? n_real : 0, 0.0);
        std::vector<double> eq_fdp_rates(need_fdp ? n_real : 0, 0.0);
        std::ostringstream trace;

        for (int r = 0; r < spec.realizations; ++r) {
            try {
                auto realization_rng = make_rng(realization_seed(spec.master_seed, r));
                const std::vector<UserPathSet> users = draw_realization(cfg, realization_rng);
                const ChannelRealization ch = assemble_channel(users, cfg);

                std::vector<arma::cx_mat> eff_hp, b_hp, b_fdp;
                if (need_hp) {
                    eff_hp.resize(static_cast<std::size_t>(c));
                    b_hp.resize(static_cast<std::size_t>(c));
                    for (int i = 0; i < c; ++i) {
                        eff_hp[i] = effective_channel(ch.per_subcarrier[i], f);
                        b_hp[i] = rzf_precoder(eff_hp[i], alpha, k_users);
                    }
                }
                if (need_fdp) {
                    b_fdp.resize(static_cast<std::size_t>(c));
                    for (int i = 0; i < c; ++i)
                        b_fdp[i] = fdp_precoder(ch.per_subcarrier[i], alpha, k_users);
                }

                // EQ-RA totals per architecture; also the gain-ratio baseline.
                if (need_hp) {
                    double total = 0.0;
                    for (int i = 0; i < c; ++i) {
                        const auto powers = eq_allocate(b_hp[i], p_t, c, k_users);
                        total += sum_rate_subcarrier(eff_hp[i], b_hp[i], powers, sigma2);
                    }
                    eq_hp_rates[static_cast<std::size_t>(r)] = total;
                }
                if (need_fdp) {
                    double total = 0.0;
                    for (int i = 0; i < c; ++i) {
                        const auto powers = eq_allocate(b_fdp[i], p_t, c, k_users);
                        total += sum_rate_subcarrier(ch.per_subcarrier[i], b_fdp[i], powers,
                                                     sigma2);
                    }
                    eq_fdp_rates[static_cast<std::size_t>(r)] = total;
                }

                for (std::size_t msi = 0; msi < spec.methods.size(); ++msi) {
                    const MethodSpec& ms = spec.methods[msi];
                    const bool hp = ms.arch == Architecture::HP;

                    if (ms.method == AllocMethod::EQ) {
                        method_rates[msi][static_cast<std::size_t>(r)] =
                            hp ? eq_hp_rates[static_cast<std::size_t>(r)]
                               : eq_fdp_rates[static_cast<std::size_t>(r)];
                        continue;
                    }

                    double total = 0.0;
                    for (int i = 0; i < c; ++i) {
                        try {
                            const arma::cx_mat& eff = hp ? eff_hp[i] : ch.per_subcarrier[i];
                            const arma::cx_mat& b = hp ? b_hp[i] : b_fdp[i];
                            auto alloc_rng = make_rng(
                                allocator_seed(spec.master_seed, r, i, ms.method, ms.arch));

                            if (ms.method == AllocMethod::GA) {
                                const GaResult res = ga_allocate(eff, b, sigma2, p_t, c,
                                                                 cfg.ga, alloc_rng);
                                total += sum_rate_subcarrier(eff, b, res.powers_watts, sigma2);
                                if (need_ga_trace) {
                                    for (std::size_t q = 0; q < res.best_fitness_trace.size();
                                         ++q) {
                                        trace << architecture_name(ms.arch) << ',' << r << ','
                                              << (i + 1) << ',' << (q + 1) << ','
                                              << format_double(res.best_fitness_trace[q])
                                              << '\n';
                                    }
                                }
                            } else {
                                const PsoResult res = pso_allocate(eff, b, sigma2, p_t, c,
                                                                   cfg.pso, alloc_rng);
                                total += sum_rate_subcarrier(eff, b, res.powers_watts, sigma2);
                            }
                        } catch (const std::exception& e) {
                            throw std::runtime_error("subcarrier " + std::to_string(i + 1) +
                                                     ": " + e.what());
                        }
                    }
                    method_rates[msi][static_cast<std::size_t>(r)] = total;
                }
            } catch (const std::exception& e) {
                throw std::runtime_error(std::string("sweep ") +
                                         sweep_axis_name(spec.sweep_axis) + "=" +
                                         format_value_short(value) + ", realization " +
                                         std::to_string(r) + ": " + e.what());
            }
        }

        const double eq_hp_mean =
            need_hp ? pairwise_sum(eq_hp_rates) / static_cast<double>(n_real) : 0.0;
        const double eq_fdp_mean =
            need_fdp ? pairwise_sum(eq_fdp_rates) / static_cast<double>(n_real) : 0.0;

        for (std::size_t msi = 0; msi < spec.methods.size(); ++msi) {
            const MethodSpec& ms = spec.methods[msi];
            const bool hp = ms.arch == Architecture::HP;
            const std::vector<double>& rates = method_rates[msi];

            ReportRow row;
            row.sweep_axis = sweep_axis_name(spec.sweep_axis);
            row.sweep_value = value;
            row.method = alloc_method_name(ms.method);
            row.architecture = architecture_name(ms.arch);
            row.mean_rate_bpshz = pairwise_sum(rates) / static_cast<double>(n_real);
            row.mean_rate_per_sc = row.mean_rate_bpshz / static_cast<double>(c);
            row.mean_ee_bpshzw =
                energy_efficiency(row.mean_rate_bpshz, p_t, hp ? hp_model : fdp_model);
            row.gain_ratio_vs_eq = row.mean_rate_bpshz / (hp ? eq_hp_mean : eq_fdp_mean);
            row.std_rate = sample_std(rates, row.mean_rate_bpshz);
            row.n_realizations = spec.realizations;
            report.rows.push_back(row);

            MethodSamples samples;
            samples.sweep_axis = row.sweep_axis;
            samples.sweep_value = value;
            samples.method = row.method;
            samples.architecture = row.architecture;
            samples.rates = rates;
            report.samples.push_back(std::move(samples));
        }

        if (need_ga_trace) {
            const std::string path = spec.trace_dir + "/ga_trace_" +
                                     sweep_axis_name(spec.sweep_axis) + "_" +
                                     format_value_short(value) + ".csv";
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("cannot write GA trace file: " + path);
            out << "architecture,realization,subcarrier,generation,best_fitness\n" << trace.str();
        }
    }

    return report;
}

std::string report_csv(const AggregateReport& report)
{
    std::ostringstream out;
    out << "sweep_axis,sweep_value,method,architecture,mean_rate_bpshz,mean_rate_per_sc,"
           "mean_ee_bpshzw,gain_ratio_vs_eq,std_rate,n_realizations\n";
    for (const auto& row : report.rows) {
        out << row.sweep_axis << ',' << format_double(row.sweep_value) << ',' << row.method
            << ',' << row.architecture << ',' << format_double(row.mean_rate_bpshz) << ','
            << format_double(row.mean_rate_per_sc) << ',' << format_double(row.mean_ee_bpshzw)
            << ',' << format_double(row.gain_ratio_vs_eq) << ',' << format_double(row.std_rate)
            << ',' << row.n_realizations << '\n';
    }
    return out.str();
}

std::string report_json(const AggregateReport& report)
{
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        j["rows"].push_back({{"sweep_axis", row.sweep_axis},
                             {"sweep_value", row.sweep_value},
                             {"method", row.method},
                             {"architecture", row.architecture},
                             {"mean_rate_bpshz", row.mean_rate_bpshz},
                             {"mean_rate_per_sc", row.mean_rate_per_sc},
                             {"mean_ee_bpshzw", row.mean_ee_bpshzw},
                             {"gain_ratio_vs_eq", row.gain_ratio_vs_eq},
                             {"std_rate", row.std_rate},
                             {"n_realizations", row.n_realizations}});
    }
    return j.dump(2) + "\n";
}

AggregateReport report_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw std::invalid_argument("report JSON must contain a rows array");

    AggregateReport report;
    for (const auto& rj : j["rows"]) {
        ReportRow row;
        row.sweep_axis = rj.at("sweep_axis").get<std::string>();
        row.sweep_value = rj.at("sweep_value").get<double>();
        row.method = rj.at("method").get<std::string>();
        row.architecture = rj.at("architecture").get<std::string>();
        row.mean_rate_bpshz = rj.at("mean_rate_bpshz").get<double>();
        row.mean_rate_per_sc = rj.at("mean_rate_per_sc").get<double>();
        row.mean_ee_bpshzw = rj.at("mean_ee_bpshzw").get<double>();
        row.gain_ratio_vs_eq = rj.at("gain_ratio_vs_eq").get<double>();
        row.std_rate = rj.at("std_rate").get<double>();
        row.n_realizations = rj.at("n_realizations").get<int>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

void emit_report(const AggregateReport& report, ReportFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open report for writing: " + path);
    out << (format == ReportFormat::Csv ? report_csv(report) : report_json(report));
    if (!out)
        throw std::runtime_error("short write on report: " + path);
}

} // namespace mmo
