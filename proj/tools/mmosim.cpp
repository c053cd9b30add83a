// SPDX-License-Identifier: Apache-2.0
//
// mmosim — Monte-Carlo link simulator for the hybrid-precoded multi-user
// massive-MIMO-OFDM downlink. `run` evaluates the configured scenario at its
// configured transmit power; `sweep` varies transmit power, subcarrier
// count, or user count; `init-config` writes the default scenario file.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmo/harness.hpp"
#include "mmo/precoding.hpp"
#include "mmo/scenario.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty())
            items.push_back(item);
    }
    return items;
}

mmo::AllocMethod parse_method(const std::string& name)
{
    if (name == "ga")
        return mmo::AllocMethod::GA;
    if (name == "eq")
        return mmo::AllocMethod::EQ;
    if (name == "pso")
        return mmo::AllocMethod::PSO;
    throw std::invalid_argument("unknown method '" + name + "' (expected ga, eq, or pso)");
}

mmo::Architecture parse_arch(const std::string& name)
{
    if (name == "hp")
        return mmo::Architecture::HP;
    if (name == "fdp")
        return mmo::Architecture::FDP;
    throw std::invalid_argument("unknown architecture '" + name + "' (expected hp or fdp)");
}

mmo::SweepAxis parse_axis(const std::string& name)
{
    if (name == "pt" || name == "p_t_dbm")
        return mmo::SweepAxis::PtDbm;
    if (name == "c" || name == "subcarriers")
        return mmo::SweepAxis::Subcarriers;
    if (name == "k" || name == "users")
        return mmo::SweepAxis::Users;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected pt, c, or k)");
}

struct CommonOpts {
    std::string config_path;
    std::string methods = "ga,eq";
    std::string archs = "hp";
    int realizations = 1000;
    std::uint64_t seed = 1;
    std::string out = "report.csv";
    std::string format = "csv";
    std::string trace_dir;
    std::string dump_beams;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config_path,
                    "Scenario JSON file (defaults to the built-in scenario)");
    cmd->add_option("--method", opts.methods, "Comma list of allocators: ga,eq,pso")
        ->capture_default_str();
    cmd->add_option("--arch", opts.archs, "Comma list of architectures: hp,fdp")
        ->capture_default_str();
    cmd->add_option("--realizations", opts.realizations, "Network realizations per sweep point")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Master RNG seed")->capture_default_str();
    cmd->add_option("--out", opts.out, "Report output path")->capture_default_str();
    cmd->add_option("--format", opts.format, "Report format: csv or json")
        ->capture_default_str();
    cmd->add_option("--trace-fitness", opts.trace_dir,
                    "Directory for per-generation GA fitness trace CSVs");
    cmd->add_option("--dump-beams", opts.dump_beams,
                    "Write the selected RF beam pairs to this JSON file");
}

int run_spec(const CommonOpts& opts, mmo::SweepAxis axis, const std::vector<double>& values)
{
    mmo::ExperimentSpec spec;
    spec.scenario =
        opts.config_path.empty() ? mmo::ScenarioConfig{} : mmo::load_scenario(opts.config_path);
    spec.scenario.validate();

    for (const std::string& m : split_list(opts.methods)) {
        for (const std::string& a : split_list(opts.archs))
            spec.methods.push_back({parse_method(m), parse_arch(a)});
    }
    if (spec.methods.empty())
        throw std::invalid_argument("no methods selected");

    spec.sweep_axis = axis;
    spec.sweep_values = values.empty() ? std::vector<double>{spec.scenario.total_power_dbm}
                                       : values;
    spec.realizations = opts.realizations;
    spec.master_seed = opts.seed;
    spec.trace_dir = opts.trace_dir;

    if (!opts.dump_beams.empty()) {
        const mmo::AngleGrid grid = mmo::quantized_grid(spec.scenario.geometry);
        const mmo::RfBeamformer f =
            mmo::build_rf_beamformer(spec.scenario.groups, grid, spec.scenario.geometry,
                                     spec.scenario.rf_chains_per_group);
        std::ofstream beams(opts.dump_beams);
        if (!beams)
            throw std::runtime_error("cannot write beam dump: " + opts.dump_beams);
        beams << mmo::beam_pairs_json(f);
    }

    mmo::ReportFormat fmt;
    if (opts.format == "csv")
        fmt = mmo::ReportFormat::Csv;
    else if (opts.format == "json")
        fmt = mmo::ReportFormat::Json;
    else
        throw std::invalid_argument("unknown format '" + opts.format + "' (expected csv or json)");

    const mmo::AggregateReport report = mmo::run_experiment(spec);
    mmo::emit_report(report, fmt, opts.out);
    std::cout << "wrote " << report.rows.size() << " report rows to " << opts.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid-precoded massive-MIMO-OFDM downlink simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Evaluate the scenario at its configured transmit power");
    add_common_options(run_cmd, run_opts);

    CommonOpts sweep_opts;
    std::string axis_name;
    std::string values_list;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep one axis over a list of values");
    add_common_options(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--axis", axis_name, "Sweep axis: pt (dBm), c (subcarriers), k (users)")
        ->required();
    sweep_cmd->add_option("--values", values_list, "Comma list of sweep values")->required();

    std::string init_path = "scenario.json";
    CLI::App* init_cmd =
        app.add_subcommand("init-config", "Write the default scenario configuration");
    init_cmd->add_option("path", init_path, "Output path")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return run_spec(run_opts, mmo::SweepAxis::PtDbm, {});
        if (sweep_cmd->parsed()) {
            std::vector<double> values;
            for (const std::string& v : split_list(values_list))
                values.push_back(std::stod(v));
            if (values.empty())
                throw std::invalid_argument("--values list is empty");
            return run_spec(sweep_opts, parse_axis(axis_name), values);
        }
        if (init_cmd->parsed()) {
            mmo::save_scenario(mmo::ScenarioConfig{}, init_path);
            std::cout << "wrote default scenario to " << init_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
