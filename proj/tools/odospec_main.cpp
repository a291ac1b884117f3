#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "odospec/job.hpp"

namespace {

using namespace odospec;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Write atomically: a failed run must never leave a partial report.
void write_report_file(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ValidationError("cannot write '" + path + "'");
        out << content << "\n";
    }
    std::filesystem::rename(tmp, target);
}

struct CommonOpts {
    long prec = 48;
    long depth = 12;
    long tau = 16;
    std::string json_path;

    Settings settings() const { return Settings{prec, depth, tau}; }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--prec", opts.prec, "working series precision (coefficients)");
    cmd->add_option("--depth", opts.depth, "kept pseudo-differential depth");
    cmd->add_option("--tau-prec", opts.tau, "confident-zero threshold exponent");
    cmd->add_option("--json", opts.json_path, "write the JSON report to this path");
}

int run_config_command(JobConfig::Kind kind, const std::string& config_path, const CommonOpts& opts) {
    std::vector<JobConfig> jobs = parse_jobs(read_file(config_path), kind, opts.settings());
    std::vector<Report> reports;
    reports.reserve(jobs.size());
    for (const auto& job : jobs) {
        reports.push_back(run_job(job));
        std::cout << reports.back().summary;
    }
    if (!opts.json_path.empty())
        write_report_file(opts.json_path, reports.size() == 1 ? reports.front().json : join_reports(reports));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spectral analysis of commuting ordinary differential operators"};
    app.require_subcommand(1);

    CommonOpts verify_opts, curve_opts, support_opts, gcd_opts, classify_opts, torsion_opts, example_opts;
    std::string verify_cfg, curve_cfg, support_cfg, gcd_cfg, classify_cfg, torsion_file, example_name;

    auto* verify = app.add_subcommand("verify", "check commutation, curve relation and rank");
    verify->add_option("config", verify_cfg, "job config (TOML)")->required();
    add_common(verify, verify_opts);

    auto* curve = app.add_subcommand("curve", "spectral-curve data of a family");
    curve->add_option("config", curve_cfg, "job config (TOML)")->required();
    add_common(curve, curve_opts);

    auto* support = app.add_subcommand("support", "support of the torsion sheaf");
    support->add_option("config", support_cfg, "job config (TOML)")->required();
    add_common(support, support_opts);

    auto* gcd = app.add_subcommand("gcd", "operator gcd at a spectral point");
    gcd->add_option("config", gcd_cfg, "job config (TOML)")->required();
    add_common(gcd, gcd_opts);

    auto* classify = app.add_subcommand("classify", "isomorphism class of the spectral sheaf");
    classify->add_option("config", classify_cfg, "job config (TOML)")->required();
    add_common(classify, classify_opts);

    auto* torsion = app.add_subcommand("torsion", "torsion-module operations");
    auto* torsion_classify = torsion->add_subcommand("classify", "normal form of a matrix pair");
    torsion_classify->add_option("pair", torsion_file, "matrix pair (JSON)")->required();
    add_common(torsion_classify, torsion_opts);
    torsion->require_subcommand(1);

    auto* example = app.add_subcommand("example", "run a bundled example");
    example->add_option("name", example_name,
                        "dixmier | fourier-dixmier | wallenberg | funny | interesting-family")
        ->required();
    add_common(example, example_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_config_command(JobConfig::Kind::Verify, verify_cfg, verify_opts);
        if (curve->parsed()) return run_config_command(JobConfig::Kind::Curve, curve_cfg, curve_opts);
        if (support->parsed()) return run_config_command(JobConfig::Kind::Support, support_cfg, support_opts);
        if (gcd->parsed()) return run_config_command(JobConfig::Kind::Gcd, gcd_cfg, gcd_opts);
        if (classify->parsed())
            return run_config_command(JobConfig::Kind::Classify, classify_cfg, classify_opts);
        if (torsion->parsed()) {
            JobConfig job;
            job.kind = JobConfig::Kind::Torsion;
            job.settings = torsion_opts.settings();
            job.torsion_pair = parse_matrix_pair_json(read_file(torsion_file));
            Report report = run_job(job);
            std::cout << report.summary;
            if (!torsion_opts.json_path.empty()) write_report_file(torsion_opts.json_path, report.json);
            return 0;
        }
        if (example->parsed()) {
            JobConfig job = example_config(example_name, example_opts.settings());
            Report report = run_job(job);
            std::cout << report.summary;
            if (!example_opts.json_path.empty()) write_report_file(example_opts.json_path, report.json);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return odospec::exit_code_for(e);
    }
    return 0;
}
