#pragma once

#include <array>

#include "odospec/spectral.hpp"
#include "odospec/toml_lite.hpp"
#include "odospec/torsion.hpp"

namespace odospec {

/// Weierstrass parameters of a family without building the operators.
std::pair<Scalar, Scalar> weierstrass_parameters(const FamilyParams& params);

struct JobConfig {
    enum class Kind { Verify, Curve, Support, Gcd, Classify, Torsion, Example };
    Kind kind = Kind::Classify;
    std::string family_tag;
    std::optional<FamilyParams> family;
    std::optional<Rat> kappa;                       ///< dixmier / fourier-dixmier
    std::optional<std::array<Rat, 4>> wallenberg;   ///< g2, g3, x0, y0
    std::optional<std::pair<Scalar, Scalar>> point; ///< gcd jobs: (lambda, mu)
    std::optional<std::pair<Scalar, Scalar>> curve_params;  ///< explicit curve jobs
    std::optional<std::pair<std::string, std::string>> operator_exprs;  ///< raw gcd jobs
    std::map<std::string, Laurent> bound_series;
    std::optional<MatPair> torsion_pair;
    std::string example_name;
    Settings settings;
};

const char* job_kind_name(JobConfig::Kind k);

struct Report {
    std::string json;     ///< full machine-readable report
    std::string summary;  ///< human-readable lines for standard output
};

/// Parse one job, or a [[job]] batch, from TOML text.  The subcommand fixes
/// the kind; per-job settings override the provided defaults.
std::vector<JobConfig> parse_jobs(const std::string& toml_text, JobConfig::Kind kind,
                                  const Settings& defaults);

/// Parse a torsion matrix pair from its JSON form {"n": .., "U": [[..]], "V": [[..]]}.
MatPair parse_matrix_pair_json(const std::string& json_text);

/// Bundled examples with pinned parameters: "dixmier", "fourier-dixmier",
/// "wallenberg", "funny", "interesting-family".
JobConfig example_config(const std::string& name, const Settings& defaults);

Report run_job(const JobConfig& config);

/// Join a batch of reports into one JSON array document.
std::string join_reports(const std::vector<Report>& reports);

/// Serialized form {top, depth, coeffs} of a pseudo-differential operator
/// (diagnostic output only; not accepted as input anywhere).
std::string psd_to_json(const PsdOp& op);

/// CLI exit code of an error: 2 validation, 3 precision, 4 consistency.
int exit_code_for(const std::exception& e);

const char* tool_version();

}  // namespace odospec
