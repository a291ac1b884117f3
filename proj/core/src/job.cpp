#include "odospec/job.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "odospec/expr.hpp"

namespace odospec {

using ordered_json = nlohmann::ordered_json;

namespace {

Laurent z_poly() { return Laurent::poly({Scalar(0), Scalar(1)}); }

ordered_json scalar_json(const Scalar& s) { return s.str(); }

ordered_json series_json(const Laurent& a) {
    ordered_json j;
    j["val"] = a.is_zero_known() ? a.prec() : a.val();
    if (a.is_exact())
        j["prec"] = "inf";
    else
        j["prec"] = a.prec();
    ordered_json coeffs = ordered_json::array();
    if (!a.is_zero_known()) {
        long hi = a.is_exact() ? a.val() + static_cast<long>(a.terms()) : a.prec();
        for (long e = a.val(); e < hi; ++e) coeffs.push_back(a.coeff(e).str());
    }
    j["coeffs"] = std::move(coeffs);
    return j;
}

ordered_json op_json(const DiffOp& op) {
    ordered_json j;
    j["order"] = op.order();
    ordered_json coeffs = ordered_json::array();
    for (long i = 0; i <= op.order(); ++i) coeffs.push_back(series_json(op.coeff(static_cast<size_t>(i))));
    j["coeffs"] = std::move(coeffs);
    return j;
}

ordered_json curve_json(const CurveInfo& c) {
    ordered_json j;
    j["g2"] = scalar_json(c.g2);
    j["g3"] = scalar_json(c.g3);
    j["delta"] = scalar_json(c.delta);
    j["kind"] = curve_kind_name(c.kind);
    if (c.singular_point)
        j["singular_point"] = {scalar_json(c.singular_point->first), scalar_json(c.singular_point->second)};
    else
        j["singular_point"] = nullptr;
    return j;
}

ordered_json support_json(const std::vector<SupportPoint>& support) {
    ordered_json arr = ordered_json::array();
    for (const auto& q : support) {
        ordered_json j;
        j["lambda"] = scalar_json(q.lambda);
        j["mu"] = scalar_json(q.mu);
        j["singular"] = q.is_singular;
        j["multiplicity"] = q.multiplicity;
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json prec_json(long prec) {
    if (prec == Laurent::EXACT) return "exact";
    return prec;
}

ordered_json certificates_json(const PairReport& r) {
    ordered_json j;
    j["commutator_zero"] = r.commutator.zero;
    j["commutator_prec"] = prec_json(r.commutator.prec);
    j["relation_zero"] = r.relation.zero;
    j["relation_prec"] = prec_json(r.relation.prec);
    j["rank"] = r.computed_rank;
    j["consistency"] = r.ok() ? "ok" : "failed";
    return j;
}

ordered_json class_json(const SheafClass& cls) {
    ordered_json j;
    j["tag"] = sheaf_tag_name(cls.tag);
    ordered_json pts = ordered_json::array();
    for (const auto& p : cls.points) pts.push_back({scalar_json(p.x), scalar_json(p.y)});
    j["points"] = std::move(pts);
    j["at_infinity"] = cls.point_at_infinity;
    if (cls.rank3_cube) j["cube"] = rat_to_string(*cls.rank3_cube);
    return j;
}

ordered_json descriptor_json(const TorsionDescriptor& d) {
    ordered_json j;
    // ideal ((x + shift)^2, y - slope (x + shift)); pencil (1 : slope)
    j["x_shift"] = rat_to_string(d.shift);
    j["y_slope"] = rat_to_string(d.slope);
    j["pencil"] = {rat_to_string(Rat(1)), rat_to_string(d.slope)};
    return j;
}

Rat toml_rat(const TomlValue& v) {
    if (v.kind == TomlValue::Kind::Integer) return Rat(v.integer);
    if (v.kind == TomlValue::Kind::String) return parse_rat(v.str);
    throw ValidationError("expected a rational value");
}

Rat required_rat(const TomlTable& t, const std::string& key) { return toml_rat(t.at(key)); }

Rat rat_or(const TomlTable& t, const std::string& key, const Rat& fallback) {
    return t.has(key) ? toml_rat(t.at(key)) : fallback;
}

/// Series from a coefficient array.  `first_exponent` is the exponent of
/// the first entry (1 for the family parameter f, 0 for bound series).
Laurent series_from_array(const TomlValue& v, long first_exponent, const Scalar& constant_term) {
    if (v.kind != TomlValue::Kind::Array) throw ValidationError("expected a coefficient array");
    std::vector<Scalar> coeffs;
    for (long i = 0; i < first_exponent; ++i) coeffs.emplace_back(0);
    if (first_exponent > 0) coeffs[0] = constant_term;
    for (const auto& item : v.items) coeffs.push_back(Scalar(toml_rat(item)));
    return Laurent::poly(std::move(coeffs));
}

FamilyParams parse_family(const TomlTable& t, const std::string& tag) {
    if (tag == "self-adjoint") {
        Laurent f = series_from_array(t.at("f"), 1, Scalar(rat_or(t, "f0", Rat(0))));
        return SelfAdjointParams{required_rat(t, "K2"), required_rat(t, "K3"), f};
    }
    if (tag == "generic") {
        Laurent f = series_from_array(t.at("f"), 1, Scalar(0));
        return GenericParams{required_rat(t, "K10"), required_rat(t, "K11"), required_rat(t, "K12"),
                             required_rat(t, "K14"), f};
    }
    if (tag == "not-locally-free") {
        Laurent f = series_from_array(t.at("f"), 1, Scalar(0));
        return NotLocallyFreeParams{required_rat(t, "rho"), f};
    }
    if (tag == "degenerate-self-adjoint") {
        Laurent c2 = series_from_array(t.at("c2"), 0, Scalar(0));
        return DegenerateSelfAdjointParams{c2, required_rat(t, "gamma")};
    }
    throw ValidationError("unknown family '" + tag + "'");
}

JobConfig parse_one_job(const TomlTable& t, JobConfig::Kind kind, const Settings& defaults) {
    JobConfig job;
    job.kind = kind;
    job.settings.prec = t.get_integer_or("prec", defaults.prec);
    job.settings.depth = t.get_integer_or("depth", defaults.depth);
    job.settings.tau = t.get_integer_or("tau_prec", defaults.tau);

    auto series_table = t.tables.find("series");
    if (series_table != t.tables.end())
        for (const auto& [name, value] : series_table->second.values)
            job.bound_series[name] = series_from_array(value, 0, Scalar(0));

    if (t.has("A") || t.has("B")) {
        job.operator_exprs = {t.get_string("A"), t.get_string("B")};
        return job;
    }
    if (kind == JobConfig::Kind::Curve && t.has("g2") && t.has("g3")) {
        job.curve_params = {{Scalar(required_rat(t, "g2")), Scalar(required_rat(t, "g3"))}};
        return job;
    }

    job.family_tag = t.get_string("family");
    if (job.family_tag == "dixmier" || job.family_tag == "fourier-dixmier") {
        job.kappa = required_rat(t, "kappa");
    } else if (job.family_tag == "wallenberg") {
        job.wallenberg = {{required_rat(t, "g2"), required_rat(t, "g3"), required_rat(t, "x0"),
                           required_rat(t, "y0")}};
    } else {
        job.family = parse_family(t, job.family_tag);
    }
    if (t.has("lambda") || t.has("mu"))
        job.point = {{Scalar::parse(t.get_string("lambda")), Scalar::parse(t.get_string("mu"))}};
    return job;
}

OperatorPair build_job_pair(const JobConfig& job) {
    if (job.family) return build_pair(*job.family, job.settings);
    if (job.family_tag == "dixmier") return build_dixmier(*job.kappa);
    if (job.family_tag == "fourier-dixmier") return build_fourier_dixmier(*job.kappa);
    if (job.family_tag == "wallenberg") {
        const auto& w = *job.wallenberg;
        return build_wallenberg(w[0], w[1], w[2], w[3], job.settings);
    }
    throw ValidationError("job does not define an operator pair");
}

ordered_json job_echo(const JobConfig& job) {
    ordered_json j;
    j["kind"] = job_kind_name(job.kind);
    if (!job.family_tag.empty()) j["family"] = job.family_tag;
    if (!job.example_name.empty()) j["example"] = job.example_name;
    if (job.kappa) j["kappa"] = rat_to_string(*job.kappa);
    if (job.point) j["point"] = {job.point->first.str(), job.point->second.str()};
    j["prec"] = job.settings.prec;
    j["depth"] = job.settings.depth;
    j["tau_prec"] = job.settings.tau;
    return j;
}

void classification_to_json(const Classification& result, ordered_json& j, std::ostringstream& summary) {
    j["curve"] = curve_json(result.curve);
    j["support"] = support_json(result.support);
    if (!result.checks.empty()) {
        j["gcd"] = op_json(result.gcd.R);
        j["gcd"]["c1_pole"] = result.gcd.c1_pole;
        const auto& first = result.checks.front();
        if (first.exponents) {
            ordered_json exps = ordered_json::array();
            for (const auto& e : first.exponents->exponents) exps.push_back(e.str());
            j["exponents"] = std::move(exps);
            j["nu"] = first.exponents->nu ? ordered_json(*first.exponents->nu) : ordered_json(nullptr);
        } else {
            j["exponents"] = nullptr;
            j["nu"] = nullptr;
        }
    } else {
        j["gcd"] = nullptr;
        j["exponents"] = nullptr;
        j["nu"] = nullptr;
    }
    j["class"] = class_json(result.cls);
    j["torsion_descriptor"] =
        result.cls.torsion_descriptor ? descriptor_json(*result.cls.torsion_descriptor) : ordered_json(nullptr);
    j["certificates"] = certificates_json(result.certificates);
    j["branch_log"] = result.branch_log;

    summary << "curve: " << curve_kind_name(result.curve.kind) << " (g2 = " << result.curve.g2
            << ", g3 = " << result.curve.g3 << ")\n";
    for (const auto& q : result.support)
        summary << "support: (" << q.lambda << ", " << q.mu << ")"
                << (q.is_singular ? " [singular]" : "") << "\n";
    summary << "class: " << sheaf_tag_name(result.cls.tag);
    for (const auto& p : result.cls.points) summary << " q = (" << p.x << ", " << p.y << ")";
    if (result.cls.point_at_infinity) summary << " at the infinite point";
    summary << "\n";
}

}  // namespace

const char* job_kind_name(JobConfig::Kind k) {
    switch (k) {
        case JobConfig::Kind::Verify: return "verify";
        case JobConfig::Kind::Curve: return "curve";
        case JobConfig::Kind::Support: return "support";
        case JobConfig::Kind::Gcd: return "gcd";
        case JobConfig::Kind::Classify: return "classify";
        case JobConfig::Kind::Torsion: return "torsion";
        case JobConfig::Kind::Example: return "example";
    }
    return "?";
}

std::pair<Scalar, Scalar> weierstrass_parameters(const FamilyParams& params) {
    if (const auto* sa = std::get_if<SelfAdjointParams>(&params))
        return {Scalar(-2 * sa->K3), Scalar(sa->K2 / 2)};
    if (const auto* dg = std::get_if<DegenerateSelfAdjointParams>(&params))
        return {Scalar(3 * dg->gamma * dg->gamma), Scalar(dg->gamma * dg->gamma * dg->gamma)};
    Rat K10, K11, K12, K14;
    if (const auto* g = std::get_if<GenericParams>(&params)) {
        K10 = g->K10;
        K11 = g->K11;
        K12 = g->K12;
        K14 = g->K14;
    } else {
        const auto& n = std::get<NotLocallyFreeParams>(params);
        K10 = 0;
        K11 = n.rho;
        K12 = -n.rho * n.rho / 6;
        K14 = 0;
    }
    Rat g2 = 3 * K12 * K12 + K10 * K11 - K14;
    Rat g3 = (2 * K10 * K11 * K12 + 4 * K12 * K12 * K12 + K14 * (K11 * K11 + 4 * K12) - K10 * K10) / 4;
    return {Scalar(g2), Scalar(g3)};
}

std::vector<JobConfig> parse_jobs(const std::string& toml_text, JobConfig::Kind kind,
                                  const Settings& defaults) {
    TomlTable root = parse_toml(toml_text);
    std::vector<JobConfig> jobs;
    auto batch = root.table_arrays.find("job");
    if (batch != root.table_arrays.end()) {
        Settings file_defaults = defaults;
        file_defaults.prec = root.get_integer_or("prec", defaults.prec);
        file_defaults.depth = root.get_integer_or("depth", defaults.depth);
        file_defaults.tau = root.get_integer_or("tau_prec", defaults.tau);
        for (const auto& t : batch->second) jobs.push_back(parse_one_job(t, kind, file_defaults));
        if (jobs.empty()) throw ValidationError("empty [[job]] batch");
        return jobs;
    }
    jobs.push_back(parse_one_job(root, kind, defaults));
    return jobs;
}

MatPair parse_matrix_pair_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("matrix pair JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("U") || !j.contains("V"))
        throw ValidationError("matrix pair JSON needs fields n, U, V");
    long n = j["n"].get<long>();
    auto read_matrix = [n](const nlohmann::json& m) {
        Matrix out;
        for (const auto& row : m) {
            std::vector<Scalar> r;
            for (const auto& x : row)
                r.push_back(x.is_number_integer() ? Scalar(Rat(x.get<long>()))
                                                  : Scalar::parse(x.get<std::string>()));
            out.push_back(std::move(r));
        }
        if (static_cast<long>(out.size()) != n) throw ValidationError("matrix row count differs from n");
        return out;
    };
    return MatPair::from(n, read_matrix(j["U"]), read_matrix(j["V"]));
}

JobConfig example_config(const std::string& name, const Settings& defaults) {
    JobConfig job;
    job.kind = JobConfig::Kind::Example;
    job.example_name = name;
    job.settings = defaults;
    if (name == "dixmier") {
        job.family_tag = "dixmier";
        job.kappa = Rat(0);
    } else if (name == "fourier-dixmier") {
        job.family_tag = "fourier-dixmier";
        job.kappa = Rat(0);
    } else if (name == "wallenberg") {
        job.family_tag = "wallenberg";
        job.wallenberg = {{Rat(0), Rat(0), Rat(1), Rat(2)}};
    } else if (name == "funny") {
        job.family_tag = "not-locally-free";
        job.family = NotLocallyFreeParams{Rat(0), z_poly()};
    } else if (name == "interesting-family") {
        job.family_tag = "generic";
        job.family = GenericParams{Rat(0), Rat(1), Rat(1), Rat(0), z_poly()};
    } else {
        throw ValidationError("unknown example '" + name +
                              "' (available: dixmier, fourier-dixmier, wallenberg, funny, "
                              "interesting-family)");
    }
    return job;
}

Report run_job(const JobConfig& job) {
    auto t0 = std::chrono::steady_clock::now();
    ordered_json j;
    j["version"] = tool_version();
    j["job"] = job_echo(job);
    std::ostringstream summary;
    summary << job_kind_name(job.kind);
    if (!job.example_name.empty()) summary << " " << job.example_name;
    summary << ":\n";

    JobConfig::Kind kind = job.kind;
    if (kind == JobConfig::Kind::Example) {
        // wallenberg has rank one: its report is the verification;
        // everything else classifies.
        kind = (job.family_tag == "wallenberg") ? JobConfig::Kind::Verify : JobConfig::Kind::Classify;
    }

    switch (kind) {
        case JobConfig::Kind::Verify: {
            OperatorPair pair = build_job_pair(job);
            PairReport report = verify_pair(pair, job.settings);
            j["L"] = op_json(pair.L);
            j["M"] = op_json(pair.M);
            j["certificates"] = certificates_json(report);
            summary << "commutator " << (report.commutator.zero ? "vanishes" : "DOES NOT vanish")
                    << ", relation " << (report.relation.zero ? "holds" : "FAILS") << ", rank "
                    << report.computed_rank << "\n";
            break;
        }
        case JobConfig::Kind::Curve: {
            CurveInfo info;
            if (job.curve_params) {
                info = curve_info(job.curve_params->first, job.curve_params->second);
            } else if (job.family) {
                auto [g2, g3] = weierstrass_parameters(*job.family);
                info = curve_info(g2, g3);
            } else {
                OperatorPair pair = build_job_pair(job);
                info = curve_info(pair.g2, pair.g3);
            }
            j["curve"] = curve_json(info);
            summary << "curve is " << curve_kind_name(info.kind) << " (delta = " << info.delta << ")\n";
            break;
        }
        case JobConfig::Kind::Support: {
            if (!job.family) throw ValidationError("support jobs need a rank-two family");
            FieldContext ctx;
            auto support = support_of_T(*job.family, ctx, job.settings);
            auto [g2, g3] = weierstrass_parameters(*job.family);
            j["curve"] = curve_json(curve_info(g2, g3));
            j["support"] = support_json(support);
            for (const auto& q : support)
                summary << "support point (" << q.lambda << ", " << q.mu << ")"
                        << (q.is_singular ? " [singular]" : "") << "\n";
            break;
        }
        case JobConfig::Kind::Gcd: {
            if (job.operator_exprs) {
                DiffOp A = parse_operator(job.operator_exprs->first, job.bound_series);
                DiffOp B = parse_operator(job.operator_exprs->second, job.bound_series);
                DiffOp g = op_gcd(A, B, job.settings);
                j["gcd"] = op_json(g);
                summary << "gcd order " << g.order() << "\n";
                break;
            }
            if (!job.point) throw ValidationError("gcd jobs need a point (lambda, mu) or expressions A, B");
            OperatorPair pair = build_job_pair(job);
            GcdAtPoint g = gcd_at_point(pair, job.point->first, job.point->second, job.settings);
            j["gcd"] = op_json(g.R);
            j["gcd"]["c1_pole"] = g.c1_pole;
            j["gcd"]["e_checked"] = g.e_checked;
            if (g.order == 2) {
                FieldContext ctx;
                ExponentData exps = exponents_nu(g.R, ctx);
                ordered_json earr = ordered_json::array();
                for (const auto& e : exps.exponents) earr.push_back(e.str());
                j["exponents"] = std::move(earr);
                j["nu"] = exps.nu ? ordered_json(*exps.nu) : ordered_json(nullptr);
            }
            summary << "gcd order " << g.order << (g.c1_pole ? " (c1 has a pole)" : "") << "\n";
            break;
        }
        case JobConfig::Kind::Classify: {
            Classification result;
            if (job.family_tag == "fourier-dixmier") {
                result = classify_fourier_dixmier(*job.kappa, job.settings);
            } else if (job.family_tag == "dixmier") {
                result = classify_sheaf(*build_dixmier(*job.kappa).provenance, job.settings);
            } else if (job.family) {
                result = classify_sheaf(*job.family, job.settings);
            } else {
                throw ValidationError("classify jobs need a family");
            }
            j["L"] = op_json(result.pair.L);
            j["M"] = op_json(result.pair.M);
            classification_to_json(result, j, summary);
            break;
        }
        case JobConfig::Kind::Torsion: {
            if (!job.torsion_pair) throw ValidationError("torsion jobs need a matrix pair");
            NormalForm nf = classify_pair(*job.torsion_pair);
            j["normal_form"] = nf.str();
            NormalForm dual_nf = classify_pair(matlis_dual(*job.torsion_pair));
            j["matlis_dual"] = dual_nf.str();
            if (job.torsion_pair->n == 3 && nf.tag != NormalForm::Tag::Decomposable) {
                Rank3Sheaf sheaf = sheaf_of_torsion3(nf);
                j["sheaf"] = sheaf.description;
            }
            summary << "normal form: " << nf.str() << "\n";
            break;
        }
        case JobConfig::Kind::Example:
            throw ValidationError("unreachable example dispatch");
    }

    auto t1 = std::chrono::steady_clock::now();
    j["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    Report report;
    report.json = j.dump(2);
    report.summary = summary.str();
    return report;
}

std::string join_reports(const std::vector<Report>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(ordered_json::parse(r.json));
    return arr.dump(2);
}

std::string psd_to_json(const PsdOp& op) {
    ordered_json j;
    j["top"] = op.top();
    j["depth"] = op.depth();
    ordered_json coeffs = ordered_json::array();
    for (long k = 0; k <= op.depth(); ++k) coeffs.push_back(series_json(op.coeff_at_depth(static_cast<size_t>(k))));
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConsistencyError*>(&e) != nullptr) return 4;
    if (dynamic_cast<const InconclusivePrecision*>(&e) != nullptr) return 3;
    return 2;
}

const char* tool_version() { return "0.1.0"; }

}  // namespace odospec
