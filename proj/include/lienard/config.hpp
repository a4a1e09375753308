#pragma once

// JSON configuration (field descriptor + run parameters) and JSON views of
// the analysis results. Keys keep insertion order so serialized output is
// stable run to run.

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lienard/averaging.hpp"
#include "lienard/bounds.hpp"
#include "lienard/dynamics.hpp"
#include "lienard/field.hpp"
#include "lienard/hypothesis.hpp"

namespace lienard {

using json = nlohmann::ordered_json;

struct FieldSpec {
    std::string family;          // polynomial | rational | exp | gauss
    std::vector<double> coeffs;  // polynomial
    double x_M = 0, x_m = 0;     // rational
    std::vector<double> p, q;    // rational
    double b = 0;                // exp
    double a = 0;                // gauss
};

inline FieldSpec parse_field_spec(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw std::invalid_argument("field spec: expected an object with \"family\"");
    FieldSpec fs;
    fs.family = j.at("family").get<std::string>();
    if (fs.family == "polynomial") {
        fs.coeffs = j.at("coeffs").get<std::vector<double>>();
    } else if (fs.family == "rational") {
        fs.x_M = j.at("x_M").get<double>();
        fs.x_m = j.at("x_m").get<double>();
        fs.p = j.at("p").get<std::vector<double>>();
        fs.q = j.at("q").get<std::vector<double>>();
    } else if (fs.family == "exp") {
        fs.b = j.at("b").get<double>();
    } else if (fs.family == "gauss") {
        fs.a = j.at("a").get<double>();
    } else {
        throw std::invalid_argument("field spec: unknown family \"" + fs.family + "\"");
    }
    return fs;
}

inline LienardField make_field(const FieldSpec& fs) {
    if (fs.family == "polynomial") return LienardField::polynomial(fs.coeffs);
    if (fs.family == "rational") return LienardField::rational(fs.x_M, fs.x_m, fs.p, fs.q);
    if (fs.family == "exp") return LienardField::exp_family(fs.b);
    if (fs.family == "gauss") return LienardField::gauss_family(fs.a);
    throw std::invalid_argument("field spec: unknown family \"" + fs.family + "\"");
}

inline json field_spec_to_json(const FieldSpec& fs) {
    json j;
    j["family"] = fs.family;
    if (fs.family == "polynomial") j["coeffs"] = fs.coeffs;
    if (fs.family == "rational") {
        j["x_M"] = fs.x_M;
        j["x_m"] = fs.x_m;
        j["p"] = fs.p;
        j["q"] = fs.q;
    }
    if (fs.family == "exp") j["b"] = fs.b;
    if (fs.family == "gauss") j["a"] = fs.a;
    return j;
}

struct RunConfig {
    FieldSpec field;
    double search_half_width = 50.0;
    std::vector<double> lambda_grid = {0.05, 0.1, 0.2, 0.4, 1.0, 2.0, 5.0, 10.0, 20.0};
    int samples_per_curve = 1024;
    std::optional<double> x0;
    double x0_safety = 1.2;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double stiff_lambda_threshold = 5.0;
    std::string out_dir = ".";
    std::vector<std::string> formats = {"csv", "json"};
};

inline RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    if (!j.contains("field")) throw std::invalid_argument("config: missing \"field\"");
    RunConfig cfg;
    cfg.field = parse_field_spec(j.at("field"));
    if (j.contains("search_half_width"))
        cfg.search_half_width = j.at("search_half_width").get<double>();
    if (j.contains("lambda_grid"))
        cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("samples_per_curve"))
        cfg.samples_per_curve = j.at("samples_per_curve").get<int>();
    if (j.contains("x0")) cfg.x0 = j.at("x0").get<double>();
    if (j.contains("x0_safety")) cfg.x0_safety = j.at("x0_safety").get<double>();
    if (j.contains("rel_tol")) cfg.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("abs_tol")) cfg.abs_tol = j.at("abs_tol").get<double>();
    if (j.contains("stiff_lambda_threshold"))
        cfg.stiff_lambda_threshold = j.at("stiff_lambda_threshold").get<double>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("formats"))
        cfg.formats = j.at("formats").get<std::vector<std::string>>();
    for (const auto& f : cfg.formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw std::invalid_argument("config: unknown format \"" + f + "\"");
    if (!(cfg.search_half_width > 0))
        throw std::invalid_argument("config: search_half_width must be positive");
    if (cfg.samples_per_curve < 16)
        throw std::invalid_argument("config: samples_per_curve must be at least 16");
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: parse error in " + path.string() + ": " +
                                    e.what());
    }
    return parse_run_config(j);
}

inline const char* uniqueness_status_name(UniquenessStatus s) {
    switch (s) {
        case UniquenessStatus::proved_unique: return "proved-unique";
        case UniquenessStatus::unknown: return "unknown";
        default: return "not-checked";
    }
}

inline json report_to_json(const HypothesisReport& r) {
    json j;
    j["a1"] = r.a1_holds;
    j["a2"] = r.a2_holds;
    j["search_interval"] = {r.search_lo, r.search_hi};
    j["f_roots"] = r.f_roots;
    if (r.a1_holds) {
        j["x_M"] = r.x_M;
        j["x_m"] = r.x_m;
        j["df_at_x_M"] = r.df_at_xM;
        j["df_at_x_m"] = r.df_at_xm;
        j["F_at_x_M"] = r.F_at_xM;
        j["F_at_x_m"] = r.F_at_xm;
    }
    if (r.a2_holds) {
        j["x1"] = r.x1;
        j["x1_star"] = r.x1_star;
        j["x2_star"] = r.x2_star;
        j["x2"] = r.x2;
        j["x_star"] = r.x_star;
        j["r_star"] = r.r_star;
    }
    j["uniqueness"] = {{"status", uniqueness_status_name(r.uniqueness_status)},
                       {"d1", r.uniqueness.d1},
                       {"d2", r.uniqueness.d2},
                       {"d3", r.uniqueness.d3},
                       {"d4", r.uniqueness.d4}};
    j["witnesses"] = {{"b1", r.witnesses.b1},
                      {"b2", r.witnesses.b2},
                      {"b3", r.witnesses.b3},
                      {"b4", r.witnesses.b4},
                      {"k", r.witnesses.k}};
    j["sign_properties"] = {{"p1", r.sign_properties.p1},
                            {"p2", r.sign_properties.p2},
                            {"p3", r.sign_properties.p3},
                            {"p4", r.sign_properties.p4},
                            {"margins",
                             {r.sign_properties.margin1, r.sign_properties.margin2,
                              r.sign_properties.margin3, r.sign_properties.margin4}}};
    return j;
}

inline json profile_to_json(const AveragedProfile& p) {
    json j;
    j["rho"] = p.rho;
    j["bracket"] = {p.bracket_lo, p.bracket_hi};
    j["quadrature_nodes"] = p.quadrature_nodes;
    j["scan_points"] = p.samples.size();
    return j;
}

inline json cycle_to_json(const LimitCycle& c) {
    json j;
    j["lambda"] = c.lambda;
    j["section_radius"] = c.section_radius;
    j["period"] = c.period;
    j["xi_minus"] = c.xi_minus;
    j["xi_plus"] = c.xi_plus;
    j["stable"] = c.stable;
    j["samples"] = c.points.points.size();
    return j;
}

inline json region_to_json(const BoundRegion& r) {
    json j;
    j["lambda"] = r.lambda;
    j["x0"] = r.x0;
    j["min_f"] = r.m;
    j["branch"] = r.branch;
    j["branch_lambda"] = r.branch_lambda;
    j["diameter"] = r.diameter;
    return j;
}

}  // namespace lienard
