// Command-line front end: analyze a damping field, compute limit cycles,
// sweep a lambda grid with asymptotic trend verdicts, and render SVG plots.
//
// Exit codes: 0 success, 1 numerical failure (an iteration or integration
// that did not converge, unwritable output), 2 usage or configuration error.
// Verdicts themselves (a failed hypothesis, an unstable trend) are results,
// not errors, and exit 0.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lienard/averaging.hpp"
#include "lienard/bounds.hpp"
#include "lienard/config.hpp"
#include "lienard/dynamics.hpp"
#include "lienard/field.hpp"
#include "lienard/geometry.hpp"
#include "lienard/hypothesis.hpp"
#include "lienard/io.hpp"

namespace fs = std::filesystem;
using lienard::format_double;
using lienard::json;

namespace {

struct Ctx {
    lienard::RunConfig cfg;
    lienard::LienardField field;

    explicit Ctx(lienard::RunConfig c)
        : cfg(std::move(c)), field(lienard::make_field(cfg.field)) {}
};

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Ctx load_ctx(const std::string& config_path, const std::string& out_override,
             const std::string& formats_override) {
    Ctx ctx(lienard::load_run_config(config_path));
    if (!out_override.empty()) ctx.cfg.out_dir = out_override;
    if (!formats_override.empty()) {
        std::vector<std::string> fmts = split_csv_list(formats_override);
        for (const auto& f : fmts)
            if (f != "csv" && f != "json" && f != "svg")
                throw std::invalid_argument("unknown format \"" + f + "\"");
        if (fmts.empty()) throw std::invalid_argument("empty format list");
        ctx.cfg.formats = std::move(fmts);
    }
    return ctx;
}

bool wants(const Ctx& ctx, const std::string& fmt) {
    return std::find(ctx.cfg.formats.begin(), ctx.cfg.formats.end(), fmt) !=
           ctx.cfg.formats.end();
}

fs::path out_file(const Ctx& ctx, const std::string& name) {
    fs::create_directories(ctx.cfg.out_dir);
    return fs::path(ctx.cfg.out_dir) / name;
}

lienard::HypothesisOptions hyp_opts(const Ctx& ctx) {
    lienard::HypothesisOptions h;
    h.search_half_width = ctx.cfg.search_half_width;
    return h;
}

lienard::CycleOptions cycle_opts(const Ctx& ctx) {
    lienard::CycleOptions co;
    co.integrate.rel_tol = ctx.cfg.rel_tol;
    co.integrate.abs_tol = ctx.cfg.abs_tol;
    co.integrate.stiff_lambda_threshold = ctx.cfg.stiff_lambda_threshold;
    co.min_samples = ctx.cfg.samples_per_curve;
    return co;
}

struct Seeds {
    std::optional<double> rho;
    std::optional<double> x2;
    std::string rho_error;
};

Seeds compute_seeds(const Ctx& ctx, const lienard::HypothesisReport& rep) {
    Seeds s;
    if (!rep.a2_holds) return s;
    s.x2 = rep.x2;
    try {
        s.rho = lienard::find_rho(ctx.field, rep).rho;
    } catch (const std::exception& e) {
        s.rho_error = e.what();
    }
    return s;
}

std::string yn(bool b) { return b ? "yes" : "no"; }

int run_analyze(const std::string& config_path, const std::string& out_dir,
                const std::string& formats) {
    Ctx ctx = load_ctx(config_path, out_dir, formats);
    const auto rep = lienard::analyze_hypotheses(ctx.field, hyp_opts(ctx));

    json doc;
    doc["field"] = lienard::field_spec_to_json(ctx.cfg.field);
    doc["hypotheses"] = lienard::report_to_json(rep);

    std::cout << "A1 (cubic-like damping shape): " << (rep.a1_holds ? "holds" : "fails")
              << "\n";
    if (rep.a1_holds)
        std::cout << "  f zeros: x_M=" << format_double(rep.x_M)
                  << " x_m=" << format_double(rep.x_m) << "\n";
    std::cout << "A2 (level sets re-intersect): " << (rep.a2_holds ? "holds" : "fails")
              << "\n";
    std::optional<lienard::AveragedProfile> profile;
    if (rep.a2_holds) {
        std::cout << "  landmarks: x1=" << format_double(rep.x1)
                  << " x1*=" << format_double(rep.x1_star)
                  << " x2*=" << format_double(rep.x2_star)
                  << " x2=" << format_double(rep.x2) << "\n";
        std::cout << "  x*=" << format_double(rep.x_star)
                  << " r*=" << format_double(rep.r_star) << "\n";
        std::cout << "uniqueness: "
                  << lienard::uniqueness_status_name(rep.uniqueness_status) << " (d1="
                  << yn(rep.uniqueness.d1) << " d2=" << yn(rep.uniqueness.d2)
                  << " d3=" << yn(rep.uniqueness.d3) << " d4=" << yn(rep.uniqueness.d4)
                  << ")\n";
        try {
            profile = lienard::find_rho(ctx.field, rep);
            doc["averaging"] = lienard::profile_to_json(*profile);
            std::cout << "averaged amplitude: rho=" << format_double(profile->rho)
                      << " in (" << format_double(profile->bracket_lo) << ", "
                      << format_double(profile->bracket_hi) << ")\n";
        } catch (const std::exception& e) {
            doc["averaging"] = {{"error", e.what()}};
            std::cout << "averaged amplitude: failed (" << e.what() << ")\n";
        }
    }

    // cheap region preview from landmark and averaged amplitudes only
    if (rep.a2_holds) {
        double amp = std::max(-rep.x1, rep.x2);
        if (profile) amp = std::max(amp, profile->rho);
        const double x0 = ctx.cfg.x0.value_or(ctx.cfg.x0_safety * amp);
        const auto mf = lienard::min_f(ctx.field, -x0, x0);
        json reg;
        reg["x0"] = x0;
        reg["min_f"] = mf.value;
        reg["min_f_at"] = mf.argmin;
        if (mf.value < 0.0) {
            reg["branch_lambda"] = lienard::lambda_branch_point(mf.value);
        }
        doc["region_preview"] = reg;
        std::cout << "region preview: x0=" << format_double(x0)
                  << " min_f=" << format_double(mf.value) << "\n";
    }

    if (wants(ctx, "json"))
        lienard::write_text_file(out_file(ctx, "analysis.json"), doc.dump(2) + "\n");
    if (profile && wants(ctx, "csv")) {
        std::ostringstream os;
        lienard::write_samples_csv(os, "r,m1", profile->samples);
        lienard::write_text_file(out_file(ctx, "m1_scan.csv"), os.str());
    }
    if (profile && wants(ctx, "svg")) {
        std::vector<lienard::Point> pts;
        pts.reserve(profile->samples.size());
        for (const auto& [r, v] : profile->samples) pts.push_back({r, v});
        lienard::SvgPlot plot(800, 500, "first-order return-map drift vs amplitude");
        plot.add_curve(std::move(pts), "m1(r)");
        plot.add_marker({profile->rho, 0.0}, "rho");
        lienard::write_text_file(out_file(ctx, "m1_scan.svg"), plot.render());
    }
    return 0;
}

void print_cycle_line(const lienard::LimitCycle& cyc, std::optional<bool> bendixson) {
    std::cout << "lambda=" << format_double(cyc.lambda)
              << " section_radius=" << format_double(cyc.section_radius)
              << " period=" << format_double(cyc.period) << " xi=["
              << format_double(cyc.xi_minus) << ", " << format_double(cyc.xi_plus)
              << "] stable=" << yn(cyc.stable);
    if (bendixson)
        std::cout << " strip-exit=" << (*bendixson ? "confirmed" : "VIOLATED");
    std::cout << "\n";
}

int run_cycle(const std::string& config_path, double lambda, double seed_r,
              const std::string& out_dir, const std::string& formats) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("cycle: --lambda must be positive");
    Ctx ctx = load_ctx(config_path, out_dir, formats);
    const auto rep = lienard::analyze_hypotheses(ctx.field, hyp_opts(ctx));
    const Seeds seeds = compute_seeds(ctx, rep);

    lienard::CycleOptions co = cycle_opts(ctx);
    co.rho = seeds.rho;
    co.x2 = seeds.x2;
    if (seed_r > 0.0) co.seed_r = seed_r;
    const auto cyc = lienard::find_limit_cycle(ctx.field, lambda, co);
    std::optional<bool> bendixson;
    if (rep.a1_holds) bendixson = lienard::bendixson_check(cyc, rep);
    print_cycle_line(cyc, bendixson);

    const std::string tag = format_double(lambda);
    if (wants(ctx, "csv")) {
        std::ostringstream os;
        lienard::write_curve_csv(os, cyc.points);
        lienard::write_text_file(out_file(ctx, "cycle_" + tag + ".csv"), os.str());
    }
    if (wants(ctx, "json")) {
        json doc;
        doc["field"] = lienard::field_spec_to_json(ctx.cfg.field);
        doc["cycle"] = lienard::cycle_to_json(cyc);
        if (bendixson) doc["cycle"]["leaves_divergence_strip"] = *bendixson;
        if (seeds.rho) doc["seeds"]["rho"] = *seeds.rho;
        if (seeds.x2) doc["seeds"]["x2"] = *seeds.x2;
        lienard::write_text_file(out_file(ctx, "cycle_" + tag + ".json"),
                                 doc.dump(2) + "\n");
    }
    if (wants(ctx, "svg")) {
        lienard::SvgPlot plot(700, 700, "limit cycle, lambda=" + tag);
        plot.add_curve(cyc.points.points, "cycle", true);
        const double amp = std::max(-cyc.xi_minus, cyc.xi_plus);
        const double x0 = ctx.cfg.x0.value_or(ctx.cfg.x0_safety * amp);
        const auto mf = lienard::min_f(ctx.field, -x0, x0);
        if (mf.value < 0.0) {
            const auto rb = lienard::region_boundary(lambda, x0, mf.value);
            plot.add_curve(rb.upper, "trap region (upper)");
            plot.add_curve(rb.lower, "trap region (lower)");
        }
        if (seeds.rho && lambda < ctx.cfg.stiff_lambda_threshold)
            plot.add_curve(lienard::circle(*seeds.rho, 256).points, "averaged circle",
                           true);
        lienard::write_text_file(out_file(ctx, "cycle_" + tag + ".svg"), plot.render());
    }
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& lambdas_arg,
              const std::string& out_dir, const std::string& formats) {
    Ctx ctx = load_ctx(config_path, out_dir, formats);
    std::vector<double> grid = ctx.cfg.lambda_grid;
    if (!lambdas_arg.empty()) {
        grid.clear();
        for (const auto& tok : split_csv_list(lambdas_arg)) {
            try {
                grid.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw std::invalid_argument("sweep: bad lambda value \"" + tok + "\"");
            }
        }
    }
    if (grid.empty()) throw std::invalid_argument("sweep: empty lambda grid");
    for (double l : grid)
        if (!(l > 0.0))
            throw std::invalid_argument("sweep: lambda values must be positive");

    const auto rep = lienard::analyze_hypotheses(ctx.field, hyp_opts(ctx));
    const Seeds seeds = compute_seeds(ctx, rep);
    lienard::CycleOptions co = cycle_opts(ctx);
    co.rho = seeds.rho;
    co.x2 = seeds.x2;
    const auto rows = lienard::amplitude_sweep(ctx.field, grid, co);

    for (const auto& row : rows) {
        if (row.ok) {
            print_cycle_line(row.cycle, std::nullopt);
        } else {
            std::cout << "lambda=" << format_double(row.lambda) << " failed: " << row.error
                      << "\n";
        }
    }

    // asymptotic trend verdicts on the extreme thirds of the grid
    std::vector<const lienard::SweepRow*> ok_rows;
    for (const auto& r : rows)
        if (r.ok) ok_rows.push_back(&r);
    std::sort(ok_rows.begin(), ok_rows.end(),
              [](const auto* a, const auto* b) { return a->lambda < b->lambda; });
    const int side = std::min<int>(4, static_cast<int>(ok_rows.size()) / 2);

    auto verdict_of = [](const std::vector<std::pair<double, double>>& pairs,
                         bool decreasing_toward_front) {
        if (pairs.size() < 2) return std::string("insufficient-data");
        for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
            const double a = pairs[i].second, b = pairs[i + 1].second;
            if (decreasing_toward_front ? !(a < b) : !(a > b))
                return std::string("not-decreasing");
        }
        return std::string("decreasing");
    };

    std::vector<std::pair<double, double>> small_pairs, large_pairs;
    std::string small_verdict = "insufficient-data";
    std::string large_verdict = "insufficient-data";
    if (seeds.rho && side >= 2) {
        const auto ref = lienard::circle(*seeds.rho, ctx.cfg.samples_per_curve);
        for (int i = 0; i < side; ++i) {
            const auto* r = ok_rows[i];
            small_pairs.push_back({r->lambda, lienard::hausdorff(r->cycle.points, ref)});
        }
        small_verdict = verdict_of(small_pairs, true);
    }
    if (rep.a2_holds && side >= 2) {
        const auto gamma0 =
            lienard::build_gamma0(ctx.field, rep, ctx.cfg.samples_per_curve / 4)
                .as_closed_curve();
        for (int i = static_cast<int>(ok_rows.size()) - side;
             i < static_cast<int>(ok_rows.size()); ++i) {
            const auto* r = ok_rows[i];
            const auto mapped = lienard::map_curve(r->cycle.points, [&](lienard::Point p) {
                return lienard::map_P(ctx.field, r->lambda, p);
            });
            large_pairs.push_back({r->lambda, lienard::hausdorff(mapped, gamma0)});
        }
        large_verdict = verdict_of(large_pairs, false);
    }
    std::cout << "small-lambda trend (distance to averaged circle): " << small_verdict
              << "\n";
    std::cout << "large-lambda trend (distance to singular loop): " << large_verdict
              << "\n";

    if (wants(ctx, "csv")) {
        std::ostringstream os;
        os << "lambda,ok,section_radius,period,xi_minus,xi_plus,stable\n";
        for (const auto& r : rows) {
            os << format_double(r.lambda) << ',' << (r.ok ? 1 : 0) << ',';
            if (r.ok)
                os << format_double(r.cycle.section_radius) << ','
                   << format_double(r.cycle.period) << ','
                   << format_double(r.cycle.xi_minus) << ','
                   << format_double(r.cycle.xi_plus) << ',' << (r.cycle.stable ? 1 : 0);
            else
                os << ",,,,";
            os << '\n';
        }
        lienard::write_text_file(out_file(ctx, "sweep.csv"), os.str());
    }
    if (wants(ctx, "json")) {
        json doc;
        doc["field"] = lienard::field_spec_to_json(ctx.cfg.field);
        doc["rows"] = json::array();
        for (const auto& r : rows) {
            json row;
            row["lambda"] = r.lambda;
            row["ok"] = r.ok;
            if (r.ok)
                row["cycle"] = lienard::cycle_to_json(r.cycle);
            else
                row["error"] = r.error;
            doc["rows"].push_back(row);
        }
        auto pairs_json = [](const std::vector<std::pair<double, double>>& ps) {
            json a = json::array();
            for (const auto& [l, d] : ps) a.push_back({{"lambda", l}, {"distance", d}});
            return a;
        };
        doc["trends"]["small_lambda"] = {{"verdict", small_verdict},
                                         {"pairs", pairs_json(small_pairs)}};
        doc["trends"]["large_lambda"] = {{"verdict", large_verdict},
                                         {"pairs", pairs_json(large_pairs)}};
        lienard::write_text_file(out_file(ctx, "sweep.json"), doc.dump(2) + "\n");
    }
    if (wants(ctx, "svg") && !ok_rows.empty()) {
        std::vector<lienard::Point> amp_hi, amp_lo;
        for (const auto* r : ok_rows) {
            amp_hi.push_back({r->lambda, r->cycle.xi_plus});
            amp_lo.push_back({r->lambda, -r->cycle.xi_minus});
        }
        lienard::SvgPlot plot(800, 500, "cycle amplitude vs lambda");
        plot.add_curve(std::move(amp_hi), "xi_plus");
        plot.add_curve(std::move(amp_lo), "-xi_minus");
        lienard::write_text_file(out_file(ctx, "sweep.svg"), plot.render());
    }
    return 0;
}

int run_render(const std::string& config_path, double lambda, const std::string& out_arg,
               const std::string& formats) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("render: --lambda must be positive");
    Ctx ctx = load_ctx(config_path, "", formats);
    const auto rep = lienard::analyze_hypotheses(ctx.field, hyp_opts(ctx));
    const Seeds seeds = compute_seeds(ctx, rep);
    lienard::CycleOptions co = cycle_opts(ctx);
    co.rho = seeds.rho;
    co.x2 = seeds.x2;
    const auto cyc = lienard::find_limit_cycle(ctx.field, lambda, co);

    const std::string tag = format_double(lambda);
    const bool relaxation = lambda >= ctx.cfg.stiff_lambda_threshold && rep.a2_holds;
    lienard::SvgPlot plot(700, 700,
                          (relaxation ? "slow-fast chart, lambda=" : "phase plane, lambda=") +
                              tag);
    if (relaxation) {
        const auto mapped = lienard::map_curve(
            cyc.points, [&](lienard::Point p) { return lienard::map_P(ctx.field, lambda, p); });
        plot.add_curve(mapped.points, "cycle (chart)", true);
        const auto gamma0 =
            lienard::build_gamma0(ctx.field, rep, ctx.cfg.samples_per_curve / 4);
        plot.add_curve(gamma0.as_closed_curve().points, "singular loop", true);
        plot.add_marker({rep.x_M, rep.F_at_xM}, "fold (x_M)");
        plot.add_marker({rep.x_m, rep.F_at_xm}, "fold (x_m)");
    } else {
        plot.add_curve(cyc.points.points, "cycle", true);
        if (seeds.rho)
            plot.add_curve(lienard::circle(*seeds.rho, 256).points, "averaged circle",
                           true);
        const double amp = std::max(-cyc.xi_minus, cyc.xi_plus);
        const double x0 = ctx.cfg.x0.value_or(ctx.cfg.x0_safety * amp);
        const auto mf = lienard::min_f(ctx.field, -x0, x0);
        if (mf.value < 0.0) {
            const auto rb = lienard::region_boundary(lambda, x0, mf.value);
            plot.add_curve(rb.upper, "trap region (upper)");
            plot.add_curve(rb.lower, "trap region (lower)");
        }
    }
    fs::path out = out_arg.empty() ? fs::path(ctx.cfg.out_dir) / ("render_" + tag + ".svg")
                                   : fs::path(out_arg);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    lienard::write_text_file(out, plot.render());
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-parameter Lienard oscillator toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, formats, lambdas_arg;
    double lambda = 0.0, seed_r = 0.0;

    auto* analyze = app.add_subcommand("analyze", "verify hypotheses, landmarks, rho");
    analyze->add_option("--config", config_path, "JSON config file")->required();
    analyze->add_option("--out", out_dir, "output directory (overrides config)");
    analyze->add_option("--formats", formats, "comma list of csv,json,svg");

    auto* cycle = app.add_subcommand("cycle", "locate the stable limit cycle");
    cycle->add_option("--config", config_path, "JSON config file")->required();
    cycle->add_option("--lambda", lambda, "damping strength (> 0)")->required();
    cycle->add_option("--seed-r", seed_r, "initial section abscissa");
    cycle->add_option("--out", out_dir, "output directory (overrides config)");
    cycle->add_option("--formats", formats, "comma list of csv,json,svg");

    auto* sweep = app.add_subcommand("sweep", "cycles across a lambda grid with trends");
    sweep->add_option("--config", config_path, "JSON config file")->required();
    sweep->add_option("--lambdas", lambdas_arg, "comma list overriding the grid");
    sweep->add_option("--out", out_dir, "output directory (overrides config)");
    sweep->add_option("--formats", formats, "comma list of csv,json,svg");

    auto* render = app.add_subcommand("render", "SVG picture for one lambda");
    render->add_option("--config", config_path, "JSON config file")->required();
    render->add_option("--lambda", lambda, "damping strength (> 0)")->required();
    render->add_option("--out", out_dir, "output SVG file");
    render->add_option("--formats", formats, "unused, accepted for symmetry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(config_path, out_dir, formats);
        if (cycle->parsed()) return run_cycle(config_path, lambda, seed_r, out_dir, formats);
        if (sweep->parsed()) return run_sweep(config_path, lambdas_arg, out_dir, formats);
        if (render->parsed()) return run_render(config_path, lambda, out_dir, formats);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
