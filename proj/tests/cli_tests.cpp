// End-to-end tests for the command-line tool. Each case invokes the real
// binary (path in argv[1]) through the shell, captures stdout/stderr to
// files, and checks exit codes, console text, and emitted artifacts.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string g_cli;
int g_fail = 0;
int g_total = 0;

void check_impl(bool ok, const std::string& what, int line) {
    ++g_total;
    if (!ok) {
        ++g_fail;
        std::cout << "FAILED (line " << line << "): " << what << "\n";
    }
}
#define CHECK(cond) check_impl(static_cast<bool>(cond), #cond, __LINE__)
#define CHECK_MSG(cond, msg) check_impl(static_cast<bool>(cond), msg, __LINE__)

const fs::path kTmp = "cli_test_tmp";

int run(const std::string& args, const std::string& capture_tag) {
    const fs::path out = kTmp / (capture_tag + ".out");
    const fs::path err = kTmp / (capture_tag + ".err");
    const std::string cmd =
        "\"" + g_cli + "\" " + args + " >" + out.string() + " 2>" + err.string();
    const int st = std::system(cmd.c_str());
    if (st == -1) return -1;
    if (WIFEXITED(st)) return WEXITSTATUS(st);
    return -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
}

std::string first_line(const std::string& s) {
    return s.substr(0, s.find('\n'));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cout << "usage: cli_tests <path-to-cli>\n";
        return 1;
    }
    g_cli = argv[1];
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);

    const fs::path vdp_cfg = kTmp / "vdp.json";
    write_file(vdp_cfg,
               R"({"field":{"family":"polynomial","coeffs":[-1,0,1]},"samples_per_curve":256})");

    // --- argument and config failures ---------------------------------------
    CHECK(run("", "noargs") == 2);
    CHECK(run("--help", "help") == 0);
    CHECK(contains(slurp(kTmp / "help.out"), "analyze"));
    CHECK(run("frobnicate", "badsub") == 2);
    CHECK(run("analyze", "noconfig") == 2);
    CHECK(run("analyze --config " + (kTmp / "missing.json").string(), "gone") == 2);

    write_file(kTmp / "broken.json", "{not json");
    CHECK(run("analyze --config " + (kTmp / "broken.json").string(), "broken") == 2);

    write_file(kTmp / "family.json", R"({"field":{"family":"sine"}})");
    CHECK(run("analyze --config " + (kTmp / "family.json").string(), "family") == 2);

    write_file(kTmp / "nokey.json", R"({"field":{"family":"exp"}})");
    CHECK(run("analyze --config " + (kTmp / "nokey.json").string(), "nokey") == 2);
    CHECK(contains(slurp(kTmp / "nokey.err"), "config error"));

    // --- analyze: happy path, artifacts, determinism ------------------------
    const std::string cfg = vdp_cfg.string();
    CHECK(run("analyze --config " + cfg + " --out " + (kTmp / "A").string(), "a1") == 0);
    const std::string a_out = slurp(kTmp / "a1.out");
    CHECK(contains(a_out, "A1 (cubic-like damping shape): holds"));
    CHECK(contains(a_out, "A2 (level sets re-intersect): holds"));
    CHECK(contains(a_out, "uniqueness: proved-unique"));
    CHECK(contains(a_out, "averaged amplitude: rho="));
    CHECK(contains(a_out, "region preview"));
    {
        const auto j = json::parse(slurp(kTmp / "A" / "analysis.json"));
        CHECK(j.at("hypotheses").at("a1") == true);
        CHECK(std::abs(j.at("hypotheses").at("r_star").get<double>() - 4.0) < 1e-6);
        CHECK(std::abs(j.at("averaging").at("rho").get<double>() - 2.0) < 1e-6);
        CHECK(j.at("region_preview").at("min_f").get<double>() < 0.0);
    }
    CHECK(first_line(slurp(kTmp / "A" / "m1_scan.csv")) == "r,m1");

    CHECK(run("analyze --config " + cfg + " --out " + (kTmp / "B").string(), "a2") == 0);
    CHECK_MSG(slurp(kTmp / "A" / "analysis.json") == slurp(kTmp / "B" / "analysis.json"),
              "repeated analyze runs emit byte-identical JSON");
    CHECK_MSG(slurp(kTmp / "a1.out") == slurp(kTmp / "a2.out"),
              "repeated analyze runs print identical text");

    CHECK(run("analyze --config " + cfg + " --out " + (kTmp / "C").string() +
                  " --formats csv",
              "a3") == 0);
    CHECK(!fs::exists(kTmp / "C" / "analysis.json"));
    CHECK(fs::exists(kTmp / "C" / "m1_scan.csv"));
    CHECK(run("analyze --config " + cfg + " --formats yaml", "a4") == 2);

    // --- cycle --------------------------------------------------------------
    CHECK(run("cycle --config " + cfg + " --lambda 1 --out " + (kTmp / "D").string() +
                  " --formats csv,json,svg",
              "c1") == 0);
    const std::string c_out = slurp(kTmp / "c1.out");
    CHECK(contains(c_out, "stable=yes"));
    CHECK(contains(c_out, "strip-exit=confirmed"));
    CHECK(first_line(slurp(kTmp / "D" / "cycle_1.csv")) == "x,y");
    {
        const auto j = json::parse(slurp(kTmp / "D" / "cycle_1.json"));
        CHECK(j.at("cycle").at("period").get<double>() > 6.0);
        CHECK(j.at("cycle").at("stable") == true);
        CHECK(j.at("cycle").at("leaves_divergence_strip") == true);
        CHECK(std::abs(j.at("seeds").at("rho").get<double>() - 2.0) < 1e-6);
    }
    CHECK(slurp(kTmp / "D" / "cycle_1.svg").rfind("<svg", 0) == 0);

    CHECK(run("cycle --config " + cfg + " --lambda 0", "c2") == 2);
    CHECK(run("cycle --config " + cfg + " --lambda -1", "c3") == 2);

    // anti-damped field: every orbit spirals outward, the search must fail
    write_file(kTmp / "neg.json", R"({"field":{"family":"polynomial","coeffs":[-1]}})");
    CHECK(run("cycle --config " + (kTmp / "neg.json").string() + " --lambda 1 --out " +
                  (kTmp / "E").string(),
              "c4") == 1);

    // --- sweep --------------------------------------------------------------
    CHECK(run("sweep --config " + cfg + " --lambdas 0.5,1 --out " +
                  (kTmp / "F").string(),
              "s1") == 0);
    const std::string s_out = slurp(kTmp / "s1.out");
    CHECK(contains(s_out, "small-lambda trend (distance to averaged circle): "
                          "insufficient-data"));
    CHECK(contains(s_out, "large-lambda trend (distance to singular loop): "
                          "insufficient-data"));
    CHECK(first_line(slurp(kTmp / "F" / "sweep.csv")) ==
          "lambda,ok,section_radius,period,xi_minus,xi_plus,stable");
    {
        const auto j = json::parse(slurp(kTmp / "F" / "sweep.json"));
        CHECK(j.at("rows").size() == 2);
        CHECK(j.at("rows").at(0).at("ok") == true);
        CHECK(j.at("rows").at(1).at("ok") == true);
        CHECK(j.at("trends").at("small_lambda").at("verdict") == "insufficient-data");
    }
    CHECK(run("sweep --config " + cfg + " --lambdas 0.5,abc", "s2") == 2);
    CHECK(run("sweep --config " + cfg + " --lambdas=-2", "s3") == 2);
    write_file(kTmp / "empty_grid.json",
               R"({"field":{"family":"polynomial","coeffs":[-1,0,1]},"lambda_grid":[]})");
    CHECK(run("sweep --config " + (kTmp / "empty_grid.json").string(), "s4") == 2);

    // --- render -------------------------------------------------------------
    const fs::path pic = kTmp / "G" / "pic.svg";
    CHECK(run("render --config " + cfg + " --lambda 1 --out " + pic.string(), "r1") == 0);
    CHECK(contains(slurp(kTmp / "r1.out"), "wrote "));
    CHECK(slurp(pic).rfind("<svg", 0) == 0);
    CHECK(run("render --config " + cfg + " --lambda 0", "r2") == 2);

    std::cout << (g_total - g_fail) << "/" << g_total << " checks passed\n";
    return g_fail == 0 ? 0 : 1;
}
