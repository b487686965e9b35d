// Acceptance run: each criterion goes through the same subcommand a user would
// invoke, then the reported checks, the runtime and the written files are judged.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "horolab/runner.hpp"
#include "horolab/series_io.hpp"

namespace fs = std::filesystem;
using horolab::read_text_file;

namespace {

struct Outcome {
    int code = 0;
    double seconds = 0.0;
    std::map<std::string, std::pair<bool, std::string>> checks;  // name -> (pass, detail)
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    o.code = horolab::run(args, out, err);
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
        bool pass = line.rfind("PASS ", 0) == 0;
        if (!pass && line.rfind("FAIL ", 0) != 0) continue;
        auto slash = line.find('/'), colon = line.find(": ");
        if (slash == std::string::npos || colon == std::string::npos) continue;
        o.checks[line.substr(slash + 1, colon - slash - 1)] = {pass, line.substr(colon + 2)};
    }
    if (!err.str().empty()) std::cout << "  stderr: " << err.str();
    return o;
}

int failures = 0;

void report(int id, const std::string& title, const Outcome& o, const std::vector<std::string>& names,
            double bound_s) {
    bool ok = o.code != 2;
    std::vector<std::string> details;
    for (const auto& n : names) {
        auto it = o.checks.find(n);
        if (it == o.checks.end()) {
            ok = false;
            details.push_back(n + ": missing");
            continue;
        }
        ok = ok && it->second.first;
        details.push_back(std::string(it->second.first ? "ok   " : "fail ") + n + ": " + it->second.second);
    }
    bool fast = o.seconds < bound_s;
    char head[256];
    std::snprintf(head, sizeof head, "%s criterion %d: %s (%.1f s, bound %.0f s)", ok && fast ? "PASS" : "FAIL", id,
                  title.c_str(), o.seconds, bound_s);
    std::cout << head << "\n";
    for (const auto& d : details) std::cout << "    " << d << "\n";
    if (!fast) std::cout << "    runtime above bound\n";
    if (!(ok && fast)) ++failures;
    std::cout.flush();
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_out";
    fs::remove_all(root);
    fs::create_directories(root);
    auto dir = [&](const std::string& name) { return (root / name).string(); };

    std::cout << "output under " << root.string() << "\n";

    // Criteria 1-3 share one verify-core run; its total time bounds each of them.
    Outcome core = invoke({"verify-core", "--out", dir("verify-core"), "--force"});
    report(1, "group identities and octagon relation", core, {"conjugation_n", "conjugation_nbar", "octagon_relation"},
           1.0);
    report(2, "Lyapunov exponents -1/+1 within 0.01", core, {"lyapunov_stable", "lyapunov_unstable"}, 5.0);
    report(3, "plane-wave eigen-equation and eigenvalue formula", core, {"plane_wave_eigen", "eigenvalue_formula"}, 10.0);

    Outcome planch = invoke({"plancherel", "--out", dir("plancherel"), "--force"});
    report(4, "Helgason round trip and Plancherel", planch, {"round_trip", "plancherel_norm"}, 120.0);

    Outcome quant = invoke({"quantize-check", "--out", dir("quantize-check"), "--force"});
    report(5, "symbol action on plane waves", quant, {"action_constant", "action_radial", "action_product"}, 300.0);
    report(6, "commutation with a Bolza generator", quant, {"commutation"}, 300.0);

    Outcome mix = invoke({"mixing", "--n", "1000000", "--seed", "7", "--out", dir("mixing"), "--force"});
    report(7, "correlation decay at N = 1e6", mix, {"decay_rate", "fit_rms", "decay_ratio"}, 900.0);

    Outcome trace = invoke({"trace-decay", "--seed", "7", "--out", dir("trace-decay"), "--force"});
    report(8, "trace series decay, dual route, permutation", trace, {"decay_rate", "dual_path", "permutation"}, 1800.0);

    Outcome summ = invoke({"summability", "--out", dir("summability"), "--force"});
    report(9, "summability exponents", summ, {"order_minus_4", "order_minus_6", "order_minus_3_flagged"}, 1.0);

    // Criterion 10: the same two runs again into fresh directories.
    auto t0 = std::chrono::steady_clock::now();
    invoke({"mixing", "--n", "1000000", "--seed", "7", "--out", dir("mixing-repeat"), "--force"});
    invoke({"trace-decay", "--seed", "7", "--out", dir("trace-decay-repeat"), "--force"});
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool same = true;
    std::vector<std::string> notes;
    for (auto [a, b, f] : {std::tuple{"mixing", "mixing-repeat", "mixing.csv"},
                           std::tuple{"trace-decay", "trace-decay-repeat", "trace.csv"},
                           std::tuple{"trace-decay", "trace-decay-repeat", "trace_terms.csv"}}) {
        bool eq = false;
        try {
            eq = read_text_file((root / a / f).string()) == read_text_file((root / b / f).string());
        } catch (const std::exception& e) {
            notes.push_back(e.what());
        }
        notes.push_back(std::string(eq ? "identical " : "differs   ") + f);
        same = same && eq;
    }
    std::printf("%s criterion 10: byte-identical CSVs on repeat (%.1f s)\n", same ? "PASS" : "FAIL", secs);
    for (const auto& n : notes) std::cout << "    " << n << "\n";
    if (!same) ++failures;

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
