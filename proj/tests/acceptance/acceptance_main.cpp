// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#include "shiftperc/cli.hpp"
#include "shiftperc/reproduce.hpp"

#include <iostream>
#include <sstream>

using namespace shiftperc;

namespace {

// Criterion 1 also goes through the command line, in-process.
std::string cli_thresholds_mismatch() {
    for (int k = 1; k <= 10; ++k) {
        const std::string kk = std::to_string(k);
        const char* argv[] = {"shiftperc", "thresholds", "--shift-k", kk.c_str(), "--format", "json"};
        std::ostringstream out, err;
        if (cli::run(6, argv, out, err) != 0) return "K=" + kk + ": exit code nonzero";
        const auto j = json::parse(out.str());
        if (j["vertex"]["num"] != k - 1 || j["vertex"]["den"] != (k == 1 ? 1 : k)) return "K=" + kk + ": vertex " + j["vertex"].dump();
        if (j["edge"]["num"] != k || j["edge"]["den"] != k + 1) return "K=" + kk + ": edge " + j["edge"].dump();
    }
    return {};
}

} // namespace

int main() {
    reproduce_options opt;
    opt.budget = budget_level::standard;
    const auto report = reproduce(opt);

    int failures = 0;
    for (auto c : report.checks) {
        if (c.id == 1 && c.status == check_status::pass) {
            if (const auto why = cli_thresholds_mismatch(); !why.empty()) {
                c.status = check_status::fail;
                c.detail = "command line: " + why;
            }
        }
        const bool pass = c.status == check_status::pass;
        failures += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << format_decimal(c.seconds, 2)
                  << " s) " << c.detail << '\n';
    }
    std::cout << (failures ? "FAILED" : "ALL PASSED") << ": " << report.checks.size() - failures << '/' << report.checks.size()
              << " criteria, seed " << report.seed << '\n';
    return failures ? 1 : 0;
}
