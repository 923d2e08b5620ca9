#include "shiftperc/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace shiftperc;

namespace {

struct outcome {
    int code;
    std::string out;
    std::string err;
};

outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "shiftperc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content = "") {
    const auto path = std::filesystem::temp_directory_path() / ("shiftperc_cli_" + name);
    if (!content.empty()) std::ofstream(path) << content;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST(Cli, Thresholds) {
    const auto r = invoke({"thresholds", "--shift-k", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("vertex 2/3"), std::string::npos);
    EXPECT_NE(r.out.find("edge 3/4"), std::string::npos);

    const auto j = json::parse(invoke({"thresholds", "--shift-k", "5", "--format", "json"}).out);
    EXPECT_EQ(j["vertex"]["num"], 4);
    EXPECT_EQ(j["vertex"]["den"], 5);
    EXPECT_EQ(j["edge"]["den"], 6);
}

TEST(Cli, ThresholdsFromSpec) {
    const auto spec = temp_file("spec.json", R"({"relations":[{"domain":[1,2],"images":[2,3]},{"domain":[1,2],"images":[3,4]}]})");
    const auto r = invoke({"thresholds", "--spec", spec.string(), "--format", "json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["relations"].size(), 2u);
    EXPECT_TRUE(j["family"].contains("hi"));
}

TEST(Cli, FinitePathJson) {
    const auto r = invoke({"bounds", "finite-path", "-p", "2", "-k", "6", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "{\"lo\":{\"num\":1,\"den\":3},\"hi\":{\"num\":1,\"den\":2}}\n");
}

TEST(Cli, DebruijnAlpha) {
    const auto r = invoke({"debruijn", "alpha", "-d", "2", "-k", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("alpha=2"), std::string::npos);
    const auto m = invoke({"debruijn", "alpha", "-d", "3", "-k", "3", "--method", "mis", "--format", "json"});
    EXPECT_EQ(json::parse(m.out)["alpha"], 8);
}

TEST(Cli, OtherSubcommands) {
    EXPECT_NE(invoke({"relations", "enumerate", "-k", "2"}).out.find("4 classes"), std::string::npos);
    const auto w = invoke({"relations", "w", "--spec", temp_file("w.json", R"({"domain":[1,2,3],"images":[2,3,4]})").string()});
    EXPECT_NE(w.out.find("w(tau)=4"), std::string::npos);
    EXPECT_EQ(invoke({"bounds", "corollary", "--lambda", "3/4", "--lambda-g", "1/2"}).out, "1/2\n");
    EXPECT_NE(invoke({"oracle", "construction", "-p", "2", "-k", "4"}).out.find("= 1/3"), std::string::npos);
    EXPECT_NE(invoke({"oracle", "z-measure", "--shift-k", "3", "--f-eps"}).out.find("= 3/4"), std::string::npos);
    EXPECT_NE(invoke({"oracle", "search", "-p", "2", "-k", "3"}).out.find("value 1/3 (exhaustive)"), std::string::npos);
    EXPECT_NE(invoke({"graph", "summary", "--shift-k", "2", "-n", "10"}).out.find("45 vertices, 120 edges"), std::string::npos);
    EXPECT_EQ(invoke({"graph", "edges", "--shift-k", "2", "-n", "3"}).out, "0,1;1,2\n");
    EXPECT_EQ(invoke({"debruijn", "ratios", "--d-lo", "2", "--d-hi", "3", "-k", "3", "--format", "csv"}).code, 0);
}

TEST(Cli, StochasticOutputsCarrySeed) {
    const auto s = invoke({"percolate", "sweep", "--shift-k", "2", "-n", "20", "-p", "3", "--lambdas", "1/4,1/2", "--replicas", "10",
                           "--seed", "77", "--format", "csv"});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(s.out.rfind("# seed 77\n", 0), 0u);
    const auto j = json::parse(invoke({"percolate", "extremal", "--shift-k", "3", "-n", "20", "-p", "2", "--replicas", "10",
                                       "--seed", "5", "--format", "json"})
                                   .out);
    EXPECT_EQ(j["seed"], 5);
    EXPECT_EQ(j["samples_with_path"], 0);
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::string> args{"percolate", "sweep",  "--shift-k", "3",    "-n",     "25",       "-p",
                                        "2",         "--lambdas", "0.3,0.5",  "--replicas", "20", "--format", "json"};
    EXPECT_EQ(invoke(args).out, invoke(args).out);

    const auto a = temp_file("a.csv"), b = temp_file("b.csv");
    for (const auto& path : {a, b})
        ASSERT_EQ(invoke({"debruijn", "alpha", "-d", "6", "-k", "3", "--method", "local", "--iterations", "2000", "--format", "csv",
                          "--out", path.string()})
                      .code,
                  0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"thresholds", "--shift-k", "3", "--format", "xml"}).code, 2);
    EXPECT_EQ(invoke({"bounds", "finite-path", "-p", "0", "-k", "3"}).code, 2);
    const auto bad = temp_file("bad.json", R"({"domain":[2,1],"images":[3,4]})");
    const auto r = invoke({"relations", "w", "--spec", bad.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("NotIncreasing"), std::string::npos);
    EXPECT_EQ(invoke({"debruijn", "alpha", "-d", "3", "-k", "4", "--method", "subset"}).code, 3);
    EXPECT_EQ(invoke({"oracle", "search", "-p", "2", "-k", "12"}).code, 3);
}

TEST(Cli, HelpDocumentsExitCodes) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--help"}, {"thresholds", "--help"}, {"percolate", "sweep", "--help"}, {"debruijn", "alpha", "--help"}, {"reproduce", "--help"}}) {
        const auto r = invoke(args);
        EXPECT_EQ(r.code, 0);
        EXPECT_NE(r.out.find("Exit codes"), std::string::npos) << args.front();
    }
}

TEST(Cli, ReproduceTinyAndTamper) {
    const auto tiny = invoke({"reproduce", "--budget", "tiny", "--format", "json"});
    EXPECT_EQ(tiny.code, 0);
    const auto j = json::parse(tiny.out);
    EXPECT_EQ(j["failed"], 0);
    EXPECT_EQ(j["skipped"], 3);
    EXPECT_EQ(j["checks"].size(), 10u);

    const auto tampered = invoke({"reproduce", "--budget", "tiny", "--tamper"});
    EXPECT_EQ(tampered.code, 1);
    EXPECT_NE(tampered.out.find("FAIL"), std::string::npos);
}
