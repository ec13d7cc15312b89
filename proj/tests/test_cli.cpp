#include "cli.hpp"
#include "slbi/io.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slbi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slbi_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_problem(const fs::path& dir) {
    const Matrix x = slbi::testing::random_matrix(1, 12, 5);
    const Vector beta = (Vector(5) << 3, -3, 0, 0, 0).finished();
    const Problem p(x, x * beta + 0.1 * slbi::testing::random_vector(2, 12), Matrix::Identity(5, 5), beta, 0.1);
    const fs::path file = dir / "problem.json";
    io::write_problem_json(file.string(), p);
    return file;
}

}  // namespace

TEST(Cli, HelpAndBadArguments) {
    EXPECT_EQ(invoke({"--help"}).code, cli::kOk);
    EXPECT_EQ(invoke({"simulate", "--bogus"}).code, cli::kConfigError);
    EXPECT_EQ(invoke({}).code, cli::kConfigError);
    const fs::path dir = fresh_dir("bad");
    EXPECT_EQ(invoke({"simulate", "--reps", "1", "--design", "ridge", "--out", dir.string()}).code, cli::kConfigError);
    EXPECT_EQ(invoke({"simulate", "--reps", "1", "--nu", "-1", "--out", dir.string()}).code, cli::kConfigError);
    EXPECT_EQ(invoke({"path", "--out", dir.string()}).code, cli::kConfigError);
    EXPECT_EQ(invoke({"simulate", "--reps", "1", "--format", "xml", "--out", dir.string()}).code, cli::kConfigError);
}

TEST(Cli, SimulateIsDeterministic) {
    const fs::path a = fresh_dir("sim_a"), b = fresh_dir("sim_b");
    const std::vector<std::string> base = {"simulate", "--reps", "2", "--nu", "1,5", "--n", "30", "--p", "20",
                                           "--horizon", "5", "--seed", "3", "--per-replicate", "--threads", "2"};
    auto with_out = [&](const fs::path& d) {
        auto v = base;
        v.push_back("--out");
        v.push_back(d.string());
        return v;
    };
    const Outcome r1 = invoke(with_out(a));
    const Outcome r2 = invoke(with_out(b));
    ASSERT_EQ(r1.code, cli::kOk) << r1.err;
    ASSERT_EQ(r2.code, cli::kOk) << r2.err;
    EXPECT_EQ(r1.out, r2.out);
    EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
    EXPECT_EQ(slurp(a / "replicates.csv"), slurp(b / "replicates.csv"));
    std::istringstream rows(slurp(a / "summary.csv"));
    std::string line;
    int count = 0;
    while (std::getline(rows, line)) ++count;
    EXPECT_EQ(count, 3);
}

TEST(Cli, SimulateJson) {
    const fs::path dir = fresh_dir("sim_json");
    const Outcome r = invoke({"simulate", "--reps", "1", "--nu", "5", "--n", "30", "--p", "20", "--horizon", "5",
                              "--format", "json", "--out", dir.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto j = io::Json::parse(slurp(dir / "summary.json"));
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["n_replicates"].get<int>(), 1);
}

TEST(Cli, PathLbiAndIss) {
    const fs::path dir = fresh_dir("path");
    const fs::path problem = write_problem(dir);
    Outcome r = invoke({"path", "--problem", problem.string(), "--k-max", "50", "--stride", "10", "--out",
                        (dir / "lbi").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_TRUE(fs::exists(dir / "lbi" / "path.csv"));
    EXPECT_TRUE(fs::exists(dir / "lbi" / "entry_times.csv"));
    r = invoke({"path", "--problem", problem.string(), "--solver", "iss", "--t-max", "5", "--samples", "11",
                "--format", "json", "--out", (dir / "iss").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto j = io::Json::parse(slurp(dir / "iss" / "path.json"));
    EXPECT_EQ(j["points"].size(), 11u);
    EXPECT_TRUE(fs::exists(dir / "iss" / "segments.json"));
    EXPECT_EQ(invoke({"path", "--problem", problem.string(), "--solver", "admm", "--out", dir.string()}).code,
              cli::kConfigError);
}

TEST(Cli, PathDivergenceIsNumericError) {
    const fs::path dir = fresh_dir("diverge");
    const fs::path problem = write_problem(dir);
    const Outcome r = invoke({"path", "--problem", problem.string(), "--alpha", "1000", "--k-max", "5000", "--out",
                              dir.string()});
    EXPECT_EQ(r.code, cli::kNumericError);
}

TEST(Cli, Diagnose) {
    const fs::path dir = fresh_dir("diag");
    const fs::path problem = write_problem(dir);
    const Outcome r = invoke({"diagnose", "--problem", problem.string(), "--nu-grid", "1e-2:1e2:5", "--out",
                              dir.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto report = io::Json::parse(slurp(dir / "report.json"));
    EXPECT_TRUE(report.contains("ic0"));
    std::istringstream rows(slurp(dir / "irr_curve.csv"));
    std::string line;
    int count = 0;
    while (std::getline(rows, line)) ++count;
    EXPECT_EQ(count, 6);
}

TEST(Cli, RankTwoItemsAndZeroTime) {
    const fs::path dir = fresh_dir("rank");
    io::write_text((dir / "two.csv").string(), "i,j,y\n1,2,1\n");
    Outcome r = invoke({"rank", "--comparisons", (dir / "two.csv").string(), "--t", "0", "--out",
                        (dir / "t0").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("groups=1"), std::string::npos);

    r = invoke({"rank", "--comparisons", (dir / "two.csv").string(), "--t", "50", "--out", (dir / "t50").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(slurp(dir / "t50" / "groups.csv").substr(0, 21), "item,group,value\n1,1,");
    EXPECT_EQ(slurp(dir / "t50" / "edges.csv"), "from,to\n2,1\n");

    EXPECT_EQ(invoke({"rank", "--comparisons", (dir / "two.csv").string(), "--out", dir.string()}).code,
              cli::kConfigError);
    EXPECT_EQ(invoke({"rank", "--comparisons", (dir / "two.csv").string(), "--t", "1", "--k", "3", "--out",
                      dir.string()}).code,
              cli::kConfigError);
}

TEST(Cli, RankWarnsOnDisconnectedGraph) {
    const fs::path dir = fresh_dir("rank_split");
    io::write_text((dir / "c.csv").string(), "i,j,y\n1,2,1\n3,4,-1\n");
    const Outcome r = invoke({"rank", "--comparisons", (dir / "c.csv").string(), "--t", "1", "--out", dir.string()});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.err.find("2 components"), std::string::npos);
}

TEST(Cli, RankPlantedLevels) {
    const fs::path dir = fresh_dir("rank_planted");
    // 12 teams in three strength levels, every ordered pair once, no noise.
    std::ostringstream csv;
    csv << "i,j,y\n";
    auto level = [](int v) { return v <= 4 ? 2.0 : (v <= 8 ? 0.0 : -2.0); };
    for (int i = 1; i <= 12; ++i)
        for (int j = 1; j <= 12; ++j)
            if (i != j) csv << i << ',' << j << ',' << level(i) - level(j) << '\n';
    io::write_text((dir / "c.csv").string(), csv.str());
    const Outcome r = invoke({"rank", "--comparisons", (dir / "c.csv").string(), "--t", "20", "--kappa", "50",
                              "--tol", "1e-6", "--format", "json", "--out", dir.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto j = io::Json::parse(slurp(dir / "groups.json"));
    ASSERT_EQ(j["groups"].size(), 3u);
    EXPECT_EQ(j["groups"][0]["items"], io::Json({1, 2, 3, 4}));
    EXPECT_EQ(j["groups"][1]["items"], io::Json({5, 6, 7, 8}));
    EXPECT_EQ(j["groups"][2]["items"], io::Json({9, 10, 11, 12}));
}

TEST(Cli, DenoiseConstantImage) {
    const fs::path dir = fresh_dir("denoise");
    io::write_matrix_csv((dir / "c1.csv").string(), Matrix::Constant(3, 4, 0.7));
    const Outcome r = invoke({"denoise", "--channels", (dir / "c1.csv").string(), "--t", "0.5,2", "--out",
                              dir.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    for (const char* name : {"denoise_t0.5_ch1.csv", "denoise_t2_ch1.csv"}) {
        const Matrix img = io::read_matrix_csv((dir / name).string());
        ASSERT_EQ(img.rows(), 3);
        EXPECT_LT((img.array() - img(0, 0)).abs().maxCoeff(), 1e-12);
    }
}

TEST(Cli, DenoiseChannelShapeMismatch) {
    const fs::path dir = fresh_dir("denoise_bad");
    io::write_matrix_csv((dir / "a.csv").string(), Matrix::Zero(2, 2));
    io::write_matrix_csv((dir / "b.csv").string(), Matrix::Zero(2, 3));
    const Outcome r = invoke({"denoise", "--channels", (dir / "a.csv").string() + "," + (dir / "b.csv").string(),
                              "--out", dir.string()});
    EXPECT_EQ(r.code, cli::kConfigError);
}
