#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "mechcomplete_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Result cli(const std::string& args, const fs::path& work) {
    const auto log = work / "stdout.txt";
    const std::string cmd = std::string("\"") + MECHCOMPLETE_BIN + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

}  // namespace

TEST(Cli, PlanReportsDrainedAndActivation) {
    const auto dir = scratch("plan");
    const auto r = cli("plan", dir);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("regime: drained"), std::string::npos);
    EXPECT_NE(r.out.find("activated: darcy_flow"), std::string::npos);
}

TEST(Cli, PlanUndrainedWithOverride) {
    const auto dir = scratch("plan_tight");
    const auto r = cli("plan --set material.k=1e-20", dir);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("regime: undrained"), std::string::npos);
    EXPECT_EQ(r.out.find("activated:"), std::string::npos);
}

TEST(Cli, GraphToFile) {
    const auto dir = scratch("graph");
    const auto r = cli("graph -o \"" + (dir / "g.dot").string() + "\"", dir);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(slurp(dir / "g.dot").find("digraph"), std::string::npos);
}

TEST(Cli, NaiveRunExitsWithFailureCode) {
    const auto dir = scratch("naive");
    const auto r = cli("run --mode naive -o \"" + (dir / "out").string() + "\"", dir);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("verdict: tensile_failure"), std::string::npos);
}

TEST(Cli, AutoAndCompletedByteIdentical) {
    const auto dir = scratch("modes");
    ASSERT_EQ(cli("run --mode auto -o \"" + (dir / "auto").string() + "\"", dir).code, 0);
    ASSERT_EQ(cli("run --mode completed -o \"" + (dir / "completed").string() + "\"", dir).code, 0);
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(dir / "auto")) {
        const auto name = e.path().filename();
        ASSERT_TRUE(fs::exists(dir / "completed" / name)) << name;
        EXPECT_EQ(slurp(e.path()), slurp(dir / "completed" / name)) << name;
        ++compared;
    }
    EXPECT_GE(compared, 6u);
}

TEST(Cli, ManifestListsEveryFile) {
    const auto dir = scratch("manifest");
    ASSERT_EQ(cli("run -o \"" + (dir / "out").string() + "\"", dir).code, 0);
    const auto manifest = slurp(dir / "out" / "MANIFEST.txt");
    for (const auto& e : fs::directory_iterator(dir / "out")) {
        const auto name = e.path().filename().string();
        if (name == "MANIFEST.txt") continue;
        EXPECT_NE(manifest.find(name + "\t"), std::string::npos) << name;
    }
}

TEST(Cli, RunIsDeterministic) {
    const auto dir = scratch("determinism");
    ASSERT_EQ(cli("run -o \"" + (dir / "a").string() + "\"", dir).code, 0);
    ASSERT_EQ(cli("run -o \"" + (dir / "b").string() + "\"", dir).code, 0);
    EXPECT_EQ(slurp(dir / "a" / "trace.csv"), slurp(dir / "b" / "trace.csv"));
    EXPECT_EQ(slurp(dir / "a" / "snapshot_uw_t175.0.txt"), slurp(dir / "b" / "snapshot_uw_t175.0.txt"));
}

TEST(Cli, OutputDirFromEnvironment) {
    const auto dir = scratch("env");
    const auto target = dir / "from_env";
    const std::string cmd = "MECHCOMPLETE_OUT=\"" + target.string() + "\" \"" + MECHCOMPLETE_BIN +
                            "\" run --set loading.t_end=5 --set solver.snapshot_times=5 > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(target / "trace.csv"));
}

TEST(Cli, ScenarioFileAccepted) {
    const auto dir = scratch("file");
    const auto r = cli(std::string("plan -s \"") + MECHCOMPLETE_DATA + "/scenarios/rothbach_sandstone.json\"", dir);
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, ConfigErrorsExitTwo) {
    const auto dir = scratch("errors");
    EXPECT_EQ(cli("plan -s /nonexistent/scenario.json", dir).code, 2);
    EXPECT_EQ(cli("plan --set material.k=abc", dir).code, 2);
    EXPECT_EQ(cli("verify --suite nope -o \"" + (dir / "v").string() + "\"", dir).code, 2);
    EXPECT_EQ(cli("frobnicate", dir).code, 2);
    EXPECT_EQ(cli("run --mode sideways", dir).code, 2);
}

TEST(Cli, NumericalFailureExitsFour) {
    const auto dir = scratch("numerical");
    const auto r = cli("run --set solver.max_sweeps=1 --set solver.residual_tol=1e-9 -o \"" + (dir / "o").string() + "\"", dir);
    EXPECT_EQ(r.code, 4) << r.out;
}

TEST(Cli, VerifySingleSuite) {
    const auto dir = scratch("verify");
    const auto r = cli("verify --suite capillary -o \"" + (dir / "v").string() + "\"", dir);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(dir / "v" / "capillary" / "report.txt"));
    EXPECT_NE(slurp(dir / "v" / "MANIFEST.txt").find("capillary/capillary_rise.csv"), std::string::npos);
}

TEST(Cli, SweepPrintsSortedCsv) {
    const auto dir = scratch("sweep");
    const auto r = cli("sweep --param k --values 1e-16,1e-20 --jobs 2 --set loading.t_end=20 --set solver.snapshot_times=20 -o \"" +
                           (dir / "s").string() + "\"",
                       dir);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_LT(r.out.find("1e-20"), r.out.find("1e-16"));
    EXPECT_TRUE(fs::exists(dir / "s" / "sweep.csv"));
}
