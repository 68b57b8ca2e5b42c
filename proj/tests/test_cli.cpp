#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "lve/record.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const fs::path& dir)
{
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + std::string(LVECLI_PATH) + "' " + args + " > '" +
                            out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, lve::read_text(out.string())};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("lvecli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

} // namespace

TEST_F(Cli, KernelValues)
{
    const auto r = run("kernel -p 2 -z 0.1 --json k.json --csv k.csv", dir);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rec = lve::load_json((dir / "k.json").string());
    ASSERT_GE(rec.results.size(), 3u);
    EXPECT_NEAR(rec.results[0].value.real(), 1.127017, 1e-6);
    EXPECT_NEAR(rec.results[1].value.real(), 1.290994, 1e-6);
    EXPECT_NEAR(rec.results[2].value.real(), 0.255413, 1e-6);
    EXPECT_EQ(lve::load_csv((dir / "k.csv").string()), rec.results);
}

TEST_F(Cli, KernelOrigin)
{
    const auto r = run("kernel -p 3 -z 0 --json k.json", dir);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rec = lve::load_json((dir / "k.json").string());
    EXPECT_EQ(rec.results[0].value, lve::cplx(1.0));
    EXPECT_EQ(rec.results[1].value, lve::cplx(1.0));
    EXPECT_EQ(rec.results[2].value, lve::cplx(0.0));
}

TEST_F(Cli, ExitCodes)
{
    EXPECT_EQ(run("kernel -p 2 -z 0.3", dir).code, 2);
    EXPECT_EQ(run("kernel -p 2 -z nonsense", dir).code, 2);
    EXPECT_EQ(run("oracle -p 2 -l -0.1", dir).code, 2);
    EXPECT_NE(run("kernel -p 1 -z 0.1", dir).code, 0);
    EXPECT_EQ(run("oracle -p 2 -l 0.1 --tol 1e-19", dir).code, 3);
}

TEST_F(Cli, OracleDiscrepancies)
{
    for (const std::string l : {"0.1", "0.1+0.1i"}) {
        const auto r = run("oracle -p 3 -l " + l + " --json o.json", dir);
        ASSERT_EQ(r.code, 0) << r.out;
        const auto rec = lve::load_json((dir / "o.json").string());
        EXPECT_LT(std::abs(rec.results[4].value), 1e-8);
        EXPECT_LT(std::abs(rec.results[5].value), 1e-8);
    }
    const auto r = run("oracle -p 2 -l 0 --json o.json", dir);
    ASSERT_EQ(r.code, 0);
    const auto rec = lve::load_json((dir / "o.json").string());
    EXPECT_EQ(rec.results[0].value, lve::cplx(1.0));
    EXPECT_EQ(rec.results[1].value, lve::cplx(1.0));
}

TEST_F(Cli, LveFreeTheory)
{
    const auto r = run("lve -p 2 -l 0 -n 3 --json l.json", dir);
    ASSERT_EQ(r.code, 0) << r.out;
    for (const auto& n : lve::load_json((dir / "l.json").string()).results)
        if (n.name.starts_with("order")) EXPECT_EQ(n.value, lve::cplx(0.0));
}

TEST_F(Cli, LveRerunIsByteIdentical)
{
    ASSERT_EQ(run("lve -p 2 -l 0.05 -n 3 -s 2000 --seed 9 --json a.json", dir).code, 0);
    ASSERT_EQ(run("lve -p 2 -l 0.05 -n 3 -s 2000 --seed 9 --threads 3 --json b.json", dir).code, 0);
    EXPECT_EQ(lve::read_text((dir / "a.json").string()), lve::read_text((dir / "b.json").string()));
    ASSERT_EQ(run("lve -p 2 -l 0.05 -n 3 -s 2000 --seed 10 --json c.json", dir).code, 0);
    EXPECT_NE(lve::read_text((dir / "a.json").string()), lve::read_text((dir / "c.json").string()));
}

TEST_F(Cli, SeriesAndBoundFit)
{
    auto r = run("series -p 3 -n 4 -l 0.01 --csv s.csv", dir);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rows = lve::load_csv((dir / "s.csv").string());
    EXPECT_EQ(rows[0].name, "fuss_catalan[0]");
    EXPECT_EQ(rows[3 * 4].value, lve::cplx(55.0));
    r = run("bound-fit -p 2 --eps 0.3 --qmax 8 --quick --json b.json", dir);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rec = lve::load_json((dir / "b.json").string());
    EXPECT_LE(rec.results[1].value.real(), 4.01);
}

TEST_F(Cli, VerifyKernel)
{
    const auto r = run("verify kernel --quick", dir);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(dir / "verify_kernel.json"));
}

TEST_F(Cli, VerifyNegativeControl)
{
    const auto r = run("verify combinatorics --inject-fault coefficient", dir);
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("combinatorics.divisibility"), std::string::npos);
    const auto summary = nlohmann::json::parse(lve::read_text((dir / "verify_combinatorics.json").string()));
    EXPECT_FALSE(summary["passed"].get<bool>());
}

TEST_F(Cli, OutputDirectoryOverride)
{
    const fs::path out = dir / "out";
    const auto r = run("kernel -p 2 -z -1 --json k.json", dir);
    ASSERT_EQ(r.code, 0);
    const std::string cmd = "cd '" + dir.string() + "' && LVE_OUTPUT_DIR='" + out.string() + "' '" +
                            std::string(LVECLI_PATH) + "' kernel -p 2 -z -1 --json k.json > /dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(lve::read_text((out / "k.json").string()), lve::read_text((dir / "k.json").string()));
}
