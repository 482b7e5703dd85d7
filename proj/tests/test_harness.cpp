#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "p2nc/harness.hpp"

namespace p2nc {
namespace {

TEST(Levels, Mapping)
{
    EXPECT_EQ(level_to_n(1), 1);
    EXPECT_EQ(level_to_n(4), 8);
    EXPECT_THROW((void)level_to_n(0), InvalidArgument);
    EXPECT_THROW((void)level_to_n(13), InvalidArgument);
}

TEST(Rates, ObservedRate)
{
    EXPECT_DOUBLE_EQ(observed_rate(8.0, 1.0), 3.0);
    EXPECT_DOUBLE_EQ(observed_rate(0.545 * 4.0, 0.545), 2.0);
}

class ConvergenceThree : public ::testing::Test {
protected:
    static void SetUpTestSuite() { table_ = new ConvergenceTable(run_convergence(3)); }
    static void TearDownTestSuite() { delete table_; }
    static ConvergenceTable* table_;
};
ConvergenceTable* ConvergenceThree::table_ = nullptr;

TEST_F(ConvergenceThree, RowsAndRates)
{
    ASSERT_EQ(table_->rows.size(), 3u);
    EXPECT_FALSE(table_->rows[0].rate_l2_velocity.has_value());
    for (std::size_t k = 1; k < 3; ++k) {
        const auto& r = table_->rows[k];
        const auto& prev = table_->rows[k - 1];
        EXPECT_EQ(r.n, 2 * prev.n);
        EXPECT_NEAR(r.errors.h, 0.5 * prev.errors.h, 1e-12);
        ASSERT_TRUE(r.rate_l2_velocity.has_value());
        EXPECT_DOUBLE_EQ(*r.rate_l2_velocity, std::log2(prev.errors.l2_velocity / r.errors.l2_velocity));
        EXPECT_DOUBLE_EQ(*r.rate_h1_broken, std::log2(prev.errors.h1_broken / r.errors.h1_broken));
        EXPECT_DOUBLE_EQ(*r.rate_l2_pressure, std::log2(prev.errors.l2_pressure / r.errors.l2_pressure));
        EXPECT_LT(r.errors.l2_velocity, prev.errors.l2_velocity);
    }
}

TEST_F(ConvergenceThree, CsvLayout)
{
    const std::string csv = to_csv(*table_);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "level,h,l2_velocity,rate_l2_velocity,h1_broken,rate_h1_broken,l2_pressure,rate_l2_pressure");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("1,", 0), 0u);
    EXPECT_NE(line.find(",,"), std::string::npos); // empty first-row rates
    int rows = 1;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    }
    EXPECT_EQ(rows, 3);
}

TEST_F(ConvergenceThree, JsonLayout)
{
    const auto j = to_json(*table_);
    ASSERT_TRUE(j.contains("levels"));
    ASSERT_EQ(j["levels"].size(), 3u);
    EXPECT_TRUE(j["levels"][0]["rates"]["l2_velocity"].is_null());
    EXPECT_EQ(j["levels"][2]["level"], 3);
    EXPECT_EQ(j["levels"][2]["n"], 4);
    EXPECT_DOUBLE_EQ(j["levels"][2]["errors"]["l2_velocity"].get<double>(), table_->rows[2].errors.l2_velocity);
    EXPECT_FALSE(format_table(*table_).empty());
}

TEST_F(ConvergenceThree, Deterministic)
{
    const auto again = run_convergence(3);
    EXPECT_EQ(to_csv(again), to_csv(*table_));
}

TEST(Convergence, LevelCap)
{
    EXPECT_THROW((void)run_convergence(5), InvalidArgument);
    EXPECT_THROW((void)run_convergence(0), InvalidArgument);
}

TEST(Convergence, InfSupColumn)
{
    ConvergenceConfig cfg;
    cfg.with_infsup = true;
    const auto t = run_convergence(2, cfg);
    ASSERT_TRUE(t.rows[1].beta.has_value());
    EXPECT_GT(*t.rows[1].beta, 0.0);
}

TEST(Suites, ParseAndName)
{
    for (const char* name : {"dofs", "jumps", "unisolvence", "infsup"}) {
        EXPECT_EQ(suite_name(parse_suite(name)), name);
    }
    EXPECT_THROW((void)parse_suite("bogus"), InvalidArgument);
}

TEST(Suites, AllPass)
{
    for (Suite s : {Suite::Dofs, Suite::Jumps, Suite::Unisolvence}) {
        const auto rep = verify(s);
        EXPECT_TRUE(rep.passed()) << rep.to_json().dump(2);
        EXPECT_FALSE(rep.checks.empty());
    }
    VerifyOptions opt;
    opt.level = 2;
    EXPECT_TRUE(verify(Suite::InfSup, opt).passed());
    opt.level = 4;
    EXPECT_THROW((void)verify(Suite::InfSup, opt), InvalidArgument);
}

TEST(Suites, FailureReportListsFailures)
{
    VerifyReport rep;
    rep.suite = "demo";
    rep.checks.push_back({"ok", true, 0.0, 1.0, ""});
    rep.checks.push_back({"bad", false, 2.0, 1.0, "too big"});
    EXPECT_FALSE(rep.passed());
    const auto j = rep.to_json();
    ASSERT_TRUE(j.contains("failures"));
    ASSERT_EQ(j["failures"].size(), 1u);
    EXPECT_EQ(j["failures"][0], "bad");
}

TEST(RandomTet, PositiveAndNonDegenerate)
{
    std::mt19937_64 rng(0);
    for (int k = 0; k < 100; ++k) {
        const auto v = random_tet(rng);
        const double det = (v[1] - v[0]).dot((v[2] - v[0]).cross(v[3] - v[0]));
        EXPECT_GT(det, 0.0);
    }
}

} // namespace
} // namespace p2nc
