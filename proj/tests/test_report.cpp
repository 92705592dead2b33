#include <presist/report.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace presist;

TEST(Report, StrictSides) {
    EXPECT_EQ(strict_report("x", 2.0, 1.0, Side::Lower).status, Status::Pass);
    EXPECT_EQ(strict_report("x", 1.0, 2.0, Side::Lower).status, Status::Fail);
    EXPECT_EQ(strict_report("x", 1.0, 2.0, Side::Upper).status, Status::Pass);
    EXPECT_EQ(strict_report("x", 1.0 + 5e-10, 1.0, Side::Upper).status, Status::Pass);
    EXPECT_EQ(strict_report("x", 1.0 + 1e-8, 1.0, Side::Upper).status, Status::Fail);
    const auto r = strict_report("x", 3.0, 4.0, Side::Upper, {{"p", 2}});
    EXPECT_DOUBLE_EQ(r.ratio, 0.75);
    EXPECT_EQ(r.params.size(), 1u);
}

TEST(Report, RatioReportsAreInformational) {
    const auto r = ratio_report("x", 10, 0.5, Side::Lower);
    EXPECT_EQ(r.status, Status::Informational);
    EXPECT_DOUBLE_EQ(r.ratio, 20);
    std::vector<BoundReport> v{r, strict_report("y", 1, 2, Side::Upper)};
    EXPECT_TRUE(all_pass(v));
    v.push_back(strict_report("z", 3, 2, Side::Upper));
    EXPECT_FALSE(all_pass(v));
}

TEST(Report, Spread) {
    std::vector<BoundReport> v{ratio_report("a", 1, 1, Side::Lower), ratio_report("a", 3, 1, Side::Lower),
                               ratio_report("a", 2, 1, Side::Lower)};
    EXPECT_DOUBLE_EQ(ratio_spread(v), 3.0);
    EXPECT_DOUBLE_EQ(ratio_spread(std::vector<BoundReport>{}), 1.0);
}

TEST(Report, Csv) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    Table t{{"a", "b"}, {{"1", "x,y"}}};
    EXPECT_EQ(to_csv(t), "a,b\n1,\"x,y\"\n");
    const std::vector<BoundReport> one{strict_report("q", 1, 2, Side::Upper, {{"r", 3}})};
    const auto table = reports_table(one);
    EXPECT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(to_csv(table), "quantity,side,computed,bound,ratio,status,params\nq,upper,1,2,0.5,PASS,r=3\n");
}

TEST(Report, RealFormattingRoundTrips) {
    for (double x : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(format_real(x)), x);
    EXPECT_EQ(format_real(2.0), "2");
    EXPECT_EQ(format_real(INFINITY), "inf");
}

TEST(Report, Summary) {
    const std::vector<BoundReport> v{strict_report("a", 1, 2, Side::Upper), ratio_report("b", 1, 2, Side::Upper)};
    const auto s = reports_summary(v);
    EXPECT_NE(s.find("pass: 1\n"), std::string::npos);
    EXPECT_NE(s.find("informational: 1\n"), std::string::npos);
    EXPECT_NE(s.find("status: PASS\n"), std::string::npos);
}
