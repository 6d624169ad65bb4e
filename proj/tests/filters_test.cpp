#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "trigwave/errors.hpp"
#include "trigwave/filters.hpp"

namespace trigwave {
namespace {

using std::numbers::pi;

TEST(Sinc, Values) {
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_NEAR(sinc(pi), 0.0, 1e-16);
  EXPECT_NEAR(sinc(pi / 2), 2 / pi, 1e-16);
  EXPECT_EQ(sinc(-0.7), sinc(0.7));
}

TEST(Sinc, SeriesBranchIsAccurate) {
  // Compare against a long Taylor sum in long double.
  for (double xi : {1e-9, 1e-6, 3e-5, 9.9e-5, 1.01e-4, 2e-4}) {
    long double x2 = static_cast<long double>(xi) * xi, term = 1, sum = 1;
    for (int k = 1; k < 8; ++k) {
      term *= -x2 / ((2 * k) * (2 * k + 1));
      sum += term;
    }
    EXPECT_NEAR(sinc(xi), static_cast<double>(sum), 2e-16) << xi;
  }
}

TEST(Indicator, ClosedInterval) {
  EXPECT_EQ(indicator_pi(pi), 1.0);
  EXPECT_EQ(indicator_pi(-pi), 1.0);
  EXPECT_EQ(indicator_pi(std::nextafter(pi, 4.0)), 0.0);
  EXPECT_EQ(indicator_pi(0.0), 1.0);
}

TEST(MethodFilters, Catalog) {
  const auto c = method_filters("C");
  for (double xi : {0.1, 1.0, 2.5, 7.0}) {
    EXPECT_DOUBLE_EQ(c.psi(xi), sinc(xi) * sinc(xi));
    EXPECT_DOUBLE_EQ(c.phi(xi), sinc(xi));
  }
  const auto b = method_filters("B");
  EXPECT_NEAR(b.psi(pi), 0.0, 1e-16);
  EXPECT_EQ(b.phi(pi), 1.0);
  EXPECT_EQ(b.psi1(pi), 1.0);
  EXPECT_DOUBLE_EQ(b.psi0(pi), -1.0);

  const auto bt = method_filters("Btilde");
  EXPECT_EQ(bt.psi(3.5), 0.0);
  EXPECT_EQ(bt.phi(3.5), 0.0);
  EXPECT_EQ(bt.psi0(3.5), 0.0);
  EXPECT_EQ(bt.psi1(3.5), 0.0);
  EXPECT_EQ(bt.phi(pi), 1.0);

  const auto g = method_filters("G");
  EXPECT_DOUBLE_EQ(g.psi(1.3), std::pow(sinc(1.3), 3));
  EXPECT_DOUBLE_EQ(g.phi(1.3), sinc(1.3));
  const auto e = method_filters("E");
  EXPECT_DOUBLE_EQ(e.psi(1.3), sinc(1.3) * sinc(1.3));
  EXPECT_EQ(e.phi(1.3), 1.0);

  EXPECT_THROW(method_filters("A"), InvalidArgument);
  EXPECT_THROW(method_filters("c"), InvalidArgument);
}

TEST(MethodFilters, NormalizedAtZero) {
  for (auto name : kMethodNames) {
    const auto fs = method_filters(name);
    EXPECT_NEAR(fs.psi(0), 1.0, 1e-14);
    EXPECT_NEAR(fs.phi(0), 1.0, 1e-14);
    EXPECT_NEAR(fs.psi0(0), 1.0, 1e-14);
    EXPECT_NEAR(fs.psi1(0), 1.0, 1e-14);
  }
}

TEST(MethodFilters, SymmetricCompletionIsExact) {
  const auto xi = logspace(1e-3, 1e3, 500);
  for (auto name : kMethodNames) {
    const auto fs = method_filters(name);
    for (double x : xi) {
      EXPECT_NEAR(fs.psi(x), sinc(x) * fs.psi1(x), 1e-15) << name << " " << x;
      EXPECT_NEAR(fs.psi0(x), std::cos(x) * fs.psi1(x), 1e-15) << name << " " << x;
    }
  }
}

TEST(FilterSet, RejectsUnnormalized) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(FilterSet("bad", [](double) { return 0.5; }, one, one, one), InvalidArgument);
  EXPECT_NO_THROW(FilterSet("ok", one, one, one, one));
}

TEST(FilterSet, Tabulated) {
  const auto fs = FilterSet::tabulated("t", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.0}, {1, 1, 1},
                                       {1, 1, 1}, {1, 1, 1});
  EXPECT_DOUBLE_EQ(fs.psi(0.5), 0.75);
  EXPECT_DOUBLE_EQ(fs.psi(1.5), 0.25);
  EXPECT_DOUBLE_EQ(fs.psi(10.0), 0.0);
  EXPECT_DOUBLE_EQ(fs.psi(-0.5), 0.75);
  EXPECT_THROW(FilterSet::tabulated("t", {0.5, 1.0}, {1, 1}, {1, 1}, {1, 1}, {1, 1}),
               InvalidArgument);
  EXPECT_THROW(FilterSet::tabulated("t", {0.0, 1.0}, {2, 1}, {1, 1}, {1, 1}, {1, 1}),
               InvalidArgument);
}

TEST(Symmetry, Catalog) {
  const auto xi = logspace(1e-3, 1e2, 300);
  auto check = [&](std::string_view m) { return check_symmetry_symplecticity(method_filters(m), xi); };
  EXPECT_TRUE(check("C").symmetric);
  EXPECT_TRUE(check("C").symplectic);
  EXPECT_TRUE(check("B").symmetric);
  EXPECT_TRUE(check("B").symplectic);
  EXPECT_TRUE(check("E").symmetric);
  EXPECT_FALSE(check("E").symplectic);
  EXPECT_TRUE(check("G").symmetric);
  EXPECT_FALSE(check("G").symplectic);
  EXPECT_TRUE(check("Btilde").symmetric);
  EXPECT_TRUE(check("Btilde").symplectic);
}

TEST(Symmetry, BrokenPsi0) {
  const auto fs = method_filters("C").with_psi0([](double) { return 1.0; }, "C-psi0=1");
  const std::vector<double> at_pi = {pi};
  EXPECT_FALSE(check_symmetry_symplecticity(fs, at_pi).symmetric);
}

TEST(Logspace, Endpoints) {
  const auto xi = logspace(1e-3, 1e3, 2000);
  ASSERT_EQ(xi.size(), 2000u);
  EXPECT_DOUBLE_EQ(xi.front(), 1e-3);
  EXPECT_NEAR(xi.back(), 1e3, 1e-10);
  for (std::size_t i = 1; i < xi.size(); ++i) EXPECT_GT(xi[i], xi[i - 1]);
  EXPECT_EQ(default_xi_samples(), xi);
}

TEST(Assumption, CatalogPassesWithCTwo) {
  const auto xi = default_xi_samples();
  for (auto name : kMethodNames)
    for (double beta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const auto report = check_assumption(method_filters(name), beta, 2.0, xi);
      EXPECT_TRUE(report.passed()) << name << " beta=" << beta << " first violation at xi="
                                   << (report.violations.empty() ? 0 : report.violations[0].xi);
    }
}

TEST(Assumption, MethodBAtPi) {
  const std::vector<double> at_pi = {pi};
  EXPECT_TRUE(check_assumption(method_filters("B"), -1.0, 2.0, at_pi).passed());
}

TEST(Assumption, ConstructedViolation) {
  auto one = [](double) { return 1.0; };
  const FilterSet fs("phi=1+xi", one, [](double x) { return 1.0 + x; }, one, one);
  const std::vector<double> at_one = {1.0};
  const auto report = check_assumption(fs, 0.0, 1.0, at_one);
  ASSERT_FALSE(report.passed());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.bound == FilterBound::phi_bounded) {
      found = true;
      EXPECT_EQ(v.xi, 1.0);
      EXPECT_DOUBLE_EQ(v.lhs, 2.0);
      EXPECT_DOUBLE_EQ(v.rhs, 1.0);
    }
  EXPECT_TRUE(found);
}

TEST(Assumption, ValidatesArguments) {
  const auto fs = method_filters("C");
  const std::vector<double> xi = {1.0};
  EXPECT_THROW(check_assumption(fs, 1.5, 2.0, xi), InvalidArgument);
  EXPECT_THROW(check_assumption(fs, -1.01, 2.0, xi), InvalidArgument);
  EXPECT_THROW(check_assumption(fs, 0.0, 0.0, xi), InvalidArgument);
  const std::vector<double> bad = {0.0};
  EXPECT_THROW(check_assumption(fs, 0.0, 2.0, bad), InvalidArgument);
}

}  // namespace
}  // namespace trigwave
