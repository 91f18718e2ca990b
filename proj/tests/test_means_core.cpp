#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "meanx/means_core.hpp"
#include "meanx/scalar_means.hpp"

using namespace meanx;

namespace {

MeanSpec<double> right_trivial() {
  MeanSpec<double> m;
  m.arity = 2;
  m.evaluate = [](std::span<const double> xs) { return xs[1]; };
  return m;
}

}  // namespace

TEST_CASE("tuple diameter is the largest pairwise distance") {
  auto space = scalar::absolute_metric();
  std::vector<double> xs = {1.0, 4.0, 2.0};
  CHECK(tuple_diameter(space, std::span<const double>(xs)) == doctest::Approx(3.0));
  std::vector<double> one = {7.0};
  CHECK(tuple_diameter(space, std::span<const double>(one)) == 0.0);
}

TEST_CASE("barycentric step evaluates the mean on each deleted tuple") {
  auto g = scalar::geometric_mean();
  std::vector<double> xs = {1.0, 4.0, 16.0};
  auto stepped = barycentric_step(g, std::span<const double>(xs));
  REQUIRE(stepped.size() == 3);
  CHECK(stepped[0] == doctest::Approx(8.0));
  CHECK(stepped[1] == doctest::Approx(4.0));
  CHECK(stepped[2] == doctest::Approx(2.0));
}

TEST_CASE("the starred step is the reversal of the plain step") {
  auto m = scalar::weighted_affine(2.0 / 3.0);
  std::vector<double> xs = {1.0, 2.0, 5.0};
  auto plain = barycentric_step(m, std::span<const double>(xs));
  auto starred = barycentric_step_star(m, std::span<const double>(xs));
  REQUIRE(plain.size() == 3);
  REQUIRE(starred.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(starred[i] == doctest::Approx(plain[2 - i]));
  // first starred entry applies the mean to the first two coordinates
  CHECK(starred[0] == doctest::Approx((2.0 / 3.0) * 1.0 + (1.0 / 3.0) * 2.0));
}

TEST_CASE("power convergence of the arithmetic mean finds the 3-variable average") {
  auto space = scalar::absolute_metric();
  auto mean = scalar::arithmetic_mean();
  std::vector<double> xs = {0.0, 1.0, 2.0};
  auto report = power_converge(space, mean, std::span<const double>(xs), 1e-12, 1000);
  CHECK(report.converged);
  CHECK(report.limit == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(report.mean_arity == 2);
  REQUIRE(!report.diameter_trace.empty());
  CHECK(report.diameter_trace.front() == doctest::Approx(2.0));
  CHECK(report.iterations == static_cast<int>(report.diameter_trace.size()) - 1);
  REQUIRE(report.rho.has_value());
  CHECK(*report.rho == doctest::Approx(0.5));
  for (std::size_t n = 0; n < report.diameter_trace.size(); ++n)
    CHECK(report.diameter_trace[n] <=
          2.0 * std::pow(0.5, static_cast<double>(n)) * 2.0 + 1e-12);
}

TEST_CASE("constant tuples converge without iterating") {
  auto space = scalar::absolute_metric();
  auto mean = scalar::arithmetic_mean();
  std::vector<double> xs = {3.0, 3.0, 3.0};
  auto report = power_converge(space, mean, std::span<const double>(xs), 1e-12, 1000);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  REQUIRE(report.diameter_trace.size() == 1);
  CHECK(report.diameter_trace[0] == 0.0);
  CHECK(report.limit == 3.0);
}

TEST_CASE("both variants extend a symmetric mean to the same limit") {
  auto space = scalar::log_metric();
  auto g = scalar::geometric_mean();
  auto g3 = beta_extend(space, g, 1e-12, 1000, BarycentricVariant::Beta);
  auto g3s = beta_extend(space, g, 1e-12, 1000, BarycentricVariant::BetaStar);
  std::vector<double> xs = {1.0, 4.0, 16.0};
  CHECK(g3(xs) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(g3s(xs) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(g3.arity == 3);
  CHECK(g3.symmetric);
  REQUIRE(g3.declared_rho.has_value());
  CHECK(*g3.declared_rho == doctest::Approx(0.5));
}

TEST_CASE("extending the lopsided affine mean gives distinct variant weights") {
  auto space = scalar::absolute_metric();
  auto m = scalar::weighted_affine(2.0 / 3.0);
  auto beta = beta_extend(space, m, 1e-12, 10000, BarycentricVariant::Beta);
  auto star = beta_extend(space, m, 1e-12, 10000, BarycentricVariant::BetaStar);

  std::vector<double> e1 = {1.0, 0.0, 0.0};
  std::vector<double> e2 = {0.0, 1.0, 0.0};
  std::vector<double> e3 = {0.0, 0.0, 1.0};
  CHECK(beta(e1) == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(beta(e2) == doctest::Approx(0.35).epsilon(1e-8));
  CHECK(beta(e3) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(star(e1) == doctest::Approx(4.0 / 7.0).epsilon(1e-8));
  CHECK(star(e2) == doctest::Approx(2.0 / 7.0).epsilon(1e-8));
  CHECK(star(e3) == doctest::Approx(1.0 / 7.0).epsilon(1e-8));
}

TEST_CASE("arity mismatches are rejected") {
  auto space = scalar::log_metric();
  auto g3 = beta_extend(space, scalar::geometric_mean(), 1e-12, 1000);
  std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(g3(two), DimensionError);
  std::vector<double> three = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(
      power_converge(space, g3, std::span<const double>(three), 1e-12, 100),
      DimensionError);
  CHECK_THROWS_AS(
      power_converge(space, g3, std::span<const double>(three), -1.0, 100),
      DomainError);
}

TEST_CASE("the right-trivial mean oscillates and reports non-convergence") {
  auto space = scalar::absolute_metric();
  auto m = right_trivial();
  std::vector<double> xs = {1.0, 2.0, 3.0};
  auto report = power_converge(space, m, std::span<const double>(xs), 1e-9, 60);
  CHECK(!report.converged);
  CHECK(report.iterations == 60);
  CHECK(report.diameter_trace.back() > 0.5);

  auto ext = beta_extend(space, m, 1e-9, 50);
  try {
    ext(xs);
    FAIL("extension of an oscillating mean must not converge");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 50);
    CHECK(e.last_gap() > 0.5);
    CHECK(e.kind() == ErrorKind::Convergence);
  }
}

TEST_CASE("the tower of arithmetic extensions recovers the average") {
  auto space = scalar::absolute_metric();
  auto levels = extend_tower(space, scalar::arithmetic_mean(), 5, 1e-12, 10000);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].arity == 3);
  CHECK(levels[1].arity == 4);
  CHECK(levels[2].arity == 5);
  for (const auto& level : levels) {
    CHECK(level.symmetric);
    REQUIRE(level.declared_rho.has_value());
    CHECK(*level.declared_rho == doctest::Approx(0.5));
  }
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(levels[2](xs) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("extensions are invariant under the barycentric step") {
  auto space = scalar::log_metric();
  auto g = scalar::geometric_mean();
  auto g3 = beta_extend(space, g, 1e-12, 10000);
  std::vector<double> xs = {1.0, 4.0, 16.0};
  CHECK(beta_invariance_residual(space, g3, g, std::span<const double>(xs)) <= 1e-10);
}

TEST_CASE("stable reduction solves mean(anchor, x) = x") {
  auto abs_space = scalar::absolute_metric();
  auto a3 = beta_extend(abs_space, scalar::arithmetic_mean(), 1e-13, 10000);
  std::vector<double> anchor = {1.0, 5.0};
  const double reduced =
      stable_reduce(abs_space, a3, std::span<const double>(anchor), 1e-12, 500);
  CHECK(reduced == doctest::Approx(3.0).epsilon(1e-9));

  auto log_space = scalar::log_metric();
  auto g3 = beta_extend(log_space, scalar::geometric_mean(), 1e-13, 10000);
  std::vector<double> ganchor = {1.0, 4.0};
  CHECK(stable_reduce(log_space, g3, std::span<const double>(ganchor), 1e-12, 500) ==
        doctest::Approx(2.0).epsilon(1e-9));

  CHECK(stable_extension_residual(log_space, g3, scalar::geometric_mean(),
                                  std::span<const double>(ganchor)) <= 1e-10);
}

TEST_CASE("stable reduction requires a declared contraction factor") {
  auto space = scalar::absolute_metric();
  auto m = right_trivial();
  auto ext = m;
  ext.arity = 3;
  ext.evaluate = [](std::span<const double> xs) { return xs[2]; };
  std::vector<double> anchor = {1.0, 2.0};
  CHECK_THROWS_AS(
      stable_reduce(space, ext, std::span<const double>(anchor), 1e-10, 100),
      DomainError);
}

TEST_CASE("product means converge componentwise") {
  auto space = product_space(scalar::absolute_metric(), scalar::log_metric());
  auto mean = product_mean(scalar::arithmetic_mean(), scalar::geometric_mean());
  REQUIRE(mean.declared_rho.has_value());
  CHECK(*mean.declared_rho == doctest::Approx(0.5));

  std::vector<std::pair<double, double>> xs = {{1.0, 1.0}, {2.0, 4.0}, {3.0, 16.0}};
  auto report = power_converge(space, mean, std::span<const std::pair<double, double>>(xs),
                               1e-12, 10000);
  CHECK(report.converged);
  CHECK(report.limit.first == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report.limit.second == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("log carries the geometric mean onto the arithmetic mean") {
  std::function<double(const double&)> g = [](const double& x) { return std::log(x); };
  std::vector<double> xs = {2.0, 8.0};
  const double res =
      homomorphism_residual(scalar::absolute_metric(), g, scalar::geometric_mean(),
                            scalar::arithmetic_mean(), std::span<const double>(xs));
  CHECK(res <= 1e-14);
}

TEST_CASE("contraction estimates probe the second coordinate") {
  auto space = scalar::absolute_metric();
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(1.0, 2.0);

  auto affine = scalar::weighted_affine(0.7);
  auto est = estimate_contraction(space, affine, 100, [&] { return u(gen); });
  CHECK(est.rho == doctest::Approx(0.3).epsilon(1e-12));

  MeanSpec<double> left;
  left.arity = 2;
  left.evaluate = [](std::span<const double> xs) { return xs[0]; };
  auto zero = estimate_contraction(space, left, 100, [&] { return u(gen); });
  CHECK(zero.rho == 0.0);
}
