#include <doctest.h>

#include <cmath>
#include <vector>

#include "meanx/iterated_means.hpp"
#include "meanx/sampling.hpp"
#include "meanx/scalar_means.hpp"
#include "oracles.hpp"

using namespace meanx;

namespace {

la::Matrix diag2(double a, double b) {
  const std::vector<double> entries{a, b};
  return la::Matrix::diagonal(entries);
}

}  // namespace

TEST_CASE("the Gauss iteration oracle pins the arithmetic-geometric mean") {
  CHECK(oracle::agm(24.0, 6.0) == doctest::Approx(13.4581714817256154).epsilon(1e-13));
  CHECK(oracle::agm(1.0, 1.0) == 1.0);
  CHECK(scalar::agm_mean()(24.0, 6.0) ==
        doctest::Approx(oracle::agm(24.0, 6.0)).epsilon(1e-11));
}

TEST_CASE("the skewed composition is the logarithmic mean") {
  const double closed = scalar::logarithmic_closed_form(24.0, 6.0);
  CHECK(closed == doctest::Approx(12.9842553680006707).epsilon(1e-13));
  CHECK(scalar::logarithmic_mean()(24.0, 6.0) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(oracle::log_mean_iteration(24.0, 6.0) == doctest::Approx(closed).epsilon(1e-11));
}

TEST_CASE("swapping the update order swaps the two composite means") {
  auto space = scalar::log_metric();
  auto lambda = scalar::geometric_mean();
  auto nu = scalar::arithmetic_mean();
  nu.declared_rho.reset();  // arithmetic contracts in its own metric, not this one

  auto iterated = compose(space, lambda, nu, CompositionKind::Iterated, 1e-12, 10000);
  auto skewed = compose(space, lambda, nu, CompositionKind::Skewed, 1e-12, 10000);
  const double agm_value = iterated(24.0, 6.0);
  const double log_value = skewed(24.0, 6.0);
  CHECK(agm_value == doctest::Approx(oracle::agm(24.0, 6.0)).epsilon(1e-10));
  CHECK(log_value ==
        doctest::Approx(scalar::logarithmic_closed_form(24.0, 6.0)).epsilon(1e-10));
  CHECK(agm_value - log_value > 0.4);
}

TEST_CASE("composition gaps halve every round") {
  auto space = scalar::log_metric();
  auto run = compose_run(space, scalar::geometric_mean(), scalar::arithmetic_mean(),
                         CompositionKind::Iterated, 24.0, 6.0, 1e-12, 10000);
  CHECK(run.converged);
  REQUIRE(run.gap_trace.size() >= 3);
  for (std::size_t i = 1; i < run.gap_trace.size(); ++i)
    CHECK(run.gap_trace[i] <= 0.5 * run.gap_trace[i - 1] + 1e-12);
}

TEST_CASE("composition requires a midpoint first factor") {
  auto space = scalar::log_metric();
  auto nu = scalar::arithmetic_mean();

  MeanSpec<double> undeclared = scalar::geometric_mean();
  undeclared.declared_rho.reset();
  CHECK_THROWS_AS(
      compose(space, undeclared, nu, CompositionKind::Iterated, 1e-12, 100), DomainError);

  MeanSpec<double> weak = scalar::geometric_mean();
  weak.declared_rho = 0.9;
  CHECK_THROWS_AS(compose(space, weak, nu, CompositionKind::Iterated, 1e-12, 100),
                  DomainError);

  CHECK_THROWS_AS(compose_run(space, scalar::geometric_mean(), nu,
                              CompositionKind::Iterated, 24.0, 6.0, -1e-12, 100),
                  DomainError);
  CHECK_THROWS_AS(compose_run(space, scalar::geometric_mean(), nu,
                              CompositionKind::Iterated, 24.0, 6.0, 1e-12, 0),
                  DomainError);
}

TEST_CASE("the composite inherits the weaker factor only when it is below one") {
  auto space = scalar::log_metric();
  auto lambda = scalar::geometric_mean();

  auto plain = scalar::arithmetic_mean();
  plain.declared_rho.reset();
  CHECK(!compose(space, lambda, plain, CompositionKind::Iterated, 1e-12, 1000)
             .declared_rho.has_value());

  auto strong = plain;
  strong.declared_rho = 0.8;
  auto with_factor = compose(space, lambda, strong, CompositionKind::Iterated, 1e-12, 1000);
  REQUIRE(with_factor.declared_rho.has_value());
  CHECK(*with_factor.declared_rho == doctest::Approx(0.8));

  auto expanding = plain;
  expanding.declared_rho = 1.2;
  CHECK(!compose(space, lambda, expanding, CompositionKind::Iterated, 1e-12, 1000)
             .declared_rho.has_value());

  CHECK(scalar::agm_mean().symmetric);
  CHECK(!scalar::agm_mean().declared_rho.has_value());
}

TEST_CASE("harmonic-geometric duality") {
  const double direct = scalar::hgm_mean()(2.0, 8.0);
  const double dual = 1.0 / scalar::agm_mean()(0.5, 0.125);
  CHECK(direct == doctest::Approx(dual).epsilon(1e-10));

  sample::Rng rng(13);
  la::Matrix a = sample::random_spd(rng, 3, 0.5, 3.0);
  la::Matrix b = sample::random_spd(rng, 3, 0.5, 3.0);
  la::Matrix h = op::hgm(a, b);
  la::Matrix via_duality =
      la::matrix_inverse(op::agm(la::matrix_inverse(a), la::matrix_inverse(b)));
  CHECK(la::thompson_distance(h, via_duality) <= 1e-7);
}

TEST_CASE("operator composites extend the scalar ones") {
  la::Matrix agm_mat = op::agm(diag2(24.0, 1.0), diag2(6.0, 1.0));
  CHECK(agm_mat(0, 0) == doctest::Approx(oracle::agm(24.0, 6.0)).epsilon(1e-9));
  CHECK(agm_mat(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(agm_mat(0, 1)) <= 1e-9);

  la::Matrix one_a(1), one_b(1);
  one_a(0, 0) = 3.0;
  one_b(0, 0) = 0.7;
  CHECK(op::logarithmic(one_a, one_b, 1e-12)(0, 0) ==
        doctest::Approx(scalar::logarithmic_closed_form(3.0, 0.7)).epsilon(1e-10));
}

TEST_CASE("the operator logarithmic mean matches its representing function") {
  sample::Rng rng(99);
  for (int i = 0; i < 4; ++i) {
    la::Matrix a = sample::random_spd(rng, 3, 0.25, 4.0);
    la::Matrix b = sample::random_spd(rng, 3, 0.25, 4.0);
    la::Matrix composed = op::logarithmic(a, b, 1e-11);
    la::Matrix kubo = op::kubo_ando(scalar::rf_logarithmic(), a, b);
    CHECK(la::thompson_distance(composed, kubo) <= 1e-8);
  }

  la::Matrix wide_a = diag2(24.0, 1.0);
  la::Matrix wide_b = diag2(6.0, 1.0);
  CHECK(la::thompson_distance(op::agm(wide_a, wide_b), op::logarithmic(wide_a, wide_b)) >
        0.01);
}
