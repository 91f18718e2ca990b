// Acceptance gate: one line per numbered criterion, each checked at its
// stated tolerance against closed forms or the independent oracles. The
// process exit code is the number of failing criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "meanx/iterated_means.hpp"
#include "meanx/sampling.hpp"
#include "oracles.hpp"

using namespace meanx;

namespace {

struct Outcome {
  bool pass = true;
  double worst = 0.0;  // largest violation seen; the limit depends on the criterion
};

void take(Outcome& o, double violation, double limit) {
  if (violation > o.worst) o.worst = violation;
  if (!(violation <= limit)) o.pass = false;
}

la::Matrix diag2(double a, double b) {
  const std::vector<double> entries{a, b};
  return la::Matrix::diagonal(entries);
}

// 1. Extending m(x,y) = (2/3)x + (1/3)y gives the affine weights
//    (2/5, 7/20, 1/4); the reversed variant gives (4/7, 2/7, 1/7).
Outcome weighted_extension_weights() {
  Outcome o;
  auto space = scalar::absolute_metric();
  auto m = scalar::weighted_affine(2.0 / 3.0);
  auto forward = beta_extend(space, m, 1e-12, 10000, BarycentricVariant::Beta);
  auto reversed = beta_extend(space, m, 1e-12, 10000, BarycentricVariant::BetaStar);

  const double expect_forward[3] = {2.0 / 5.0, 7.0 / 20.0, 1.0 / 4.0};
  const double expect_reversed[3] = {4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0};
  for (int i = 0; i < 3; ++i) {
    std::vector<double> basis{0.0, 0.0, 0.0};
    basis[static_cast<std::size_t>(i)] = 1.0;
    take(o, std::abs(forward(basis) - expect_forward[i]), 1e-8);
    take(o, std::abs(reversed(basis) - expect_reversed[i]), 1e-8);
  }
  return o;
}

// 2. Towers of the classical means match their closed forms to 1e-9 relative
//    on 50 random tuples spread over n = 3..6.
Outcome classical_towers() {
  Outcome o;
  struct Family {
    MetricSpace<double> space;
    MeanSpec<double> mean;
    std::function<double(const std::vector<double>&)> closed;
  };
  auto power_family = [](double alpha) {
    auto f = [alpha](double x) { return std::pow(x, alpha); };
    auto finv = [alpha](double x) { return std::pow(x, 1.0 / alpha); };
    return Family{scalar::pullback_metric(f), scalar::quasi_arithmetic(f, finv),
                  [alpha](const std::vector<double>& xs) {
                    return oracle::power_tower(xs, alpha);
                  }};
  };
  const std::vector<Family> families = {
      {scalar::absolute_metric(), scalar::arithmetic_mean(), oracle::arithmetic_tower},
      {scalar::log_metric(), scalar::geometric_mean(), oracle::geometric_tower},
      {scalar::pullback_metric([](double x) { return 1.0 / x; }), scalar::harmonic_mean(),
       oracle::harmonic_tower},
      power_family(2.0),
      power_family(-1.0),
      power_family(1.0 / 3.0),
  };

  sample::Rng rng(1001);
  std::uniform_real_distribution<double> draw(0.5, 2.0);
  const int counts[4] = {25, 15, 8, 2};
  const double tols[4] = {1e-12, 1e-12, 1e-11, 1e-10};

  for (int level = 0; level < 4; ++level) {
    const int n = level + 3;
    std::vector<std::vector<double>> tuples(static_cast<std::size_t>(counts[level]));
    for (auto& xs : tuples)
      for (int i = 0; i < n; ++i) xs.push_back(draw(rng));

    for (const auto& fam : families) {
      auto tower = extend_tower(fam.space, fam.mean, n, tols[level], 20000).back();
      for (const auto& xs : tuples) {
        const double closed = fam.closed(xs);
        take(o, std::abs(tower(xs) - closed) / std::abs(closed), 1e-9);
      }
    }
  }
  return o;
}

// 3. Every diameter trace of the operator geometric iteration obeys
//    diameter_n <= k * (1/2)^n * diameter_0 for mean arities k = 2..4.
Outcome diameter_decay() {
  Outcome o;
  auto space = op::thompson_space();
  const auto geo = op::geometric_mean().spec;
  sample::Rng rng(1002);

  auto check_run = [&](const MeanSpec<la::Matrix>& mean, int dim) {
    auto xs = sample::random_spd_tuple(rng, mean.arity + 1, dim, 0.2, 5.0);
    auto report =
        power_converge(space, mean, std::span<const la::Matrix>(xs), 1e-8, 10000);
    if (!report.converged) o.pass = false;
    const double d0 = report.diameter_trace.front();
    for (std::size_t n = 0; n < report.diameter_trace.size(); ++n) {
      const double bound = mean.arity * std::pow(0.5, double(n)) * d0;
      take(o, report.diameter_trace[n] - bound, 1e-12);
    }
  };

  const int dims2[8] = {2, 3, 4, 5, 6, 7, 8, 3};
  for (int dim : dims2) check_run(geo, dim);

  auto g3 = extend_tower(space, geo, 3, 1e-9, 10000).back();
  const int dims3[7] = {2, 3, 4, 5, 6, 2, 3};
  for (int dim : dims3) check_run(g3, dim);

  auto g4 = extend_tower(space, geo, 4, 1e-9, 10000).back();
  const int dims4[5] = {2, 3, 4, 2, 3};
  for (int dim : dims4) check_run(g4, dim);
  return o;
}

// 4. The five Thompson metric inequalities hold on 100 draws apiece.
Outcome thompson_lemmas() {
  Outcome o;
  sample::Rng rng(1003);
  auto draw = [&](int dim) { return sample::random_spd(rng, dim, 0.125, 8.0); };

  for (int i = 0; i < 100; ++i) {  // translation shrinks distances
    const int d = 2 + i % 7;
    auto a = draw(d), b = draw(d), c = draw(d);
    take(o, la::thompson_distance(a + b, a + c) - la::thompson_distance(b, c), 1e-9);
  }
  for (int i = 0; i < 100; ++i) {  // a larger translate shrinks them further
    const int d = 2 + i % 7;
    auto a1 = draw(d), b = draw(d), c = draw(d);
    auto a2 = a1 + sample::random_psd(rng, d, 2.0);
    take(o,
         la::thompson_distance(a2 + b, a2 + c) - la::thompson_distance(a1 + b, a1 + c),
         1e-9);
  }
  for (int i = 0; i < 100; ++i) {  // scaling invariance
    const int d = 2 + i % 7;
    auto a = draw(d), b = draw(d);
    const double r = sample::log_uniform(rng, 0.125, 8.0);
    take(o,
         std::abs(la::thompson_distance(r * a, r * b) - la::thompson_distance(a, b)),
         1e-9);
  }
  for (int i = 0; i < 100; ++i) {  // sums are nonexpansive
    const int d = 2 + i % 7;
    auto a = draw(d), b = draw(d), c = draw(d), e = draw(d);
    take(o,
         la::thompson_distance(a + b, c + e) -
             std::max(la::thompson_distance(a, c), la::thompson_distance(b, e)),
         1e-9);
  }
  for (int i = 0; i < 100; ++i) {  // inversion is an isometry
    const int d = 2 + i % 7;
    auto a = draw(d), b = draw(d);
    take(o,
         std::abs(la::thompson_distance(la::matrix_inverse(a), la::matrix_inverse(b)) -
                  la::thompson_distance(a, b)),
         1e-9);
  }
  return o;
}

// 5. The geometric mean is convex in the Thompson metric and is a midpoint.
Outcome geometric_convexity() {
  Outcome o;
  sample::Rng rng(1004);
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 7;
    auto a = sample::random_spd(rng, d, 0.125, 8.0);
    auto b = sample::random_spd(rng, d, 0.125, 8.0);
    auto c = sample::random_spd(rng, d, 0.125, 8.0);
    const double dab = la::thompson_distance(a, b);
    take(o,
         la::thompson_distance(op::geometric(a, c), op::geometric(b, c)) - 0.5 * dab,
         1e-9);
    take(o, std::abs(la::thompson_distance(a, op::geometric(a, b)) - 0.5 * dab), 1e-9);
  }
  return o;
}

// 6. The 3-variable extension is stable over the 2-mean: G3(A, B, A#B) = A#B,
//    and the fixed-point reduction recovers A#B from the pair.
Outcome stable_extension() {
  Outcome o;
  auto space = op::thompson_space();
  auto g3 = extend_tower(space, op::geometric_mean().spec, 3, 1e-9, 10000).back();
  sample::Rng rng(1005);
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 5;
    auto a = sample::random_spd(rng, d, 1.0 / 3.0, 3.0);
    auto b = sample::random_spd(rng, d, 1.0 / 3.0, 3.0);
    auto mid = op::geometric(a, b);

    const std::vector<la::Matrix> xs{a, b, mid};
    take(o, space.distance(g3(xs), mid), 1e-7);

    const std::vector<la::Matrix> anchor{a, b};
    auto recovered =
        stable_reduce(space, g3, std::span<const la::Matrix>(anchor), 1e-8, 10000);
    take(o, space.distance(recovered, mid), 1e-7);
  }
  return o;
}

// 7. The operator logarithmic mean: scalar closed form on 1x1 inputs, and the
//    Kubo-Ando mean of f(x) = (x-1)/log x on sampled SPD pairs.
Outcome logarithmic_correctness() {
  Outcome o;
  sample::Rng rng(1006);
  for (int i = 0; i < 100; ++i) {
    const double x = sample::log_uniform(rng, 0.25, 4.0);
    const double y = sample::log_uniform(rng, 0.25, 4.0);
    la::Matrix a(1), b(1);
    a(0, 0) = x;
    b(0, 0) = y;
    take(o, std::abs(op::logarithmic(a, b, 1e-12)(0, 0) - oracle::log_mean_closed(x, y)),
         1e-10);
  }
  const auto rf = scalar::rf_logarithmic();
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 5;
    auto a = sample::random_spd(rng, d, 0.25, 4.0);
    auto b = sample::random_spd(rng, d, 0.25, 4.0);
    take(o,
         la::thompson_distance(op::logarithmic(a, b, 1e-11), op::kubo_ando(rf, a, b)),
         1e-7);
  }
  return o;
}

// 8. The logarithmic mean extends: the barycentric iteration over L converges
//    for n = 3 and n = 4 on every sampled tuple.
Outcome logarithmic_towers() {
  Outcome o;
  auto space = op::thompson_space();
  const auto l2 = op::logarithmic_mean(1e-10, 10000).spec;
  sample::Rng rng(1007);

  for (int i = 0; i < 10; ++i) {
    const int d = 2 + i % 5;
    auto xs = sample::random_spd_tuple(rng, 3, d, 0.25, 4.0);
    auto report = power_converge(space, l2, std::span<const la::Matrix>(xs), 1e-8, 10000);
    if (!report.converged) o.pass = false;
    take(o, report.diameter_trace.back(), 1e-8);
  }

  auto l3 = beta_extend(space, l2, 1e-9, 10000);
  for (int i = 0; i < 10; ++i) {
    const int d = 2 + i % 5;
    auto xs = sample::random_spd_tuple(rng, 4, d, 0.25, 4.0);
    auto report = power_converge(space, l3, std::span<const la::Matrix>(xs), 1e-8, 10000);
    if (!report.converged) o.pass = false;
    take(o, report.diameter_trace.back(), 1e-8);
  }
  return o;
}

// 9. Order transport: L3 <= AGM3 and G3 <= A3 in the Loewner order, and G3 is
//    monotone on ordered tuples.
Outcome order_relations() {
  Outcome o;
  auto space = op::thompson_space();
  auto l3 = extend_tower(space, op::logarithmic_mean(1e-10, 10000).spec, 3, 1e-9, 10000)
                .back();
  auto agm3 =
      extend_tower(space, op::agm_mean(1e-10, 10000).spec, 3, 1e-9, 10000).back();
  auto g3 = extend_tower(space, op::geometric_mean().spec, 3, 1e-9, 10000).back();
  auto a3 = extend_tower(space, op::arithmetic_mean().spec, 3, 1e-9, 10000).back();

  sample::Rng rng(1008);
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 4;
    auto xs = sample::random_spd_tuple(rng, 3, d, 1.0 / 3.0, 3.0);
    take(o, -la::min_eigenvalue(agm3(xs) - l3(xs)), 1e-8);
    take(o, -la::min_eigenvalue(a3(xs) - g3(xs)), 1e-8);
  }
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 4;
    auto lo = sample::random_spd_tuple(rng, 3, d, 1.0 / 3.0, 3.0);
    auto hi = lo;
    for (auto& m : hi) m = m + sample::random_psd(rng, d, 1.0);
    take(o, -la::min_eigenvalue(g3(hi) - g3(lo)), 1e-8);
  }
  return o;
}

// 10. The extension of a product mean is the product of the extensions.
Outcome product_factorization() {
  Outcome o;
  auto pspace = product_space(scalar::absolute_metric(), scalar::log_metric());
  auto pmean = product_mean(scalar::arithmetic_mean(), scalar::geometric_mean());
  auto p3 = extend_tower(pspace, pmean, 3, 1e-12, 20000).back();

  sample::Rng rng(1009);
  std::uniform_real_distribution<double> draw(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::pair<double, double>> xs;
    std::vector<double> firsts, seconds;
    for (int j = 0; j < 3; ++j) {
      xs.emplace_back(draw(rng), draw(rng));
      firsts.push_back(xs.back().first);
      seconds.push_back(xs.back().second);
    }
    auto value = p3(xs);
    take(o, std::abs(value.first - oracle::arithmetic_tower(firsts)), 1e-9);
    take(o, std::abs(value.second - oracle::geometric_tower(seconds)), 1e-9);
  }
  return o;
}

// 11. The frozen Gauss-iteration oracle pins AGM(24, 6), and the operator
//     composition reproduces it on commuting diagonals.
Outcome agm_oracle() {
  Outcome o;
  const double reference = oracle::agm(24.0, 6.0);
  take(o, std::abs(reference - 13.4581714817256154), 1e-12);

  la::Matrix result = op::agm(diag2(24.0, 1.0), diag2(6.0, 1.0));
  take(o, std::abs(result(0, 0) - reference), 1e-9);
  take(o, std::abs(result(1, 1) - 1.0), 1e-9);
  take(o, std::abs(result(0, 1)), 1e-9);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "weighted-affine extension weights", weighted_extension_weights},
      {2, "classical towers match closed forms", classical_towers},
      {3, "diameter decay bound", diameter_decay},
      {4, "thompson metric lemmas", thompson_lemmas},
      {5, "geometric convexity and midpoint", geometric_convexity},
      {6, "stable extension of the geometric mean", stable_extension},
      {7, "logarithmic operator mean", logarithmic_correctness},
      {8, "logarithmic tower convergence", logarithmic_towers},
      {9, "order transport", order_relations},
      {10, "product factorization", product_factorization},
      {11, "agm oracle", agm_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      std::printf("        criterion %d threw: %s\n", c.number, e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-40s worst %9.3g  (%.2f s)\n", o.pass ? "PASS" : "FAIL",
                c.number, c.name, o.worst, seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu criteria passed\n", std::size(criteria));
  else
    std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures;
}
