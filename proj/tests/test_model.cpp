#include <doctest.h>

#include "specbound/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace specbound;
using model::Point;

namespace {

Point random_point(int d, std::mt19937_64& rng, double radius = 3.0) {
  std::uniform_real_distribution<double> unif(-radius, radius);
  Point x(d);
  for (int i = 0; i < d; ++i) x[i] = unif(rng);
  return x;
}

}  // namespace

TEST_CASE("power product potential closed-form values") {
  model::Potential V = model::make_power_product(2, 1.5, 0.0, 0.01);
  Point x(2);
  x << 1.0, 1.0;
  // |1|^1.5 / 1.5 per coordinate
  CHECK(V.value(x) == doctest::Approx(2.0 / 1.5).epsilon(1e-12));

  model::Potential V1 = model::make_power_product(1, 1.5, 0.0, 0.01);
  Point y(1);
  y << 4.0;
  CHECK(V1.gradient(y)[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("power product rejects out-of-range parameters") {
  CHECK_THROWS_AS(model::make_power_product(2, 2.5, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(model::make_power_product(2, 1.0, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(model::make_power_product(2, 1.5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(model::make_power_product(0, 1.5, 0.0, 0.01), std::invalid_argument);
}

TEST_CASE("interaction gradient bounded by 2c") {
  model::Potential V = model::make_power_product(2, 1.5, 0.1, 1e-4);
  const auto& phi = *V.structure->interaction;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      Point x(2);
      x << -5.0 + 10.0 * i / 49.0, -5.0 + 10.0 * j / 49.0;
      worst = std::max(worst, phi.gradient(x).cwiseAbs().maxCoeff());
    }
  CHECK(worst <= 0.2 + 1e-12);
}

TEST_CASE("gaussian potential") {
  model::Potential V = model::make_gaussian(3);
  Point x(3);
  x << 1.0, 2.0, 2.0;
  CHECK(V.value(x) == doctest::Approx(4.5));
  CHECK(V.hessian(x).isApprox(Eigen::MatrixXd::Identity(3, 3)));

  model::Potential V1 = model::make_gaussian(1);
  Point y(1);
  y << 0.7;
  CHECK(V1.gradient(y)[0] == doctest::Approx(0.7));
  Point z = Point::Zero(2);
  CHECK(model::make_gaussian(2).value(z) == 0.0);
}

TEST_CASE("analytic derivatives match finite differences") {
  std::mt19937_64 rng(7);
  std::vector<model::Potential> corpus;
  corpus.push_back(model::make_gaussian(2));
  corpus.push_back(model::make_power_product(2, 1.5, 0.1, 0.01));
  corpus.push_back(model::make_power_product(3, 1.3, 0.05, 0.05));

  for (const auto& V : corpus) {
    for (int trial = 0; trial < 100; ++trial) {
      Point x = random_point(V.dim, rng);
      // keep clear of the power-law puncture
      for (int i = 0; i < V.dim; ++i)
        if (std::abs(x[i]) < 0.05) x[i] = 0.05;
      Point g = V.gradient(x);
      Point g_fd = model::fd_gradient(V.value, x);
      CHECK((g - g_fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
      auto h = V.hessian(x);
      auto h_fd = model::fd_hessian(V.value, x);
      CHECK((h - h_fd).norm() <= 1e-4 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("interaction hessian positive semidefinite") {
  model::InteractionTerm phi{3, 0.02, 0.2};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Point x = random_point(3, rng, 4.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi.hessian(x));
    CHECK(es.eigenvalues()(0) >= -1e-10);
  }
}

TEST_CASE("interaction converges to the nonsmooth limit") {
  Point x(2);
  x << 0.3, -1.2;
  double exact = 0.1 * 2.0 * std::abs(x[1] - x[0]);
  for (double tau : {1e-2, 1e-4, 1e-6}) {
    model::InteractionTerm phi{2, tau, 0.1};
    CHECK(std::abs(phi.value(x) - exact) <= 2.0 * 0.1 * tau);
  }
}

TEST_CASE("exp_eps_u weight closed forms") {
  model::Potential g1 = model::make_gaussian(1);
  model::DiagonalWeight w = model::make_weight(g1, model::WeightFamily::ExpEpsU, {0.25});
  CHECK(w.g[0](2.0) == doctest::Approx(std::exp(0.5)).epsilon(1e-12));

  model::Potential p1 = model::make_power_product(1, 1.5, 0.0, 0.01);
  model::DiagonalWeight wp = model::make_weight(p1, model::WeightFamily::ExpEpsU, {0.25});
  CHECK(wp.dg[0](1.0) / wp.g[0](1.0) == doctest::Approx(0.25).epsilon(1e-12));

  model::DiagonalWeight id = model::make_identity_weight(3);
  CHECK(id.g[1](1.7) == 1.0);
  CHECK(id.antiderivative(1, 2.5) == doctest::Approx(2.5));
}

TEST_CASE("weight construction rejects bad inputs") {
  model::Potential g2 = model::make_gaussian(2);
  CHECK_THROWS_AS(model::make_weight(g2, model::WeightFamily::ExpEpsU, {0.25, 0.7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(model::make_weight(g2, model::WeightFamily::ExpEpsU, {0.25}),
                  std::invalid_argument);
  model::Potential custom =
      model::make_custom(1, [](const Point& x) { return x[0] * x[0]; });
  CHECK_THROWS_AS(model::make_weight(custom, model::WeightFamily::ExpEpsU, {0.1}),
                  std::invalid_argument);
}

TEST_CASE("weight antiderivative consistent with g") {
  model::Potential p = model::make_power_product(1, 1.5, 0.0, 0.01);
  model::DiagonalWeight w = model::make_weight(p, model::WeightFamily::ExpEpsU, {0.2});
  for (double y : {-2.0, -0.5, 0.3, 1.0, 3.0}) {
    double step = 1e-5;
    double fd = (w.antiderivative(0, y + step) - w.antiderivative(0, y - step)) /
                (2.0 * step);
    CHECK(fd == doctest::Approx(w.g[0](y)).epsilon(1e-6));
  }
}
