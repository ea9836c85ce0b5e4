#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "dpgls/nonlinearity.hpp"
#include "dpgls/quadrature.hpp"

using namespace dpgls;

TEST_SUITE_BEGIN("nonlinearity");

TEST_CASE("sigma values") {
  const PhiModel a = PhiModel::example_a();
  CHECK(a.sigma(Vec2(0, 0)).norm() == 0.0);
  // phi(1) = 2 + 1/2
  CHECK(a.sigma(Vec2(1, 0)).x() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(a.sigma(Vec2(1, 0)).y() == 0.0);

  const PhiModel lin = PhiModel::linear(2.5);
  const Vec2 v(0.3, -1.2);
  CHECK((lin.sigma(v) - 2.5 * v).norm() == doctest::Approx(0.0));
}

TEST_CASE("dsigma at the origin") {
  CHECK((PhiModel::example_a().dsigma(Vec2(0, 0)) - 3.0 * Mat2::Identity())
            .norm() == doctest::Approx(0.0));
  CHECK((PhiModel::example_b().dsigma(Vec2(0, 0)) - 1.0 * Mat2::Identity())
            .norm() == doctest::Approx(0.0));
}

TEST_CASE("dsigma matches finite differences of sigma") {
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b(), PhiModel::linear(1.7)}) {
    for (int k = 0; k < 200; ++k) {
      const Vec2 a(dist(rng), dist(rng));
      if (a.norm() < 1e-3) continue;
      const Mat2 d = model.dsigma(a);
      const double h = 1e-6;
      Mat2 fd;
      for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        fd.col(j) = (model.sigma(a + e) - model.sigma(a - e)) / (2 * h);
      }
      CHECK((fd - d).norm() <= 1e-6 * d.norm());
    }
  }
}

TEST_CASE("hess_sigma") {
  CHECK(PhiModel::example_b().hess_sigma(Vec2(0, 0))[0].norm() == 0.0);
  CHECK(PhiModel::example_b().hess_sigma(Vec2(0, 0))[1].norm() == 0.0);

  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const PhiModel a = PhiModel::example_a();
  for (int k = 0; k < 100; ++k) {
    Vec2 x(dist(rng), dist(rng));
    if (x.norm() <= 1.0) x *= 2.0 / x.norm();
    const auto h = a.hess_sigma(x);
    // Index symmetry.
    for (int i = 0; i < 2; ++i) {
      CHECK(h[i](0, 1) == doctest::Approx(h[i](1, 0)).epsilon(1e-13));
      for (int j = 0; j < 2; ++j) {
        CHECK(h[i](j, 0) == doctest::Approx(h[0](i, j)).epsilon(1e-13));
      }
    }
    // Finite differences of dsigma.
    const double step = 1e-6;
    double worst = 0.0, scale = 0.0;
    for (int l = 0; l < 2; ++l) {
      Vec2 e = Vec2::Zero();
      e[l] = step;
      const Mat2 fd = (a.dsigma(x + e) - a.dsigma(x - e)) / (2 * step);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          worst = std::max(worst, std::abs(fd(i, j) - h[i](j, l)));
          scale = std::max(scale, std::abs(h[i](j, l)));
        }
      }
    }
    CHECK(worst <= 1e-5 * std::max(scale, 1.0));
  }
}

TEST_CASE("varphi closed forms against quadrature") {
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b(), PhiModel::linear(0.8)}) {
    CHECK(model.varphi(0.0) == 0.0);
    CHECK(varphi_quadrature_error(model) <= 1e-10);
  }
  const PhiModel a = PhiModel::example_a();
  const double quad = adaptive_simpson(
      [&](double s) { return s * a.phi(s); }, 0.0, 1.0, 1e-13);
  CHECK(a.varphi(1.0) == doctest::Approx(quad).epsilon(1e-12));
  CHECK(PhiModel::linear(3.0).varphi(2.0) == doctest::Approx(6.0));
  CHECK_THROWS(PhiModel::example_a().varphi(-0.5));
}

TEST_CASE("growth bounds of phi on [0, 1e6]") {
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b(), PhiModel::linear(2.5)}) {
    for (double t = 1e-6; t <= 1e6; t *= 2.3) {
      const double g1 = model.gamma1(), g2 = model.gamma2();
      CHECK(model.phi(t) >= g1 - 1e-12);
      CHECK(model.phi(t) <= g2 + 1e-12);
      const double radial = model.phi(t) + t * model.dphi(t);
      CHECK(radial >= g1 - 1e-12);
      CHECK(radial <= g2 + 1e-12);
    }
  }
}

TEST_CASE("varphi derivative is t phi(t)") {
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b(), PhiModel::linear(1.3)}) {
    for (double t : {0.25, 1.0, 3.5, 20.0}) {
      const double h = 1e-6 * (1.0 + t);
      const double fd = (model.varphi(t + h) - model.varphi(t - h)) / (2 * h);
      CHECK(fd == doctest::Approx(t * model.phi(t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("monotonicity sandwich and Lipschitz bound") {
  std::mt19937 rng(321);
  std::normal_distribution<double> dist;
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b(), PhiModel::linear(2.0)}) {
    const double g1 = model.gamma1(), g2 = model.gamma2();
    for (int k = 0; k < 1000; ++k) {
      const Vec2 a(3 * dist(rng), 3 * dist(rng));
      const Vec2 b(3 * dist(rng), 3 * dist(rng));
      const double d2 = (a - b).squaredNorm();
      const double m = (model.sigma(a) - model.sigma(b)).dot(a - b);
      CHECK(m >= g1 * d2 * (1 - 1e-12));
      CHECK(m <= g2 * d2 * (1 + 1e-12));
      CHECK((model.sigma(a) - model.sigma(b)).norm() <=
            g2 * std::sqrt(d2) * (1 + 1e-12));
    }
  }
}

TEST_CASE("dsigma eigenvalues stay in [gamma1, gamma2]") {
  std::mt19937 rng(99);
  std::normal_distribution<double> dist;
  for (const PhiModel& model :
       {PhiModel::example_a(), PhiModel::example_b()}) {
    auto check_at = [&](const Vec2& a) {
      const Mat2 d = model.dsigma(a);
      Eigen::SelfAdjointEigenSolver<Mat2> es(d);
      CHECK(es.eigenvalues()(0) >= model.gamma1() - 1e-12);
      CHECK(es.eigenvalues()(1) <= model.gamma2() + 1e-12);
    };
    for (double r : {0.0, 1e-14, 1e-7}) {
      check_at(Vec2(r, 0));
      check_at(Vec2(0, -r));
    }
    for (int k = 0; k < 1000; ++k) {
      check_at(Vec2(5 * dist(rng), 5 * dist(rng)));
    }
  }
}

TEST_CASE("stored constants and parsing") {
  const PhiModel a = PhiModel::example_a();
  CHECK(a.gamma1() == 1.0);
  CHECK(a.gamma2() == 3.0);
  CHECK(a.lip_dsigma() == 4.0);
  const PhiModel b = PhiModel::example_b();
  CHECK(b.gamma1() == 1.0);
  CHECK(b.gamma2() == 4.0);
  CHECK(b.lip_dsigma() == 2.0);

  CHECK(PhiModel::from_name("example-a").name() == "example-a");
  CHECK(PhiModel::from_name("linear:2.5").phi(17.0) == 2.5);
  CHECK_THROWS(PhiModel::from_name("linear:-1"));
  CHECK_THROWS(PhiModel::from_name("linear:2.5x"));
  CHECK_THROWS(PhiModel::from_name("cubic"));
}

TEST_SUITE_END();
