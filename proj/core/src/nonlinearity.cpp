#include "dpgls/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

#include "dpgls/quadrature.hpp"

namespace dpgls {

double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double tol) {
  auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + hi)) + g(hi));
  };
  // Recursive bisection with the usual 1/15 error estimate.
  std::function<double(double, double, double, double, int)> rec =
      [&](double lo, double hi, double whole, double eps, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid);
        const double right = simpson(mid, hi);
        if (depth > 50 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, left, eps / 2.0, depth + 1) +
               rec(mid, hi, right, eps / 2.0, depth + 1);
      };
  return rec(a, b, simpson(a, b), tol, 0);
}

PhiModel::PhiModel(Kind kind, double weight, double g1, double g2, double lip,
                   std::string name)
    : kind_(kind),
      weight_(weight),
      gamma1_(g1),
      gamma2_(g2),
      lip_dsigma_(lip),
      name_(std::move(name)) {}

PhiModel PhiModel::example_a() {
  return PhiModel(Kind::kExampleA, 0.0, 1.0, 3.0, 4.0, "example-a");
}

PhiModel PhiModel::example_b() {
  return PhiModel(Kind::kExampleB, 0.0, 1.0, 4.0, 2.0, "example-b");
}

PhiModel PhiModel::linear(double weight) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("linear model weight must be positive");
  }
  return PhiModel(Kind::kLinear, weight, weight, weight, 0.0,
                  "linear:" + std::to_string(weight));
}

PhiModel PhiModel::from_name(std::string_view name) {
  if (name == "example-a") return example_a();
  if (name == "example-b") return example_b();
  constexpr std::string_view prefix = "linear:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string arg(name.substr(prefix.size()));
    std::size_t pos = 0;
    const double w = std::stod(arg, &pos);
    if (pos != arg.size()) {
      throw std::invalid_argument("bad weight in model name '" +
                                  std::string(name) + "'");
    }
    return linear(w);
  }
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (use example-a, example-b or linear:<w>)");
}

double PhiModel::phi(double t) const {
  switch (kind_) {
    case Kind::kExampleA:
      return 2.0 + 1.0 / (1.0 + t);
    case Kind::kExampleB:
      return 2.0 - 1.0 / (1.0 + t * t);
    case Kind::kLinear:
      return weight_;
  }
  return 0.0;
}

double PhiModel::dphi(double t) const {
  switch (kind_) {
    case Kind::kExampleA: {
      const double s = 1.0 + t;
      return -1.0 / (s * s);
    }
    case Kind::kExampleB: {
      const double s = 1.0 + t * t;
      return 2.0 * t / (s * s);
    }
    case Kind::kLinear:
      return 0.0;
  }
  return 0.0;
}

double PhiModel::ddphi(double t) const {
  switch (kind_) {
    case Kind::kExampleA: {
      const double s = 1.0 + t;
      return 2.0 / (s * s * s);
    }
    case Kind::kExampleB: {
      const double s = 1.0 + t * t;
      return (2.0 - 6.0 * t * t) / (s * s * s);
    }
    case Kind::kLinear:
      return 0.0;
  }
  return 0.0;
}

double PhiModel::varphi(double t) const {
  if (t < 0.0) {
    throw std::domain_error("varphi expects a nonnegative argument");
  }
  switch (kind_) {
    case Kind::kExampleA:
      return t * t + t - std::log1p(t);
    case Kind::kExampleB:
      return t * t - 0.5 * std::log1p(t * t);
    case Kind::kLinear:
      return 0.5 * weight_ * t * t;
  }
  return 0.0;
}

Vec2 PhiModel::sigma(const Vec2& a) const { return phi(a.norm()) * a; }

Mat2 PhiModel::dsigma(const Vec2& a) const {
  const double t = a.norm();
  if (t <= kSigmaEps) {
    return phi(0.0) * Mat2::Identity();
  }
  const Vec2 s = a / t;
  return phi(t) * Mat2::Identity() + dphi(t) * t * (s * s.transpose());
}

std::array<Mat2, 2> PhiModel::hess_sigma(const Vec2& a) const {
  std::array<Mat2, 2> h = {Mat2::Zero(), Mat2::Zero()};
  const double t = a.norm();
  if (t <= kSigmaEps) {
    return h;
  }
  const Vec2 s = a / t;
  const double d1 = dphi(t);
  const double d3 = ddphi(t) * t - d1;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        const double kron = d1 * ((j == k ? s[l] : 0.0) +
                                  (j == l ? s[k] : 0.0) +
                                  (k == l ? s[j] : 0.0));
        h[j](k, l) = kron + d3 * s[j] * s[k] * s[l];
      }
    }
  }
  return h;
}

double varphi_quadrature_error(const PhiModel& model) {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0, 10.0}) {
    const double quad = adaptive_simpson(
        [&](double s) { return s * model.phi(s); }, 0.0, t, 1e-13);
    worst = std::max(worst, std::abs(quad - model.varphi(t)));
  }
  return worst;
}

}  // namespace dpgls
