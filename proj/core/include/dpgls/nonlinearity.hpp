#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace dpgls {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Gradient magnitudes below this value are treated as zero when evaluating
/// the stress derivatives (the singular direction A/|A| is undefined there).
inline constexpr double kSigmaEps = 1e-12;

/// Scalar coefficient phi with its derivatives, the induced stress
/// sigma(A) = phi(|A|) A, and the convex energy density
/// varphi(t) = int_0^t s phi(s) ds.
///
/// Built-in choices:
///   example-a   phi(t) = 2 + (1+t)^-1,    gamma = [1,3], Lip(grad sigma) = 4
///   example-b   phi(t) = 2 - (1+t^2)^-1,  gamma = [1,4], Lip(grad sigma) = 2
///   linear:<w>  phi(t) = w
class PhiModel {
 public:
  static PhiModel example_a();
  static PhiModel example_b();
  static PhiModel linear(double weight);
  /// Parses "example-a" | "example-b" | "linear:<w>". Throws on anything else.
  static PhiModel from_name(std::string_view name);

  double phi(double t) const;
  double dphi(double t) const;
  double ddphi(double t) const;
  /// Closed-form energy density; throws std::domain_error for t < 0.
  double varphi(double t) const;

  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  double lip_dsigma() const { return lip_dsigma_; }
  const std::string& name() const { return name_; }
  bool is_linear() const { return kind_ == Kind::kLinear; }

  /// Stress sigma(A) = phi(|A|) A.
  Vec2 sigma(const Vec2& a) const;
  /// Jacobian of sigma; symmetric with eigenvalues in [gamma1, gamma2].
  /// Returns phi(0) I for |A| <= kSigmaEps.
  Mat2 dsigma(const Vec2& a) const;
  /// Second derivative tensor, hess[j](k,l) = d^2 sigma_j / dA_k dA_l.
  /// Returns the zero tensor for |A| <= kSigmaEps.
  std::array<Mat2, 2> hess_sigma(const Vec2& a) const;

 private:
  enum class Kind { kExampleA, kExampleB, kLinear };

  PhiModel(Kind kind, double weight, double g1, double g2, double lip,
           std::string name);

  Kind kind_;
  double weight_ = 0.0;  // only for linear models
  double gamma1_, gamma2_, lip_dsigma_;
  std::string name_;
};

/// Largest absolute mismatch between the closed-form varphi and adaptive
/// Simpson quadrature of s phi(s) at t in {0.5, 1, 2, 10}. Used as a startup
/// sanity check; should be below 1e-10.
double varphi_quadrature_error(const PhiModel& model);

}  // namespace dpgls
