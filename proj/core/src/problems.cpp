#include "dpgls/problems.hpp"

#include <cmath>

namespace dpgls {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ExactSolution square_exact_solution() {
  const double a = kPi / 2.0;
  ExactSolution sol;
  sol.value = [a](const Vec2& x) {
    return std::cos(a * x.x()) * std::cos(a * x.y());
  };
  sol.grad = [a](const Vec2& x) {
    return Vec2(-a * std::sin(a * x.x()) * std::cos(a * x.y()),
                -a * std::cos(a * x.x()) * std::sin(a * x.y()));
  };
  sol.hess = [a](const Vec2& x) {
    const double u = std::cos(a * x.x()) * std::cos(a * x.y());
    const double mixed = a * a * std::sin(a * x.x()) * std::sin(a * x.y());
    Mat2 h;
    h << -a * a * u, mixed, mixed, -a * a * u;
    return h;
  };
  return sol;
}

ScalarField manufactured_rhs(const PhiModel& model, const ExactSolution& u) {
  return [model, u](const Vec2& x) {
    const Vec2 g = u.grad(x);
    const Mat2 h = u.hess(x);
    const double t = g.norm();
    double f = -model.phi(t) * h.trace();
    if (t > kSigmaEps) {
      f -= model.dphi(t) * g.dot(h * g) / t;
    }
    return f;
  };
}

Problem make_square_problem(const PhiModel& model) {
  Problem p{.name = "square",
            .initial_mesh = refine_uniform_nvb(make_square_mesh()),
            .f = {},
            .exact = square_exact_solution(),
            .reference_energy = {},
            .friedrichs_constant = std::sqrt(2.0) / kPi,
            .discrete_friedrichs = kCdfConvexDefault,
            .default_init_weight = 2.5};
  p.f = manufactured_rhs(model, *p.exact);
  if (model.name() == "example-a") {
    p.reference_energy = kSquareReferenceEnergy;
    p.default_init_weight = 1.0;
  }
  return p;
}

Problem make_lshape_problem(const PhiModel& model) {
  Problem p{.name = "lshape",
            .initial_mesh = make_lshape_mesh(),
            .f = [](const Vec2&) { return 1.0; },
            .exact = {},
            .reference_energy = {},
            .friedrichs_constant = kLshapeFriedrichs,
            .discrete_friedrichs = {},  // not known for the nonconvex domain
            .default_init_weight = 2.5};
  if (model.name() == "example-a") {
    p.reference_energy = kLshapeReferenceEnergy;
  }
  return p;
}

Problem make_custom_problem(const std::string& mesh_path,
                            const PhiModel& model) {
  (void)model;
  return Problem{.name = mesh_path,
                 .initial_mesh = read_mesh_file(mesh_path),
                 .f = [](const Vec2&) { return 1.0; },
                 .exact = {},
                 .reference_energy = {},
                 .friedrichs_constant = {},
                 .discrete_friedrichs = {},
                 .default_init_weight = 2.5};
}

}  // namespace dpgls
