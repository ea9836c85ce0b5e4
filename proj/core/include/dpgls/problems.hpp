#pragma once

#include <optional>
#include <string>

#include "dpgls/estimator.hpp"
#include "dpgls/mesh.hpp"
#include "dpgls/nonlinearity.hpp"

namespace dpgls {

/// A model problem instance: initial mesh, right-hand side, and whatever
/// reference data is available for it.
struct Problem {
  std::string name;
  Mesh initial_mesh;
  ScalarField f;
  std::optional<ExactSolution> exact;
  std::optional<double> reference_energy;
  std::optional<double> friedrichs_constant;  // C_F of the domain
  std::optional<double> discrete_friedrichs;  // C_dF for the guaranteed bound
  double default_init_weight = 2.5;
};

/// Exact solution u(x) = cos(pi x1 / 2) cos(pi x2 / 2) on (-1,1)^2 with its
/// derivatives.
ExactSolution square_exact_solution();

/// Right-hand side f = -div sigma(grad u) for an analytic u:
/// f = -phi(|g|) tr(D2 u) - phi'(|g|) g . D2u g / |g| with g = grad u, the
/// singular point |g| = 0 taken by its continuous limit.
ScalarField manufactured_rhs(const PhiModel& model, const ExactSolution& u);

/// Square benchmark: manufactured cosine solution on (-1,1)^2. The initial
/// mesh is one uniform refinement of the criss-cross mesh (ndof = 33).
Problem make_square_problem(const PhiModel& model);

/// L-shape benchmark: f = 1, homogeneous Dirichlet data, unknown exact
/// solution; the coarsest mesh has ndof = 25.
Problem make_lshape_problem(const PhiModel& model);

/// Problem on a user-supplied mesh file with f = 1.
Problem make_custom_problem(const std::string& mesh_path,
                            const PhiModel& model);

/// Reference energies obtained by Aitken extrapolation of conforming P1
/// energies (model example-a).
inline constexpr double kSquareReferenceEnergy = -5.774337908509;
inline constexpr double kLshapeReferenceEnergy = -3.657423002939e-2;

/// Friedrichs constants: sqrt(2)/pi for the square, 1/sqrt(lambda_1) with
/// lambda_1 = 9.6397238 for the L-shape.
inline constexpr double kLshapeFriedrichs = 0.32208293;

/// Literal uniqueness threshold printed next to the square convergence data;
/// kept for comparison, it does not match the criterion formula evaluated at
/// C_F = sqrt(2)/pi (= 0.20788...).
inline constexpr double kSquareReportedThreshold = 0.17239892;

}  // namespace dpgls
