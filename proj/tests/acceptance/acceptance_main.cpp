// Acceptance suite: one check per benchmark criterion, each printing a
// single PASS/FAIL line (with supporting detail above it). Run without
// arguments to execute all criteria, or pass criterion numbers.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dpgls/quadrature.hpp"
#include "dpgls/run.hpp"

using namespace dpgls;

namespace {

struct CheckList {
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      std::cout << "    violated: " << what << "\n";
    }
  }
};

bool close_rel(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

DiscreteState random_state(const DofLayout& dofs, std::mt19937& rng) {
  std::normal_distribution<double> dist;
  DiscreteState s = zero_state(dofs);
  for (int i = 0; i < s.u.size(); ++i) s.u[i] = dist(rng);
  for (int i = 0; i < s.p.size(); ++i) s.p[i] = dist(rng);
  return s;
}

double fitted_decay_rate(const std::vector<RunRecord>& records, int count) {
  const int n = static_cast<int>(records.size());
  const int start = std::max(0, n - count);
  std::vector<double> xs, ys;
  for (int i = start; i < n; ++i) {
    xs.push_back(std::log(static_cast<double>(records[i].ndof)));
    ys.push_back(std::log(records[i].eta));
  }
  const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  return -num / den;
}

RunConfig square_config(long max_ndof, long gevp_max_ndof) {
  RunConfig config;
  config.problem = "square";
  config.model = "example-a";
  config.refine = "uniform";
  config.max_ndof = max_ndof;
  config.gevp_max_ndof = gevp_max_ndof;
  config.write_meshes = false;
  return config;
}

// ---------------------------------------------------------------------------
// 1. dual-norm oracle: |residual_dual_norm^2 - ls_value| <= 1e-10 ls_value
//    for 1e3 random states on all benchmark meshes up to ndof 1e4.
bool criterion1() {
  CheckList c;
  std::mt19937 rng(101);
  const PhiModel model = PhiModel::example_a();
  auto sweep = [&](const Problem& problem, const char* tag) {
    Mesh mesh = problem.initial_mesh;
    while (true) {
      const DofLayout dofs(mesh);
      if (dofs.ndof > 10000) break;
      const auto weights = compute_weights(mesh, problem.f);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        const DiscreteState state = random_state(dofs, rng);
        const double value = ls_value(mesh, dofs, model, weights, state);
        const double dual =
            residual_dual_norm(mesh, dofs, model, weights, state);
        worst = std::max(worst, std::abs(dual * dual - value) / value);
      }
      std::printf("    %s ndof %d: worst relative defect %.3e\n", tag,
                  dofs.ndof, worst);
      c.expect(worst <= 1e-10, std::string(tag) + " oracle equality");
      mesh = refine_uniform_nvb(mesh);
    }
  };
  sweep(make_square_problem(model), "square");
  sweep(make_lshape_problem(model), "lshape");
  return c.ok;
}

// ---------------------------------------------------------------------------
// 2. derivative consistency at 50 random states on the ndof=513 mesh.
bool criterion2() {
  CheckList c;
  std::mt19937 rng(202);
  std::normal_distribution<double> dist;
  const PhiModel model = PhiModel::example_a();
  const Problem problem = make_square_problem(model);
  Mesh mesh = problem.initial_mesh;
  while (DofLayout(mesh).ndof < 500) mesh = refine_uniform_nvb(mesh);
  const DofLayout dofs(mesh);
  const auto weights = compute_weights(mesh, problem.f);
  std::printf("    mesh ndof %d\n", dofs.ndof);

  double worst_grad = 0.0, worst_hess = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteState state = random_state(dofs, rng);
    const Eigen::VectorXd g = ls_gradient(mesh, dofs, model, weights, state);
    const double h =
        1e-6 * (1.0 + std::sqrt(state.u.squaredNorm() + state.p.squaredNorm()));
    Eigen::VectorXd fd(dofs.ndof);
    for (int d = 0; d < dofs.ndof; ++d) {
      auto value_at = [&](double delta) {
        DiscreteState probe = state;
        if (d < dofs.n_s10) {
          probe.u[d] += delta;
        } else {
          probe.p[d - dofs.n_s10] += delta;
        }
        return ls_value(mesh, dofs, model, weights, probe);
      };
      fd[d] = (value_at(h) - value_at(-h)) / (2 * h);
    }
    worst_grad = std::max(worst_grad, (fd - g).norm() / g.norm());

    const SparseMat hess = ls_hessian(mesh, dofs, model, weights, state);
    for (int probe = 0; probe < 8; ++probe) {
      Eigen::VectorXd dir(dofs.ndof);
      for (int i = 0; i < dir.size(); ++i) dir[i] = dist(rng);
      dir /= dir.norm();
      const double step = 1e-6;
      DiscreteState plus = state, minus = state;
      plus.u += step * dir.head(dofs.n_s10);
      plus.p += step * dir.tail(dofs.n_rt);
      minus.u -= step * dir.head(dofs.n_s10);
      minus.p -= step * dir.tail(dofs.n_rt);
      const Eigen::VectorXd gfd =
          (ls_gradient(mesh, dofs, model, weights, plus) -
           ls_gradient(mesh, dofs, model, weights, minus)) /
          (2 * step);
      const Eigen::VectorXd hd = hess * dir;
      worst_hess = std::max(worst_hess, (gfd - hd).norm() / hd.norm());
    }
  }
  std::printf("    gradient FD defect %.3e (tol 1e-6), hessian %.3e (tol 1e-5)\n",
              worst_grad, worst_hess);
  c.expect(worst_grad <= 1e-6, "gradient finite differences");
  c.expect(worst_hess <= 1e-5, "hessian finite differences");
  return c.ok;
}

// ---------------------------------------------------------------------------
// 3. Newton: Q-quadratic decrease, <= 1e-11 within 6 iterations from the
//    weight-1 initialization and within 5 from weight 2.5, at ndof 8193.
bool criterion3() {
  CheckList c;
  const PhiModel model = PhiModel::example_a();
  const Problem problem = make_square_problem(model);
  Mesh mesh = problem.initial_mesh;
  while (DofLayout(mesh).ndof < 8193) mesh = refine_uniform_nvb(mesh);
  const DofLayout dofs(mesh);
  const auto weights = compute_weights(mesh, problem.f);
  const XNormOperator xnorm(mesh);

  auto run = [&](double w, int budget) {
    const NewtonReport rep =
        newton(mesh, dofs, model, weights, linear_init(mesh, dofs, w, weights),
               xnorm, {1e-12, 20});
    std::printf("    init linear(%.1f):", w);
    for (double d : rep.dual_norms) std::printf(" %.3e", d);
    std::printf("\n");
    int reach = -1;
    for (std::size_t j = 0; j < rep.dual_norms.size(); ++j) {
      if (rep.dual_norms[j] <= 1e-11) {
        reach = static_cast<int>(j);
        break;
      }
    }
    c.expect(reach >= 0 && reach <= budget,
             "reach 1e-11 within " + std::to_string(budget) + " iterations");
    const int tail_begin = std::max(0, (reach < 0 ? 0 : reach) - 3);
    for (int j = tail_begin; j >= 0 && j + 1 <= reach; ++j) {
      const double prev = rep.dual_norms[j], next = rep.dual_norms[j + 1];
      if (next <= 1e-13) continue;  // round-off floor
      c.expect(next <= 1e3 * prev * prev, "Q-quadratic tail contraction");
    }
  };
  run(1.0, 6);
  run(2.5, 5);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 4. quantitative reproduction of the uniform square history.
bool criterion4() {
  CheckList c;
  RunConfig config = square_config(33000, 1);
  const RunResult result = adaptive_loop(config);
  c.expect(result.exit_status == 0, "run completes");
  const std::vector<double> eta_ref = {12.4270, 6.2430, 3.1251,
                                       1.5630,  0.78155, 0.39078};
  c.expect(result.records.size() == eta_ref.size(), "six levels computed");
  for (std::size_t l = 0; l < std::min(result.records.size(), eta_ref.size());
       ++l) {
    const RunRecord& r = result.records[l];
    std::printf("    ndof %ld: eta %.6f (ref %.5f)\n", r.ndof, r.eta,
                eta_ref[l]);
    c.expect(close_rel(r.eta, eta_ref[l], 0.01), "eta within 1%");
    if (r.ndof == 2049) {
      std::printf("    error_energy %.6f (ref 0.115161)\n", *r.error_energy);
      c.expect(close_rel(*r.error_energy, 0.115161, 0.02),
               "error_energy at ndof 2049 within 2%");
    }
    if (r.ndof == 33) {
      std::printf("    energy_diff_sqrt %.6f (ref 1.00377)\n",
                  *r.energy_diff_sqrt);
      c.expect(close_rel(*r.energy_diff_sqrt, 1.00377, 0.02),
               "energy_diff_sqrt at ndof 33 within 2%");
    }
  }
  // Halving of eta per level and the estimator-error equivalence ribbon.
  double ribbon_lo = 1e300, ribbon_hi = 0.0;
  for (std::size_t l = 0; l < result.records.size(); ++l) {
    const RunRecord& r = result.records[l];
    if (l >= 1) {
      const double ratio = r.eta / result.records[l - 1].eta;
      c.expect(ratio >= 0.48 && ratio <= 0.52,
               "eta halves per level (ratio " + std::to_string(ratio) + ")");
    }
    const double total =
        std::sqrt(*r.error_energy * *r.error_energy +
                  *r.error_hdiv * *r.error_hdiv);
    ribbon_lo = std::min(ribbon_lo, r.eta / total);
    ribbon_hi = std::max(ribbon_hi, r.eta / total);
    // Convexity: E(u_l) - E(u) >= gamma1/2 |||u - u_l|||^2.
    const double ediff_sq = *r.energy_diff_sqrt * *r.energy_diff_sqrt;
    c.expect(ediff_sq >= 0.5 * *r.error_energy * *r.error_energy,
             "energy difference dominates the squared energy error");
  }
  std::printf("    eta / error ratio in [%.3f, %.3f] (spread %.3f <= 4)\n",
              ribbon_lo, ribbon_hi, ribbon_hi / ribbon_lo);
  c.expect(ribbon_hi / ribbon_lo <= 4.0, "equivalence ribbon spread <= 4");
  return c.ok;
}

// ---------------------------------------------------------------------------
// 5. minimality certificates via the generalized eigenvalue problem.
bool criterion5() {
  CheckList c;
  {
    RunConfig config = square_config(33000, 33000);
    const RunResult result = adaptive_loop(config);
    c.expect(result.exit_status == 0, "square run completes");
    for (const RunRecord& r : result.records) {
      std::printf("    square ndof %ld: lambda = [%.4f, %.4f]\n", r.ndof,
                  *r.lambda_min, *r.lambda_max);
      c.expect(*r.lambda_min >= 1.5 && *r.lambda_min <= 1.8,
               "square lambda_min in [1.5, 1.8] at ndof " +
                   std::to_string(r.ndof));
      c.expect(*r.lambda_max >= 9.9 && *r.lambda_max <= 16.2,
               "square lambda_max in [9.9, 16.2] at ndof " +
                   std::to_string(r.ndof));
    }
  }
  {
    RunConfig config;
    config.problem = "lshape";
    config.model = "example-a";
    config.refine = "adaptive";
    config.max_ndof = 10000;
    config.gevp_max_ndof = 10000;
    config.write_meshes = false;
    const RunResult result = adaptive_loop(config);
    c.expect(result.exit_status == 0, "lshape run completes");
    double lo = 1e300, hi = 0.0;
    for (const RunRecord& r : result.records) {
      c.expect(r.lambda_min.has_value(),
               "lshape eigensolve at ndof " + std::to_string(r.ndof));
      if (!r.lambda_min) continue;
      lo = std::min(lo, *r.lambda_min);
      hi = std::max(hi, *r.lambda_min);
      c.expect(*r.lambda_min >= 1.7 && *r.lambda_min <= 2.0,
               "lshape lambda_min in [1.7, 2.0] at ndof " +
                   std::to_string(r.ndof));
    }
    std::printf("    lshape adaptive lambda_min range [%.4f, %.4f] over %zu levels\n",
                lo, hi, result.records.size());
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// 6. uniqueness criterion trajectory on the uniform square history.
bool criterion6() {
  CheckList c;
  RunConfig config = square_config(33000, 1);
  const RunResult result = adaptive_loop(config);
  c.expect(result.exit_status == 0, "run completes");
  const std::vector<double> vmax_ref = {1.7710,  1.3695,  0.79579,
                                        0.42732, 0.22193, 0.11323};
  const double formula_threshold = 0.20788;  // gamma1^2/(4 (1 + 2/pi^2))
  c.expect(result.records.size() == vmax_ref.size(), "six levels computed");
  for (std::size_t l = 0; l < std::min(result.records.size(), vmax_ref.size());
       ++l) {
    const RunRecord& r = result.records[l];
    std::printf("    ndof %ld: vmax %.6f (ref %.5f)\n", r.ndof, r.vmax,
                vmax_ref[l]);
    c.expect(close_rel(r.vmax, vmax_ref[l], 0.02), "vmax within 2%");
    if (r.ndof >= 32769) {
      c.expect(r.vmax < formula_threshold,
               "vmax below the criterion threshold from ndof 32769 on");
      c.expect(r.uniqueness_flag.value_or(false),
               "uniqueness flag set at ndof 32769");
    }
  }
  std::printf(
      "    thresholds: criterion formula %.5f; literal comparison value "
      "0.17239892 (does not equal the formula with C_F = sqrt(2)/pi)\n",
      formula_threshold);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 7. L-shape adaptive vs uniform decay rates down to ndof ~ 1e5.
bool criterion7() {
  CheckList c;
  RunConfig config;
  config.problem = "lshape";
  config.model = "example-a";
  config.max_ndof = 100000;
  config.gevp_max_ndof = 1;
  config.write_meshes = false;

  config.refine = "adaptive";
  const RunResult adaptive = adaptive_loop(config);
  config.refine = "uniform";
  const RunResult uniform = adaptive_loop(config);
  c.expect(adaptive.exit_status == 0 && uniform.exit_status == 0,
           "runs complete");

  const RunRecord& coarse = adaptive.records.front();
  std::printf("    coarsest level: eta %.6f (ref 1.77434), "
              "energy_diff_sqrt %.6f (ref 0.150186)\n",
              coarse.eta, *coarse.energy_diff_sqrt);
  c.expect(close_rel(coarse.eta, 1.77434, 0.01), "coarsest eta within 1%");
  c.expect(close_rel(*coarse.energy_diff_sqrt, 0.150186, 0.02),
           "energy_diff_sqrt at ndof 25 within 2%");

  const double rate_adaptive = fitted_decay_rate(adaptive.records, 4);
  const double rate_uniform = fitted_decay_rate(uniform.records, 4);
  std::printf("    adaptive: %zu levels to ndof %ld, eta rate %.4f (needs >= 0.45)\n",
              adaptive.records.size(), adaptive.records.back().ndof,
              rate_adaptive);
  std::printf("    uniform:  %zu levels to ndof %ld, eta rate %.4f (needs <= 0.40)\n",
              uniform.records.size(), uniform.records.back().ndof,
              rate_uniform);
  c.expect(rate_adaptive >= 0.45, "adaptive eta rate >= 0.45");
  c.expect(rate_uniform <= 0.40, "uniform eta rate <= 0.40");
  return c.ok;
}

// ---------------------------------------------------------------------------
// 8. guaranteed bound dominates the energy error on every square level.
bool criterion8() {
  CheckList c;
  RunConfig config = square_config(33000, 1);
  config.c_df = 6.24;
  config.kappa = 0.29823;
  const RunResult result = adaptive_loop(config);
  c.expect(result.exit_status == 0, "run completes");
  for (const RunRecord& r : result.records) {
    std::printf("    ndof %ld: guaranteed %.6f vs error_energy %.6f\n", r.ndof,
                *r.guaranteed, *r.error_energy);
    c.expect(r.guaranteed.value_or(0.0) >= r.error_energy.value_or(1e300),
             "bound >= error at ndof " + std::to_string(r.ndof));
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// 9. structural invariants.
bool criterion9() {
  CheckList c;
  std::mt19937 rng(909);
  std::normal_distribution<double> dist;

  // NVB regularity and S0 bounds on randomly refined meshes.
  for (Mesh mesh : {make_square_mesh(), make_lshape_mesh()}) {
    for (int round = 0; round < 6; ++round) {
      std::vector<int> marked;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        if (rng() % 3 == 0) marked.push_back(t);
      }
      mesh = refine_nvb(mesh, marked);
      try {
        check_regular(mesh);
      } catch (const std::exception& e) {
        c.expect(false, std::string("regularity: ") + e.what());
      }
    }
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Mat2 s0 = s0_matrix(mesh, t);
      Eigen::SelfAdjointEigenSolver<Mat2> es(s0);
      const double h = mesh.geom().diameter[t];
      c.expect(es.eigenvalues()(0) >= -1e-15, "S0 positive semidefinite");
      c.expect(es.eigenvalues()(1) <= h * h, "S0 eigenvalues below h^2");
    }
    std::printf("    regularity + S0 bounds hold on %d triangles\n",
                mesh.num_triangles());

    // P1 norm identity.
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int t = static_cast<int>(rng() % mesh.num_triangles());
      const Eigen::Vector3d nodal(dist(rng), dist(rng), dist(rng));
      const double h1 = nodal.dot(p1_h1_gram(mesh, t) * nodal);
      Vec2 grad = Vec2::Zero();
      for (int i = 0; i < 3; ++i) grad += nodal[i] * mesh.geom().grad_p1[t][i];
      const double pi0 = nodal.sum() / 3.0;
      const Mat2 is0 = Mat2::Identity() + s0_matrix(mesh, t);
      const double split =
          mesh.geom().area[t] * (pi0 * pi0 + grad.dot(is0 * grad));
      worst = std::max(worst, std::abs(h1 - split) / std::max(1.0, h1));
    }
    std::printf("    P1 norm identity defect %.3e\n", worst);
    c.expect(worst <= 1e-12, "P1 norm identity");
  }

  // Fortin orthogonality on a locally refined L-shape mesh.
  {
    const Mesh mesh = refine_nvb(make_lshape_mesh(), {0, 4, 8});
    const DofLayout dofs(mesh);
    const PhiModel model = PhiModel::example_a();
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd u(dofs.n_s10), w(dofs.n_s10), s0(dofs.n_rt);
      for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
      for (int i = 0; i < w.size(); ++i) w[i] = dist(rng);
      for (int i = 0; i < s0.size(); ++i) s0[i] = dist(rng);
      std::vector<Eigen::Matrix<double, 6, 1>> coef(mesh.num_triangles());
      for (auto& cf : coef) {
        for (int i = 0; i < 6; ++i) cf[i] = dist(rng);
      }
      auto v = [&](int t, const Vec2& x) {
        const auto& cf = coef[t];
        return cf[0] + cf[1] * x.x() + cf[2] * x.y() + cf[3] * x.x() * x.x() +
               cf[4] * x.x() * x.y() + cf[5] * x.y() * x.y();
      };
      auto grad_v = [&](int t, const Vec2& x) {
        const auto& cf = coef[t];
        return Vec2(cf[1] + 2 * cf[3] * x.x() + cf[4] * x.y(),
                    cf[2] + cf[4] * x.x() + 2 * cf[5] * x.y());
      };
      const Eigen::VectorXd iv = inc_interpolate(mesh, v);
      double total = 0.0;
      const auto& rule = tri_rule_degree4();
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        const Mat2 dsig = model.dsigma(grad_u_on_triangle(mesh, dofs, u, t));
        const Vec2 grad_w = grad_u_on_triangle(mesh, dofs, w, t);
        const Vec2 grad_iv = broken_grad_on_triangle(mesh, iv, t);
        total += integrate_triangle(
            rule, mesh.vertex(tri[0]), mesh.vertex(tri[1]),
            mesh.vertex(tri[2]), mesh.geom().area[t], [&](const Vec2& x) {
              return grad_w.dot(dsig * (grad_v(t, x) - grad_iv));
            });
        const auto& te = mesh.triangle_edges(t);
        for (int k = 0; k < 3; ++k) {
          const Vec2 a = mesh.vertex(tri[(k + 1) % 3]);
          const Vec2 b = mesh.vertex(tri[(k + 2) % 3]);
          const double iv_avg = 0.5 * (iv[3 * t + (k + 1) % 3] +
                                       iv[3 * t + (k + 2) % 3]);
          total -= mesh.normal_sign(t, te[k]) * s0[te[k]] *
                   (integrate_segment(a, b,
                                      [&](const Vec2& x) { return v(t, x); }) -
                    (b - a).norm() * iv_avg);
        }
      }
      worst = std::max(worst, std::abs(total));
    }
    std::printf("    Fortin orthogonality defect %.3e\n", worst);
    c.expect(worst <= 1e-12, "Fortin orthogonality");
  }

  // CR midpoint continuity of the converged representer.
  {
    const PhiModel model = PhiModel::example_a();
    const Problem problem = make_square_problem(model);
    Mesh mesh = refine_uniform_nvb(problem.initial_mesh);
    mesh = refine_uniform_nvb(mesh);
    const DofLayout dofs(mesh);
    const auto weights = compute_weights(mesh, problem.f);
    const XNormOperator xnorm(mesh);
    const NewtonReport rep =
        newton(mesh, dofs, model, weights,
               linear_init(mesh, dofs, 1.0, weights), xnorm, {1e-13, 25});
    c.expect(rep.converged, "benchmark solve converges");
    const Eigen::VectorXd v =
        riesz_representer(mesh, dofs, model, weights, rep.state);
    double worst = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const auto& et = mesh.edge_triangles(e);
      double val[2] = {0.0, 0.0};
      for (int side = 0; side < 2; ++side) {
        const int t = et[side];
        if (t < 0) continue;
        const auto& tri = mesh.triangle(t);
        for (int i = 0; i < 3; ++i) {
          if (tri[i] == mesh.edge(e)[0] || tri[i] == mesh.edge(e)[1]) {
            val[side] += 0.5 * v[3 * t + i];
          }
        }
      }
      worst = std::max(
          worst, et[1] >= 0 ? std::abs(val[0] - val[1]) : std::abs(val[0]));
    }
    std::printf("    representer midpoint jump %.3e at ndof %d\n", worst,
                dofs.ndof);
    c.expect(worst <= 1e-10, "CR conformity of the converged representer");
  }

  // Doerfler minimality by brute force.
  {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool all_ok = true;
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 5 + static_cast<int>(rng() % 8);
      Eigen::VectorXd ind(n);
      for (int i = 0; i < n; ++i) ind[i] = uni(rng);
      const double theta = 0.1 + 0.8 * uni(rng);
      const auto marked = doerfler_mark(ind, theta);
      double acc = 0.0;
      for (int t : marked) acc += ind[t];
      all_ok = all_ok && acc >= theta * ind.sum() - 1e-14;
      int best = n;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
          if (mask & (1u << i)) {
            s += ind[i];
            ++count;
          }
        }
        if (s >= theta * ind.sum()) best = std::min(best, count);
      }
      all_ok = all_ok && static_cast<int>(marked.size()) == best;
    }
    std::printf("    Doerfler minimality verified on 25 random indicator sets\n");
    c.expect(all_ok, "Doerfler bulk marking is minimal");
  }
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"dual-norm oracle equality", criterion1},
      {"derivative consistency", criterion2},
      {"Newton convergence pattern", criterion3},
      {"uniform square history", criterion4},
      {"minimality certificates", criterion5},
      {"uniqueness criterion trajectory", criterion6},
      {"L-shape adaptive vs uniform rates", criterion7},
      {"guaranteed bound validity", criterion8},
      {"structural invariants", criterion9},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.push_back(std::atoi(argv[i]));
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria.size(); ++i) {
      selected.push_back(static_cast<int>(i));
    }
  }

  int failures = 0;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << k << "\n";
      return 1;
    }
    const auto& [name, fn] = criteria[k - 1];
    std::cout << "criterion " << k << " (" << name << "):\n";
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::cout << "    exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << k << ": "
              << name << "\n";
    if (!ok) ++failures;
  }
  return failures;
}
