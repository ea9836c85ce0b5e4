#include <benchmark/benchmark.h>

#include "dpgls/run.hpp"

using namespace dpgls;

namespace {

struct Fixture {
  Mesh mesh;
  DofLayout dofs;
  PhiModel model;
  std::vector<ElementWeights> weights;
  DiscreteState state;

  explicit Fixture(int levels)
      : mesh(build_mesh(levels)),
        dofs(mesh),
        model(PhiModel::example_a()),
        weights(compute_weights(
            mesh, manufactured_rhs(model, square_exact_solution()))),
        state(linear_init(mesh, dofs, 1.0, weights)) {}

  static Mesh build_mesh(int levels) {
    Mesh mesh = refine_uniform_nvb(make_square_mesh());
    for (int i = 1; i < levels; ++i) mesh = refine_uniform_nvb(mesh);
    return mesh;
  }
};

Fixture& fixture(int levels) {
  static Fixture small(3);   // ndof 513
  static Fixture medium(5);  // ndof 8193
  return levels <= 3 ? small : medium;
}

void BM_LsEval(benchmark::State& bench) {
  Fixture& f = fixture(static_cast<int>(bench.range(0)));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(
        ls_eval(f.mesh, f.dofs, f.model, f.weights, f.state));
  }
  bench.SetItemsProcessed(bench.iterations() * f.mesh.num_triangles());
}
BENCHMARK(BM_LsEval)->Arg(3)->Arg(5);

void BM_RieszRepresenter(benchmark::State& bench) {
  Fixture& f = fixture(static_cast<int>(bench.range(0)));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(
        riesz_representer(f.mesh, f.dofs, f.model, f.weights, f.state));
  }
  bench.SetItemsProcessed(bench.iterations() * f.mesh.num_triangles());
}
BENCHMARK(BM_RieszRepresenter)->Arg(3)->Arg(5);

void BM_NewtonSolve(benchmark::State& bench) {
  Fixture& f = fixture(static_cast<int>(bench.range(0)));
  const XNormOperator xnorm(f.mesh);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(
        newton(f.mesh, f.dofs, f.model, f.weights, f.state, xnorm, {}));
  }
}
BENCHMARK(BM_NewtonSolve)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_UniformRefine(benchmark::State& bench) {
  Fixture& f = fixture(static_cast<int>(bench.range(0)));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(refine_uniform_nvb(f.mesh));
  }
  bench.SetItemsProcessed(bench.iterations() * f.mesh.num_triangles());
}
BENCHMARK(BM_UniformRefine)->Arg(3)->Arg(5);

void BM_GevpExtremes(benchmark::State& bench) {
  Fixture& f = fixture(3);
  const XNormOperator xnorm(f.mesh);
  const SparseMat hess =
      ls_hessian(f.mesh, f.dofs, f.model, f.weights, f.state);
  GevpOptions opts;
  opts.dense_threshold = static_cast<int>(bench.range(0));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(gevp_extremes(hess, xnorm, opts));
  }
}
BENCHMARK(BM_GevpExtremes)->Arg(1)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
