// Microbenchmarks for the hot paths: classification, determinants, the
// symplectic basis recursion, and the two spectral decompositions.  Inputs
// are deterministic (fixed seed) and built outside the timed region.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

#include <gna/classify.hpp>
#include <gna/expr.hpp>
#include <gna/linalg.hpp>
#include <gna/spectra.hpp>
#include <gna/symplectic.hpp>

using namespace gna;

namespace {

const GridPtr& bench_grid() {
  static const GridPtr g = EpsGrid::default_grid();
  return g;
}

GenMatrix lift(const Eigen::MatrixXcd& m, ScalarKind kind) {
  std::vector<GenScalar> entries;
  entries.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back(kind == ScalarKind::real
                            ? GenScalar::constant(bench_grid(), m(r, c).real())
                            : GenScalar::constant(bench_grid(), m(r, c)));
  return GenMatrix(static_cast<std::size_t>(m.rows()),
                   static_cast<std::size_t>(m.cols()), std::move(entries));
}

Eigen::MatrixXcd random_dense(std::size_t n, bool complex_kind) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = complex_kind ? std::complex<double>(u(rng), u(rng))
                             : std::complex<double>(u(rng), 0.0);
  return m;
}

void BM_classify(benchmark::State& state) {
  const GenScalar a = eval_scalar("eps^3 + eps^5", bench_grid());
  const ClassifierConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(classify(a, cfg));
}
BENCHMARK(BM_classify);

void BM_det(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GenMatrix a = lift(random_dense(n, false), ScalarKind::real);
  for (auto _ : state) benchmark::DoNotOptimize(det(a));
}
BENCHMARK(BM_det)->DenseRange(2, 8, 2);

void BM_symplectic_basis(benchmark::State& state) {
  const std::size_t n_pairs = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 2 * n_pairs;
  const ClassifierConfig cfg;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  j.topRightCorner(n_pairs, n_pairs) =
      -Eigen::MatrixXd::Identity(n_pairs, n_pairs);
  j.bottomLeftCorner(n_pairs, n_pairs) =
      Eigen::MatrixXd::Identity(n_pairs, n_pairs);
  Eigen::MatrixXd r =
      Eigen::MatrixXd::Identity(dim, dim) + 0.3 * random_dense(dim, false).real();
  const Eigen::MatrixXd gram0 = r.transpose() * j * r;
  const Eigen::MatrixXd skew = 0.5 * (gram0 - gram0.transpose().eval());
  const SymplecticForm form =
      SymplecticForm::from_gram(lift(skew.cast<std::complex<double>>(),
                                     ScalarKind::real),
                                cfg);
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_basis(form, cfg));
}
BENCHMARK(BM_symplectic_basis)->DenseRange(1, 4);

void BM_hermitian_eigentuple(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ClassifierConfig cfg;
  Eigen::MatrixXcd m = random_dense(n, true);
  m = 0.5 * (m + m.adjoint().eval());
  const GenMatrix a = lift(m, ScalarKind::complex);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigentuple(a, cfg));
}
BENCHMARK(BM_hermitian_eigentuple)->DenseRange(2, 6, 2);

void BM_skew_normal_form(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ClassifierConfig cfg;
  Eigen::MatrixXd m = random_dense(n, false).real();
  const Eigen::MatrixXd skew = 0.5 * (m - m.transpose().eval());
  const GenMatrix a = lift(skew.cast<std::complex<double>>(), ScalarKind::real);
  for (auto _ : state) benchmark::DoNotOptimize(skew_normal_form(a, cfg));
}
BENCHMARK(BM_skew_normal_form)->DenseRange(3, 7, 2);

} // namespace

BENCHMARK_MAIN();
