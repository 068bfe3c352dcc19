#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <gna/expr.hpp>
#include <gna/spectra.hpp>
#include <gna/symplectic.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gna;
using testsupport::Rng;

namespace {
GridPtr grid() { return EpsGrid::default_grid(); }
ClassifierConfig cfg() { return ClassifierConfig{}; }

// diag(1 - c, c) with c = chi(even(k)): the interleaved projector.
GenMatrix interleaved_projector(const GridPtr& g) {
  const auto c = eval_scalar("chi(even(k))", g);
  std::vector<GenScalar> ent = {GenScalar::constant(g, 1.0) - c,
                                GenScalar::constant(g, 0.0),
                                GenScalar::constant(g, 0.0), c};
  return GenMatrix(2, 2, std::move(ent));
}

GenMatrix rotation_block(const GridPtr& g, double w) {
  std::vector<GenScalar> ent = {GenScalar::constant(g, 0.0), GenScalar::constant(g, -w),
                                GenScalar::constant(g, w), GenScalar::constant(g, 0.0)};
  return GenMatrix(2, 2, std::move(ent));
}
} // namespace

TEST_CASE("interleaved projector: eigenvalue criterion and eigenvectors") {
  auto g = grid();
  auto c = cfg();
  const auto a = interleaved_projector(g);
  const auto ch = eval_scalar("chi(even(k))", g);
  const auto one = GenScalar::constant(g, 1.0);

  for (const auto& lam : {GenScalar::constant(g, 0.0), one, ch, one - ch}) {
    const auto chk = is_eigenvalue(a, lam, c);
    CHECK(chk.is_eigenvalue);
    // det(A - lambda I) vanishes bit-for-bit at these roots.
    const auto d = det(a - scale(lam, GenMatrix::identity(g, 2)));
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(d.sample(i) == Cplx(0, 0));
  }

  const auto half = GenScalar::constant(g, 0.5);
  const auto bad = is_eigenvalue(a, half, c);
  CHECK_FALSE(bad.is_eigenvalue);
  CHECK(is_strictly_nonzero(bad.det_report));
  // det(A - I/2) is exactly -1/4 everywhere.
  const auto d = det(a - scale(half, GenMatrix::identity(g, 2)));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(d.sample(i) == Cplx(-0.25, 0));

  const auto v = eigenpair_from_root(a, ch, c);
  CHECK(is_negligible(classify(norm_sq(v) - one, c)));
  CHECK(entrywise_negligible(a * v - scale(ch, v), c).negligible);

  CHECK_THROWS_AS(eigenpair_from_root(a, half, c), PreconditionError);
}

TEST_CASE("hermitian eigentuple: frozen 2x2 values and ordering") {
  auto g = grid();
  auto c = cfg();
  // [[2, 1], [1, 2]]: spectrum {3, 1}.
  std::vector<GenScalar> ent = {GenScalar::constant(g, 2.0), GenScalar::constant(g, 1.0),
                                GenScalar::constant(g, 1.0), GenScalar::constant(g, 2.0)};
  const GenMatrix a(2, 2, std::move(ent));
  const auto he = hermitian_eigentuple(a, c);
  REQUIRE(he.tuple.values.size() == 2);
  CHECK(he.tuple.kind == EigenTupleKind::hermitian_real);
  CHECK(he.tuple.values[0].real_sample(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(he.tuple.values[1].real_sample(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(he.u.kind() == ScalarKind::real);

  // Complex Hermitian [[2, i], [-i, 2]]: same spectrum.
  std::vector<GenScalar> ent2 = {GenScalar::constant(g, 2.0),
                                 GenScalar::constant(g, Cplx(0, 1)),
                                 GenScalar::constant(g, Cplx(0, -1)),
                                 GenScalar::constant(g, 2.0)};
  const GenMatrix b(2, 2, std::move(ent2));
  const auto hb = hermitian_eigentuple(b, c);
  CHECK(hb.tuple.values[0].real_sample(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(hb.tuple.values[1].real_sample(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian eigentuple matches the embedding oracle") {
  Rng rng(20260840);
  auto g = grid();
  auto c = cfg();
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 2 + rep % 5;
    const auto a = testsupport::random_hermitian(rng, g, n, rep % 2 == 1);
    const auto he = hermitian_eigentuple(a, c);
    const auto oracle = testsupport::hermitian_spectrum_oracle(testsupport::to_cmat(a, 0));
    REQUIRE(oracle.size() == n);
    for (std::size_t k = 0; k < n; ++k) {
      // Library order is descending, oracle ascending.
      const double got = he.tuple.values[k].real_sample(0);
      const double want = oracle[n - 1 - k];
      CHECK(std::abs(got - want) <= 1e-9);
    }
    CHECK(entrywise_negligible(conj_transpose(he.u) * he.u - GenMatrix::identity(g, n), c)
              .negligible);
  }
}

TEST_CASE("symmetrization guards reject the wrong symmetry class") {
  auto g = grid();
  auto c = cfg();
  const auto rot = rotation_block(g, 3.0);
  CHECK_THROWS_AS(hermitize(rot, c), SymmetryError);
  std::vector<GenScalar> sym = {GenScalar::constant(g, 1.0), GenScalar::constant(g, 2.0),
                                GenScalar::constant(g, 2.0), GenScalar::constant(g, 1.0)};
  const GenMatrix s(2, 2, std::move(sym));
  CHECK_THROWS_AS(skew_symmetrize(s, c), SymmetryError);
  const auto zc = scale(GenScalar::constant(g, Cplx(0, 1)), GenMatrix::identity(g, 2));
  CHECK_THROWS_AS(skew_symmetrize(zc, c), PreconditionError);
  // A negligible asymmetry is repaired, not rejected.
  const auto e9 = pow_int(GenScalar::eps_net(g), 9);
  std::vector<GenScalar> near = {GenScalar::constant(g, 1.0),
                                 GenScalar::constant(g, 2.0) + e9,
                                 GenScalar::constant(g, 2.0), GenScalar::constant(g, 1.0)};
  const GenMatrix ns(2, 2, std::move(near));
  const auto fixed = hermitize(ns, c);
  CHECK(fixed.at(0, 1) == fixed.at(1, 0));
}

TEST_CASE("skew eigentuple: exact pairing and exact odd-dimension zero") {
  Rng rng(20260841);
  auto g = grid();
  auto c = cfg();
  const auto rot = rotation_block(g, 3.0);
  const auto t = skew_eigentuple(rot, c);
  REQUIRE(t.values.size() == 2);
  CHECK(t.kind == EigenTupleKind::skew_imaginary);
  CHECK(t.values[0].sample(0).imag() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.values[0].sample(0).real() == 0.0);
  // The +-i lambda pairing is exact, not just approximate.
  for (std::size_t i = 0; i < g->size(); ++i)
    CHECK(t.values[0].sample(i) == -t.values[1].sample(i));

  for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
    const auto a = testsupport::random_skew(rng, g, n);
    const auto tu = skew_eigentuple(a, c);
    REQUIRE(tu.values.size() == n);
    const auto& mid = tu.values[n / 2];
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(mid.sample(i) == Cplx(0, 0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i : {std::size_t{0}, std::size_t{36}})
        CHECK(tu.values[k].sample(i) == -tu.values[n - 1 - k].sample(i));
  }
}

TEST_CASE("skew eigentuple matches the iA embedding oracle") {
  Rng rng(20260842);
  auto g = grid();
  auto c = cfg();
  for (std::size_t n : {std::size_t{2}, std::size_t{4}, std::size_t{5}}) {
    const auto a = testsupport::random_skew(rng, g, n);
    const auto tu = skew_eigentuple(a, c);
    const auto alpha = testsupport::skew_i_spectrum_oracle(testsupport::to_rmat(a, 0));
    for (std::size_t k = 0; k < n; ++k) {
      // values are -i * alpha_k with alpha ascending, ordered by descending
      // imaginary part: values[k].imag = -alpha_k reversed.
      const double got = tu.values[k].sample(0).imag();
      const double want = -alpha[k];
      CHECK(std::abs(got - want) <= 1e-9);
    }
  }
}

TEST_CASE("skew normal form: blocks, orthogonality, descending angles") {
  Rng rng(20260843);
  auto g = grid();
  auto c = cfg();

  const auto rot = rotation_block(g, 3.0);
  const auto nf = skew_normal_form(rot, c);
  REQUIRE(nf.lambdas.size() == 1);
  CHECK(nf.block_count == 1);
  CHECK(nf.zero_block_count == 0);
  CHECK(nf.lambdas[0].real_sample(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_FALSE(nf.indeterminate[0]);

  for (std::size_t n : {std::size_t{3}, std::size_t{4}, std::size_t{5}}) {
    const auto a = testsupport::random_skew(rng, g, n, n % 2 == 0 ? 2 : 0);
    const auto f = skew_normal_form(a, c);
    CHECK(entrywise_negligible(transpose(f.v) * f.v - GenMatrix::identity(g, n), c)
              .negligible);
    REQUIRE(f.lambdas.size() == n / 2);
    for (std::size_t k = 0; k + 1 < f.lambdas.size(); ++k)
      for (std::size_t i : {std::size_t{0}, std::size_t{36}})
        CHECK(f.lambdas[k].real_sample(i) >= f.lambdas[k + 1].real_sample(i));
    if (n % 2 == 1) CHECK(f.zero_block_count >= 1);
    CHECK(f.block_count * 2 + f.zero_block_count == n);
  }
}

TEST_CASE("skew_to_standard_j produces a J-congruence for invertible input") {
  Rng rng(20260844);
  auto g = grid();
  auto c = cfg();
  const auto rot = rotation_block(g, 3.0);
  const auto v = skew_to_standard_j(rot, c);
  const auto j = SymplecticForm::standard(g, 1).gram();
  CHECK(entrywise_negligible(transpose(v) * rot * v - j, c).negligible);

  const auto a4 = testsupport::random_skew(rng, g, 4);
  REQUIRE(is_invertible(a4, c).invertible);
  const auto v4 = skew_to_standard_j(a4, c);
  const auto j4 = SymplecticForm::standard(g, 2).gram();
  CHECK(entrywise_negligible(transpose(v4) * a4 * v4 - j4, c).negligible);

  // Odd dimension is always degenerate; the failure carries the evidence.
  const auto a3 = testsupport::random_skew(rng, g, 3);
  try {
    skew_to_standard_j(a3, c);
    FAIL("expected NonInvertibleError");
  } catch (const NonInvertibleError& e) {
    CHECK(is_negligible(e.report));
    CHECK(std::string(e.what()).find("negligible") != std::string::npos);
  }
}

TEST_CASE("characteristic polynomial probes certify the factorization") {
  Rng rng(20260845);
  auto g = grid();
  auto c = cfg();
  const auto h = testsupport::random_hermitian(rng, g, 3, true);
  const auto hr = char_poly_roots_distinguished(h, EigenTupleKind::hermitian_real, c);
  CHECK(hr.probes.size() == 4);
  for (const auto& p : hr.probes) CHECK(is_negligible(p.residual));

  const auto s = testsupport::random_skew(rng, g, 5);
  const auto sr = char_poly_roots_distinguished(s, EigenTupleKind::skew_imaginary, c);
  CHECK(sr.probes.size() == 6);
  for (const auto& p : sr.probes) CHECK(is_negligible(p.residual));
}

TEST_CASE("representative stability under deep perturbations") {
  Rng rng(20260846);
  auto g = grid();
  auto c = cfg();
  const auto a = testsupport::random_hermitian(rng, g, 4, false);
  // Same Hermitian representative plus an eps^10 Hermitian perturbation.
  Eigen::MatrixXcd p = testsupport::rand_mat(rng, 4, 4, 1.0).cast<Cplx>();
  p = 0.5 * (p + p.adjoint().eval());
  std::vector<Eigen::MatrixXcd> samples(g->size());
  for (std::size_t i = 0; i < g->size(); ++i)
    samples[i] = sample_complex(a, i) + std::pow(g->eps(i), 10.0) * p;
  const auto b = matrix_from_samples(g, samples, ScalarKind::real);

  const auto rep = representative_stability_check(a, b, c);
  CHECK(rep.pass);
  CHECK(rep.weyl_samplewise);
  CHECK(is_negligible(rep.shift_report));
  CHECK(rep.worst_margin >= 0.0);

  // A unit-size shift is not a negligible perturbation.
  const auto far = add(a, GenMatrix::identity(g, 4));
  CHECK_THROWS_AS(representative_stability_check(a, far, c), PreconditionError);
  CHECK_THROWS_AS(representative_stability_check(a, GenMatrix::identity(g, 3), c),
                  StructuralError);
}
