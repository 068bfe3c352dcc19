#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gna/expr.hpp>
#include <gna/linalg.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gna;
using testsupport::Rng;

namespace {
GridPtr grid() { return EpsGrid::default_grid(); }
ClassifierConfig cfg() { return ClassifierConfig{}; }

GenScalar chi_even(const GridPtr& g) {
  return eval_scalar("chi(even(k))", g);
}

// Monomial matrix: entry +-2^e at (r, perm[r]), zero elsewhere.  Its
// determinant is sign(perm) * prod(entries), exactly representable, and LU
// with partial pivoting computes it without any rounding arithmetic.
struct Monomial {
  std::vector<std::size_t> perm;
  std::vector<double> entry; // value at (r, perm[r])
};

Monomial random_monomial(Rng& rng, std::size_t n) {
  Monomial m;
  m.perm.resize(n);
  std::iota(m.perm.begin(), m.perm.end(), 0);
  std::shuffle(m.perm.begin(), m.perm.end(), rng);
  m.entry.resize(n);
  for (auto& e : m.entry) {
    e = std::ldexp(1.0, static_cast<int>(testsupport::rint(rng, -3, 3)));
    if (testsupport::rint(rng, 0, 1)) e = -e;
  }
  return m;
}

double parity_sign(std::vector<std::size_t> p) {
  double s = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != i) {
      std::swap(p[i], p[p[i]]);
      s = -s;
    }
  return s;
}

GenMatrix monomial_matrix(const GridPtr& g, const Monomial& m) {
  const std::size_t n = m.perm.size();
  std::vector<GenScalar> entries(n * n, GenScalar::constant(g, 0.0));
  for (std::size_t r = 0; r < n; ++r)
    entries[r * n + m.perm[r]] = GenScalar::constant(g, m.entry[r]);
  return GenMatrix(n, n, std::move(entries));
}

double monomial_det(const Monomial& m) {
  double d = parity_sign(m.perm);
  for (double e : m.entry) d *= e;
  return d;
}
} // namespace

TEST_CASE("determinant matches the cofactor oracle") {
  Rng rng(20260820);
  auto g = grid();
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const bool cx = rep % 2 == 1;
      const Eigen::MatrixXcd m0 = cx ? testsupport::rand_cmat(rng, n, n, 1.0)
                                     : testsupport::rand_mat(rng, n, n, 1.0).cast<Cplx>();
      const auto a = testsupport::constant_matrix(
          g, m0, cx ? ScalarKind::complex : ScalarKind::real);
      const Cplx got = det(a).sample(0);
      const Cplx want = testsupport::cofactor_det(testsupport::to_cmat(a, 0));
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
  // eps-dependent entries: checked per sample at the ends and mid-tail.
  const Eigen::MatrixXcd m0 = testsupport::rand_mat(rng, 4, 4, 1.0).cast<Cplx>();
  const Eigen::MatrixXcd m1 = testsupport::rand_mat(rng, 4, 4, 1.0).cast<Cplx>();
  const auto a = testsupport::net_matrix(g, m0, m1, 1, ScalarKind::real);
  const auto d = det(a);
  for (std::size_t i : {std::size_t{0}, std::size_t{18}, std::size_t{36}}) {
    const Cplx want = testsupport::cofactor_det(testsupport::to_cmat(a, i));
    CHECK(std::abs(d.sample(i) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("determinant is exactly multiplicative on monomial matrices") {
  Rng rng(20260821);
  auto g = grid();
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rep % 5;
    const auto ma = random_monomial(rng, n);
    const auto mb = random_monomial(rng, n);
    const auto a = monomial_matrix(g, ma);
    const auto b = monomial_matrix(g, mb);
    const auto ab = a * b;
    const double da = monomial_det(ma), db = monomial_det(mb);
    for (std::size_t i : {std::size_t{0}, std::size_t{36}}) {
      CHECK(det(a).sample(i) == Cplx(da, 0));
      CHECK(det(b).sample(i) == Cplx(db, 0));
      CHECK(det(ab).sample(i) == Cplx(da * db, 0));
    }
  }
}

TEST_CASE("det(AB) - det(A)det(B) is negligible for general matrices") {
  Rng rng(20260822);
  auto g = grid();
  auto c = cfg();
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t n = 2 + rep % 4;
    const auto a = testsupport::constant_matrix(
        g, testsupport::rand_mat(rng, n, n, 1.0).cast<Cplx>(), ScalarKind::real);
    const auto b = testsupport::constant_matrix(
        g, testsupport::rand_mat(rng, n, n, 1.0).cast<Cplx>(), ScalarKind::real);
    const auto resid = det(a * b) - det(a) * det(b);
    CHECK(is_negligible(classify(resid, c)));
  }
}

TEST_CASE("solve verifies its residual and rejects degenerate systems") {
  Rng rng(20260823);
  auto g = grid();
  auto c = cfg();
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 2 + rep;
    Eigen::MatrixXd m0;
    do {
      m0 = Eigen::MatrixXd::Identity(n, n) + 0.4 * testsupport::rand_mat(rng, n, n, 1.0);
    } while (testsupport::cond2(m0) > 100.0);
    const auto a = testsupport::constant_matrix(g, m0.cast<Cplx>(), ScalarKind::real);
    const auto b = testsupport::random_constant_vector(rng, g, n);
    const auto x = solve(a, b, c);
    CHECK(entrywise_negligible(a * x - b, c).negligible);
  }

  // diag(1, chi): determinant is an idempotent, a zero divisor.
  const auto ch = chi_even(g);
  std::vector<GenScalar> ent = {GenScalar::constant(g, 1.0), GenScalar::constant(g, 0.0),
                                GenScalar::constant(g, 0.0), ch};
  const GenMatrix sing(2, 2, ent);
  const auto inv = is_invertible(sing, c);
  CHECK_FALSE(inv.invertible);
  CHECK(inv.det_report.classification == Classification::zero_divisor_like);
  CHECK_THROWS_AS(solve(sing, GenVector::unit(g, 2, 0), c), NonInvertibleError);
}

TEST_CASE("span membership by per-sample least squares") {
  Rng rng(20260824);
  auto g = grid();
  auto c = cfg();
  const auto g1 = testsupport::random_constant_vector(rng, g, 4);
  const auto g2 = testsupport::random_constant_vector(rng, g, 4);
  const auto inside =
      add(scale(GenScalar::constant(g, 2.0), g1), scale(GenScalar::constant(g, -3.0), g2));
  CHECK(in_span({g1, g2}, inside, c).member);
  const auto outside = testsupport::random_constant_vector(rng, g, 4);
  CHECK_FALSE(in_span({g1, g2}, outside, c).member);
  // Empty generating set spans only the negligible vectors.
  CHECK(in_span({}, GenVector::zeros(g, 4), c).member);
  CHECK_FALSE(in_span({}, g1, c).member);
}

TEST_CASE("freeness: interleaved unit vector is free, idempotent multiple is not") {
  auto g = grid();
  auto c = cfg();
  const auto ch = chi_even(g);
  const auto one_minus = GenScalar::constant(g, 1.0) - ch;
  const GenVector mixed({ch, one_minus});
  CHECK(is_free(mixed, c));
  CHECK(free_report(mixed, c).classification == Classification::strictly_positive);
  const GenVector stuck({ch, GenScalar::constant(g, 0.0)});
  CHECK_FALSE(is_free(stuck, c));

  CHECK(is_free_set({GenVector::unit(g, 3, 0), GenVector::unit(g, 3, 1)}, c));
  const auto v = GenVector::unit(g, 3, 2);
  CHECK_FALSE(is_free_set({v, scale(GenScalar::constant(g, 2.0), v)}, c));
}

TEST_CASE("extend_to_basis completes free sets to invertible square matrices") {
  Rng rng(20260825);
  auto g = grid();
  auto c = cfg();

  const auto ch = chi_even(g);
  const GenVector mixed({ch, GenScalar::constant(g, 1.0) - ch});
  const auto basis2 = extend_to_basis({mixed}, c);
  REQUIRE(basis2.size() == 2);
  CHECK(is_strictly_nonzero(classify(det(GenMatrix::from_columns(basis2)), c)));
  // The given vector is kept bit-for-bit.
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(basis2[0][j] == mixed[j]);

  Eigen::VectorXcd vc(3);
  vc << Cplx(0.3, 0.1), Cplx(-0.2, 0.7), Cplx(0.9, 0.0);
  const auto vfree = testsupport::constant_vector(g, vc, ScalarKind::complex);
  const auto basis3 = extend_to_basis({vfree}, c);
  REQUIRE(basis3.size() == 3);
  CHECK(is_strictly_nonzero(classify(det(GenMatrix::from_columns(basis3)), c)));

  CHECK_THROWS_AS(
      extend_to_basis({GenVector::unit(g, 2, 0), GenVector::unit(g, 2, 1),
                       GenVector::unit(g, 2, 0)},
                      c),
      PreconditionError);
}

TEST_CASE("kernel vectors of a certified eigenvalue") {
  auto g = grid();
  auto c = cfg();
  // A = diag(1, 2), lambda = 1.
  std::vector<GenScalar> ent = {GenScalar::constant(g, 0.0), GenScalar::constant(g, 0.0),
                                GenScalar::constant(g, 0.0), GenScalar::constant(g, 1.0)};
  const GenMatrix b(2, 2, ent); // A - I
  const auto v = kernel_free_vector(b, c);
  CHECK(is_negligible(classify(norm_sq(v) - GenScalar::constant(g, 1.0), c)));
  CHECK(entrywise_negligible(b * v, c).negligible);

  const auto vr = realify_kernel_vector(v, b, c);
  CHECK(vr.kind() == ScalarKind::real);
  CHECK(is_free(vr, c));
  CHECK(entrywise_negligible(b * vr, c).negligible);

  CHECK_THROWS_AS(kernel_free_vector(GenMatrix::identity(g, 2), c), PreconditionError);
}

TEST_CASE("entrywise negligibility tracks the max-entry net") {
  auto g = grid();
  auto c = cfg();
  const auto e9 = pow_int(GenScalar::eps_net(g), 9);
  const auto small = scale(e9, GenMatrix::identity(g, 3));
  CHECK(entrywise_negligible(small, c).negligible);
  const auto e3 = pow_int(GenScalar::eps_net(g), 3);
  const auto big = scale(e3, GenMatrix::identity(g, 3));
  const auto chk = entrywise_negligible(big, c);
  CHECK_FALSE(chk.negligible);
  CHECK(chk.report.slope == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(max_abs_entry(big).sample(0) == Cplx(std::pow(g->eps(0), 3.0), 0));
}

TEST_CASE("shape mismatches are structural errors") {
  auto g = grid();
  const auto a = GenMatrix::identity(g, 2);
  const auto b = GenMatrix::identity(g, 3);
  CHECK_THROWS_AS(a * b, StructuralError);
  CHECK_THROWS_AS(a + b, StructuralError);
  CHECK_THROWS_AS(a * GenVector::unit(g, 3, 0), StructuralError);
  CHECK_THROWS_AS(inner(GenVector::unit(g, 2, 0), GenVector::unit(g, 3, 0)),
                  StructuralError);
  CHECK_THROWS_AS(GenMatrix(2, 2, std::vector<GenScalar>(3, GenScalar::constant(g, 0.0))),
                  StructuralError);
  CHECK_THROWS_AS(det(GenMatrix::zeros(g, 2, 3)), StructuralError);
}

TEST_CASE("inner products conjugate the second argument") {
  auto g = grid();
  const auto i_unit = GenScalar::constant(g, Cplx(0, 1));
  const GenVector v({i_unit});
  CHECK(inner(v, v).sample(0) == Cplx(1, 0));
  CHECK(dot_bilinear(v, v).sample(0) == Cplx(-1, 0));
  CHECK(norm_sq(v).is_real_kind());
  CHECK(norm_sq(v).sample(0) == Cplx(1, 0));
}
