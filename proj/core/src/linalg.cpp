#include "gna/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gna/errors.hpp"

namespace gna {

namespace {

// Complex product spelled out so operands with exact zero imaginary parts
// produce exact zero imaginary parts.
inline Cplx cmul(Cplx x, Cplx y) {
  return Cplx(x.real() * y.real() - x.imag() * y.imag(),
              x.real() * y.imag() + x.imag() * y.real());
}

ScalarKind join(ScalarKind a, ScalarKind b) {
  return (a == ScalarKind::real && b == ScalarKind::real) ? ScalarKind::real
                                                          : ScalarKind::complex;
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw StructuralError(std::string(what) + " must be nonempty");
}

// Per-sample LU with partial pivoting; returns the determinant.  An exactly
// zero pivot column short-circuits to determinant zero.
template <class T>
T lu_det(std::vector<T>& m, std::size_t n) {
  int sign = 1;
  T d = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return T(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      sign = -sign;
    }
    const T p = m[k * n + k];
    d *= p;
    for (std::size_t i = k + 1; i < n; ++i) {
      const T r = m[i * n + k] / p;
      m[i * n + k] = r;
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= r * m[k * n + j];
    }
  }
  return sign < 0 ? -d : d;
}

// LU solve; false when a pivot is exactly zero (caller picks the fallback).
template <class T>
bool lu_solve_one(std::vector<T> m, std::vector<T> rhs, std::size_t n, std::vector<T>& out) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      std::swap(rhs[k], rhs[piv]);
    }
    const T p = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T r = m[i * n + k] / p;
      m[i * n + k] = r;
      rhs[i] -= r * rhs[k];
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= r * m[k * n + j];
    }
  }
  out.assign(n, T(0));
  for (std::size_t k = n; k-- > 0;) {
    T acc = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= m[k * n + j] * out[j];
    out[k] = acc / m[k * n + k];
  }
  return true;
}

} // namespace

GenVector::GenVector(std::vector<GenScalar> entries) : entries_(std::move(entries)) {
  require_nonempty(entries_.size(), "vector");
  for (const GenScalar& e : entries_) require_same_grid(entries_.front().grid(), e.grid());
}

GenVector GenVector::zeros(GridPtr grid, std::size_t n, ScalarKind kind) {
  require_nonempty(n, "vector");
  GenScalar z = kind == ScalarKind::real
                    ? GenScalar::constant(grid, 0.0)
                    : GenScalar::from_samples(grid, std::vector<Cplx>(grid->size()), kind);
  return GenVector(std::vector<GenScalar>(n, z));
}

GenVector GenVector::unit(GridPtr grid, std::size_t n, std::size_t j, ScalarKind kind) {
  GenVector v = zeros(grid, n, kind);
  std::vector<GenScalar> e = v.entries_;
  e[j] = kind == ScalarKind::real
             ? GenScalar::constant(grid, 1.0)
             : GenScalar::from_samples(grid, std::vector<Cplx>(grid->size(), Cplx(1, 0)), kind);
  return GenVector(std::move(e));
}

const GridPtr& GenVector::grid() const { return entries_.front().grid(); }

ScalarKind GenVector::kind() const {
  for (const GenScalar& e : entries_)
    if (!e.is_real_kind()) return ScalarKind::complex;
  return ScalarKind::real;
}

GenMatrix::GenMatrix(std::size_t rows, std::size_t cols, std::vector<GenScalar> row_major)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
  require_nonempty(rows_ * cols_, "matrix");
  if (entries_.size() != rows_ * cols_)
    throw StructuralError("matrix entry count does not match shape");
  for (const GenScalar& e : entries_) require_same_grid(entries_.front().grid(), e.grid());
}

GenMatrix GenMatrix::identity(GridPtr grid, std::size_t n, ScalarKind kind) {
  std::vector<GenScalar> e;
  e.reserve(n * n);
  GenScalar zero = GenVector::zeros(grid, 1, kind)[0];
  GenScalar one = GenVector::unit(grid, 1, 0, kind)[0];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) e.push_back(r == c ? one : zero);
  return GenMatrix(n, n, std::move(e));
}

GenMatrix GenMatrix::zeros(GridPtr grid, std::size_t rows, std::size_t cols, ScalarKind kind) {
  GenScalar zero = GenVector::zeros(grid, 1, kind)[0];
  return GenMatrix(rows, cols, std::vector<GenScalar>(rows * cols, zero));
}

GenMatrix GenMatrix::from_columns(const std::vector<GenVector>& cols) {
  require_nonempty(cols.size(), "column list");
  const std::size_t rows = cols.front().n();
  std::vector<GenScalar> e;
  e.reserve(rows * cols.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (const GenVector& c : cols) {
      if (c.n() != rows) throw StructuralError("column lengths differ");
      e.push_back(c[r]);
    }
  return GenMatrix(rows, cols.size(), std::move(e));
}

GenMatrix GenMatrix::from_rows(const std::vector<GenVector>& rows) {
  require_nonempty(rows.size(), "row list");
  const std::size_t cols = rows.front().n();
  std::vector<GenScalar> e;
  e.reserve(rows.size() * cols);
  for (const GenVector& r : rows) {
    if (r.n() != cols) throw StructuralError("row lengths differ");
    for (std::size_t c = 0; c < cols; ++c) e.push_back(r[c]);
  }
  return GenMatrix(rows.size(), cols, std::move(e));
}

const GridPtr& GenMatrix::grid() const { return entries_.front().grid(); }

ScalarKind GenMatrix::kind() const {
  for (const GenScalar& e : entries_)
    if (!e.is_real_kind()) return ScalarKind::complex;
  return ScalarKind::real;
}

GenVector GenMatrix::col(std::size_t c) const {
  std::vector<GenScalar> e;
  e.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) e.push_back(at(r, c));
  return GenVector(std::move(e));
}

GenVector GenMatrix::row(std::size_t r) const {
  std::vector<GenScalar> e;
  e.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) e.push_back(at(r, c));
  return GenVector(std::move(e));
}

GenVector add(const GenVector& a, const GenVector& b) {
  if (a.n() != b.n()) throw StructuralError("vector lengths differ");
  std::vector<GenScalar> e;
  e.reserve(a.n());
  for (std::size_t j = 0; j < a.n(); ++j) e.push_back(add(a[j], b[j]));
  return GenVector(std::move(e));
}

GenVector sub(const GenVector& a, const GenVector& b) {
  if (a.n() != b.n()) throw StructuralError("vector lengths differ");
  std::vector<GenScalar> e;
  e.reserve(a.n());
  for (std::size_t j = 0; j < a.n(); ++j) e.push_back(sub(a[j], b[j]));
  return GenVector(std::move(e));
}

GenVector scale(const GenScalar& c, const GenVector& v) {
  std::vector<GenScalar> e;
  e.reserve(v.n());
  for (std::size_t j = 0; j < v.n(); ++j) e.push_back(mul(c, v[j]));
  return GenVector(std::move(e));
}

GenVector neg(const GenVector& v) {
  std::vector<GenScalar> e;
  e.reserve(v.n());
  for (std::size_t j = 0; j < v.n(); ++j) e.push_back(neg(v[j]));
  return GenVector(std::move(e));
}

GenVector conj(const GenVector& v) {
  std::vector<GenScalar> e;
  e.reserve(v.n());
  for (std::size_t j = 0; j < v.n(); ++j) e.push_back(conj(v[j]));
  return GenVector(std::move(e));
}

GenMatrix add(const GenMatrix& a, const GenMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw StructuralError("matrix shapes differ");
  std::vector<GenScalar> e;
  e.reserve(a.rows() * a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) e.push_back(add(a.at(r, c), b.at(r, c)));
  return GenMatrix(a.rows(), a.cols(), std::move(e));
}

GenMatrix sub(const GenMatrix& a, const GenMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw StructuralError("matrix shapes differ");
  std::vector<GenScalar> e;
  e.reserve(a.rows() * a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) e.push_back(sub(a.at(r, c), b.at(r, c)));
  return GenMatrix(a.rows(), a.cols(), std::move(e));
}

GenMatrix scale(const GenScalar& c, const GenMatrix& m) {
  std::vector<GenScalar> e;
  e.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t j = 0; j < m.cols(); ++j) e.push_back(mul(c, m.at(r, j)));
  return GenMatrix(m.rows(), m.cols(), std::move(e));
}

GenMatrix matmul(const GenMatrix& a, const GenMatrix& b) {
  if (a.cols() != b.rows()) throw StructuralError("matmul shape mismatch");
  require_same_grid(a.grid(), b.grid());
  const std::size_t ns = a.grid()->size();
  const ScalarKind kind = join(a.kind(), b.kind());
  std::vector<GenScalar> out;
  out.reserve(a.rows() * b.cols());
  std::vector<Cplx> acc(ns);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      std::fill(acc.begin(), acc.end(), Cplx(0, 0));
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const GenScalar& x = a.at(r, k);
        const GenScalar& y = b.at(k, c);
        for (std::size_t i = 0; i < ns; ++i) acc[i] += cmul(x.sample(i), y.sample(i));
      }
      out.push_back(GenScalar::from_samples(a.grid(), acc, kind));
    }
  return GenMatrix(a.rows(), b.cols(), std::move(out));
}

GenVector matvec(const GenMatrix& a, const GenVector& v) {
  if (a.cols() != v.n()) throw StructuralError("matvec shape mismatch");
  require_same_grid(a.grid(), v.grid());
  const std::size_t ns = a.grid()->size();
  const ScalarKind kind = join(a.kind(), v.kind());
  std::vector<GenScalar> out;
  out.reserve(a.rows());
  std::vector<Cplx> acc(ns);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), Cplx(0, 0));
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const GenScalar& x = a.at(r, k);
      const GenScalar& y = v[k];
      for (std::size_t i = 0; i < ns; ++i) acc[i] += cmul(x.sample(i), y.sample(i));
    }
    out.push_back(GenScalar::from_samples(a.grid(), acc, kind));
  }
  return GenVector(std::move(out));
}

GenMatrix transpose(const GenMatrix& a) {
  std::vector<GenScalar> e;
  e.reserve(a.rows() * a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) e.push_back(a.at(r, c));
  return GenMatrix(a.cols(), a.rows(), std::move(e));
}

GenMatrix conj_transpose(const GenMatrix& a) {
  std::vector<GenScalar> e;
  e.reserve(a.rows() * a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) e.push_back(conj(a.at(r, c)));
  return GenMatrix(a.cols(), a.rows(), std::move(e));
}

Eigen::MatrixXcd sample_complex(const GenMatrix& a, std::size_t i) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a.at(r, c).sample(i);
  return m;
}

Eigen::MatrixXd sample_real(const GenMatrix& a, std::size_t i) {
  if (a.kind() != ScalarKind::real)
    throw StructuralError("real sample extraction from a complex matrix");
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a.at(r, c).real_sample(i);
  return m;
}

Eigen::VectorXcd sample_complex(const GenVector& v, std::size_t i) {
  Eigen::VectorXcd x(v.n());
  for (std::size_t j = 0; j < v.n(); ++j) x(j) = v[j].sample(i);
  return x;
}

GenMatrix matrix_from_samples(GridPtr grid, const std::vector<Eigen::MatrixXcd>& per_sample,
                              ScalarKind kind) {
  if (per_sample.size() != grid->size())
    throw StructuralError("per-sample matrix count does not match grid");
  const std::size_t rows = per_sample.front().rows();
  const std::size_t cols = per_sample.front().cols();
  std::vector<GenScalar> e;
  e.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<Cplx> s(grid->size());
      for (std::size_t i = 0; i < grid->size(); ++i) s[i] = per_sample[i](r, c);
      e.push_back(GenScalar::from_samples(grid, std::move(s), kind));
    }
  return GenMatrix(rows, cols, std::move(e));
}

GenVector vector_from_samples(GridPtr grid, const std::vector<Eigen::VectorXcd>& per_sample,
                              ScalarKind kind) {
  if (per_sample.size() != grid->size())
    throw StructuralError("per-sample vector count does not match grid");
  const std::size_t n = per_sample.front().size();
  std::vector<GenScalar> e;
  e.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Cplx> s(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) s[i] = per_sample[i](j);
    e.push_back(GenScalar::from_samples(grid, std::move(s), kind));
  }
  return GenVector(std::move(e));
}

GenScalar max_abs_entry(const GenMatrix& a) {
  const std::size_t ns = a.grid()->size();
  std::vector<double> m(ns, 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (std::size_t i = 0; i < ns; ++i)
        m[i] = std::max(m[i], std::abs(a.at(r, c).sample(i)));
  return GenScalar::from_real_samples(a.grid(), std::move(m));
}

GenScalar max_abs_entry(const GenVector& v) {
  const std::size_t ns = v.grid()->size();
  std::vector<double> m(ns, 0.0);
  for (std::size_t j = 0; j < v.n(); ++j)
    for (std::size_t i = 0; i < ns; ++i) m[i] = std::max(m[i], std::abs(v[j].sample(i)));
  return GenScalar::from_real_samples(v.grid(), std::move(m));
}

NegligibilityCheck entrywise_negligible(const GenMatrix& a, const ClassifierConfig& cfg) {
  AsymptoticReport r = classify(max_abs_entry(a), cfg);
  return {is_negligible(r), r};
}

NegligibilityCheck entrywise_negligible(const GenVector& v, const ClassifierConfig& cfg) {
  AsymptoticReport r = classify(max_abs_entry(v), cfg);
  return {is_negligible(r), r};
}

GenScalar det(const GenMatrix& a) {
  if (a.rows() != a.cols()) throw StructuralError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  const std::size_t ns = a.grid()->size();
  std::vector<Cplx> out(ns);
  if (a.kind() == ScalarKind::real) {
    std::vector<double> buf(n * n);
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) buf[r * n + c] = a.at(r, c).real_sample(i);
      out[i] = Cplx(lu_det(buf, n), 0.0);
    }
    return GenScalar::from_samples(a.grid(), std::move(out), ScalarKind::real);
  }
  std::vector<Cplx> buf(n * n);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) buf[r * n + c] = a.at(r, c).sample(i);
    out[i] = lu_det(buf, n);
  }
  return GenScalar::from_samples(a.grid(), std::move(out), ScalarKind::complex);
}

InvertibilityResult is_invertible(const GenMatrix& a, const ClassifierConfig& cfg) {
  AsymptoticReport r = classify(det(a), cfg);
  return {is_strictly_nonzero(r), r};
}

GenVector solve(const GenMatrix& a, const GenVector& b, const ClassifierConfig& cfg) {
  if (a.rows() != a.cols()) throw StructuralError("solve requires a square matrix");
  if (a.rows() != b.n()) throw StructuralError("solve shape mismatch");
  require_same_grid(a.grid(), b.grid());
  const InvertibilityResult inv = is_invertible(a, cfg);
  if (!inv.invertible)
    throw NonInvertibleError("matrix is not invertible: determinant is " +
                                 to_string(inv.det_report.classification),
                             inv.det_report);

  const std::size_t n = a.rows();
  const std::size_t ns = a.grid()->size();
  const ScalarKind kind = join(a.kind(), b.kind());
  std::vector<std::vector<Cplx>> sol(n, std::vector<Cplx>(ns));
  if (kind == ScalarKind::real) {
    std::vector<double> buf(n * n), rhs(n), x;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t r = 0; r < n; ++r) {
        rhs[r] = b[r].real_sample(i);
        for (std::size_t c = 0; c < n; ++c) buf[r * n + c] = a.at(r, c).real_sample(i);
      }
      if (!lu_solve_one(buf, rhs, n, x)) x.assign(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) sol[r][i] = Cplx(x[r], 0.0);
    }
  } else {
    std::vector<Cplx> buf(n * n), rhs(n), x;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t r = 0; r < n; ++r) {
        rhs[r] = b[r].sample(i);
        for (std::size_t c = 0; c < n; ++c) buf[r * n + c] = a.at(r, c).sample(i);
      }
      if (!lu_solve_one(buf, rhs, n, x)) x.assign(n, Cplx(0, 0));
      for (std::size_t r = 0; r < n; ++r) sol[r][i] = x[r];
    }
  }
  std::vector<GenScalar> entries;
  entries.reserve(n);
  for (std::size_t r = 0; r < n; ++r)
    entries.push_back(GenScalar::from_samples(a.grid(), std::move(sol[r]), kind));
  GenVector x(std::move(entries));

  const NegligibilityCheck res = entrywise_negligible(sub(matvec(a, x), b), cfg);
  if (!res.negligible)
    throw PostconditionError("solve residual classified " +
                             to_string(res.report.classification));
  return x;
}

GenScalar inner(const GenVector& v, const GenVector& w) {
  if (v.n() != w.n()) throw StructuralError("inner product length mismatch");
  require_same_grid(v.grid(), w.grid());
  const std::size_t ns = v.grid()->size();
  std::vector<Cplx> acc(ns, Cplx(0, 0));
  for (std::size_t j = 0; j < v.n(); ++j)
    for (std::size_t i = 0; i < ns; ++i)
      acc[i] += cmul(v[j].sample(i), std::conj(w[j].sample(i)));
  return GenScalar::from_samples(v.grid(), std::move(acc),
                                 join(v.kind(), w.kind()));
}

GenScalar dot_bilinear(const GenVector& v, const GenVector& w) {
  if (v.n() != w.n()) throw StructuralError("bilinear pairing length mismatch");
  require_same_grid(v.grid(), w.grid());
  const std::size_t ns = v.grid()->size();
  std::vector<Cplx> acc(ns, Cplx(0, 0));
  for (std::size_t j = 0; j < v.n(); ++j)
    for (std::size_t i = 0; i < ns; ++i)
      acc[i] += cmul(v[j].sample(i), w[j].sample(i));
  return GenScalar::from_samples(v.grid(), std::move(acc),
                                 join(v.kind(), w.kind()));
}

GenScalar norm_sq(const GenVector& v) {
  const std::size_t ns = v.grid()->size();
  std::vector<double> acc(ns, 0.0);
  for (std::size_t j = 0; j < v.n(); ++j)
    for (std::size_t i = 0; i < ns; ++i) {
      const Cplx s = v[j].sample(i);
      acc[i] += s.real() * s.real() + s.imag() * s.imag();
    }
  return GenScalar::from_real_samples(v.grid(), std::move(acc));
}

AsymptoticReport free_report(const GenVector& v, const ClassifierConfig& cfg) {
  return classify(norm_sq(v), cfg);
}

bool is_free(const GenVector& v, const ClassifierConfig& cfg) {
  return free_report(v, cfg).classification == Classification::strictly_positive;
}

GenMatrix gram_matrix(const std::vector<GenVector>& vs) {
  require_nonempty(vs.size(), "vector set");
  std::vector<GenScalar> e;
  e.reserve(vs.size() * vs.size());
  for (const GenVector& a : vs)
    for (const GenVector& b : vs) e.push_back(inner(a, b));
  return GenMatrix(vs.size(), vs.size(), std::move(e));
}

bool is_free_set(const std::vector<GenVector>& vs, const ClassifierConfig& cfg) {
  if (vs.size() == 1) return is_free(vs.front(), cfg);
  return is_strictly_nonzero(classify(det(gram_matrix(vs)), cfg));
}

namespace {

// Deterministic choice within the per-sample orthogonal complement: the
// least-singular right-null direction, phase-fixed so the largest-magnitude
// component is real positive.
template <class Mat, class Vec>
Vec null_direction(const Mat& stacked) {
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  Vec w = svd.matrixV().col(stacked.cols() - 1);
  Eigen::Index best = 0;
  double mag = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double m = std::abs(w(j));
    if (m > mag) {
      mag = m;
      best = j;
    }
  }
  if (mag > 0.0) {
    const auto pivot = w(best);
    w = w * (std::abs(pivot) / pivot) / w.norm();
  }
  return w;
}

} // namespace

std::vector<GenVector> extend_to_basis(const std::vector<GenVector>& vs,
                                       const ClassifierConfig& cfg) {
  require_nonempty(vs.size(), "vector set");
  const std::size_t n = vs.front().n();
  if (vs.size() > n) throw PreconditionError("more vectors than the ambient rank");
  if (!is_free_set(vs, cfg))
    throw PreconditionError("input set is not free (Gram determinant not strictly nonzero)");

  const GridPtr grid = vs.front().grid();
  const std::size_t ns = grid->size();
  bool real = true;
  for (const GenVector& v : vs) real &= v.kind() == ScalarKind::real;

  std::vector<GenVector> out = vs;
  for (std::size_t cur = vs.size(); cur < n; ++cur) {
    std::vector<Eigen::VectorXcd> samples(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      if (real) {
        Eigen::MatrixXd m(cur, n);
        for (std::size_t r = 0; r < cur; ++r)
          for (std::size_t c = 0; c < n; ++c) m(r, c) = out[r][c].real_sample(i);
        samples[i] = null_direction<Eigen::MatrixXd, Eigen::VectorXd>(m).cast<Cplx>();
      } else {
        Eigen::MatrixXcd m(cur, n);
        for (std::size_t r = 0; r < cur; ++r)
          for (std::size_t c = 0; c < n; ++c) m(r, c) = std::conj(out[r][c].sample(i));
        samples[i] = null_direction<Eigen::MatrixXcd, Eigen::VectorXcd>(m);
      }
    }
    out.push_back(vector_from_samples(grid, samples,
                                      real ? ScalarKind::real : ScalarKind::complex));
  }

  const InvertibilityResult inv = is_invertible(GenMatrix::from_columns(out), cfg);
  if (!inv.invertible)
    throw PostconditionError("extended set is not a basis: determinant is " +
                             to_string(inv.det_report.classification));
  return out;
}

MembershipCheck in_span(const std::vector<GenVector>& gens, const GenVector& w,
                        const ClassifierConfig& cfg) {
  GridPtr grid = w.grid();
  for (const GenVector& g : gens) {
    require_same_grid(grid, g.grid());
    if (g.n() != w.n()) throw StructuralError("in_span: vector length mismatch");
  }
  const std::size_t ns = grid->size();
  const std::size_t dim = w.n();
  const std::size_t k = gens.size();
  std::vector<double> res(ns, 0.0);
  for (std::size_t i = 0; i < ns; ++i) {
    Eigen::VectorXcd ws = sample_complex(w, i);
    Eigen::VectorXcd r;
    if (k == 0) {
      r = ws;
    } else {
      Eigen::MatrixXcd m(dim, k);
      for (std::size_t j = 0; j < k; ++j) m.col(j) = sample_complex(gens[j], i);
      Eigen::VectorXcd x = m.colPivHouseholderQr().solve(ws);
      r = m * x - ws;
    }
    res[i] = r.cwiseAbs().maxCoeff();
  }
  AsymptoticReport rep =
      classify(GenScalar::from_real_samples(grid, std::move(res)), cfg);
  return MembershipCheck{rep.classification == Classification::negligible, rep};
}

GenVector kernel_free_vector(const GenMatrix& b, const ClassifierConfig& cfg) {
  if (b.rows() != b.cols()) throw StructuralError("kernel vector of a non-square matrix");
  const AsymptoticReport det_rep = classify(det(b), cfg);
  if (!is_negligible(det_rep))
    throw PreconditionError("kernel_free_vector requires a negligible determinant, got " +
                            to_string(det_rep.classification));

  const GridPtr grid = b.grid();
  const std::size_t ns = grid->size();
  std::vector<Eigen::VectorXcd> samples(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sample_complex(b, i));
    if (es.info() != Eigen::Success)
      throw PostconditionError("per-sample eigensolver failed");
    Eigen::Index best = 0;
    double mag = std::abs(es.eigenvalues()(0));
    for (Eigen::Index j = 1; j < es.eigenvalues().size(); ++j) {
      const double m = std::abs(es.eigenvalues()(j));
      if (m < mag) {
        mag = m;
        best = j;
      }
    }
    Eigen::VectorXcd v = es.eigenvectors().col(best);
    Eigen::Index pividx = 0;
    double pivmag = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j)
      if (std::abs(v(j)) > pivmag) {
        pivmag = std::abs(v(j));
        pividx = j;
      }
    if (pivmag > 0.0) v = v * (std::abs(v(pividx)) / v(pividx));
    samples[i] = v / v.norm();
  }
  GenVector v = vector_from_samples(grid, samples, ScalarKind::complex);

  const NegligibilityCheck unit =
      entrywise_negligible(GenVector({sub(norm_sq(v), GenScalar::constant(grid, 1.0))}), cfg);
  const NegligibilityCheck resid = entrywise_negligible(matvec(b, v), cfg);
  if (!unit.negligible || !resid.negligible)
    throw PostconditionError("kernel vector failed its postcondition: |v|-1 is " +
                             to_string(unit.report.classification) + ", Bv is " +
                             to_string(resid.report.classification));
  return v;
}

GenVector realify_kernel_vector(const GenVector& z, const GenMatrix& a,
                                const ClassifierConfig& cfg) {
  if (a.kind() != ScalarKind::real)
    throw PreconditionError("realify requires a real matrix");
  if (a.cols() != z.n()) throw StructuralError("realify shape mismatch");
  const GridPtr grid = z.grid();
  const NegligibilityCheck ker = entrywise_negligible(matvec(a, z), cfg);
  if (!ker.negligible)
    throw PreconditionError("realify requires A z negligible, got " +
                            to_string(ker.report.classification));
  const AsymptoticReport unit = classify(sub(norm_sq(z), GenScalar::constant(grid, 1.0)), cfg);
  if (!is_negligible(unit))
    throw PreconditionError("realify requires a unit vector, |z|^2 - 1 is " +
                            to_string(unit.classification));

  const std::size_t ns = grid->size();
  const std::size_t n = z.n();
  // Per sample: v = x when ||x||^2 > 1/4, else v = y (then ||y||^2 >= 3/4).
  std::vector<std::vector<double>> vals(n, std::vector<double>(ns));
  for (std::size_t i = 0; i < ns; ++i) {
    double xsq = 0.0;
    for (std::size_t j = 0; j < n; ++j) xsq += z[j].sample(i).real() * z[j].sample(i).real();
    const bool use_x = xsq > 0.25;
    for (std::size_t j = 0; j < n; ++j)
      vals[j][i] = use_x ? z[j].sample(i).real() : z[j].sample(i).imag();
  }
  std::vector<GenScalar> entries;
  entries.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    entries.push_back(GenScalar::from_real_samples(grid, std::move(vals[j])));
  GenVector v(std::move(entries));

  const NegligibilityCheck resid = entrywise_negligible(matvec(a, v), cfg);
  if (!resid.negligible || !is_free(v, cfg))
    throw PostconditionError("realified vector failed its postcondition");
  const GenScalar nsq = norm_sq(v);
  const std::size_t tail_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cfg.tail_fraction * ns)));
  for (std::size_t i = ns - std::min(tail_len, ns); i < ns; ++i)
    if (nsq.real_sample(i) < 0.25 - 1e-9)
      throw PostconditionError("realified vector norm fell below 1/4 on the tail");
  return v;
}

} // namespace gna
