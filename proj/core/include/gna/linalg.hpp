#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gna/classify.hpp"
#include "gna/scalar.hpp"

namespace gna {

class GenVector {
public:
  GenVector() = default;
  explicit GenVector(std::vector<GenScalar> entries);

  static GenVector zeros(GridPtr grid, std::size_t n,
                         ScalarKind kind = ScalarKind::real);
  // Coordinate vector delta_j (0-based j).
  static GenVector unit(GridPtr grid, std::size_t n, std::size_t j,
                        ScalarKind kind = ScalarKind::real);

  std::size_t n() const { return entries_.size(); }
  const GenScalar& operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<GenScalar>& entries() const { return entries_; }
  const GridPtr& grid() const;
  ScalarKind kind() const;

private:
  std::vector<GenScalar> entries_;
};

class GenMatrix {
public:
  GenMatrix() = default;
  GenMatrix(std::size_t rows, std::size_t cols, std::vector<GenScalar> row_major);

  static GenMatrix identity(GridPtr grid, std::size_t n,
                            ScalarKind kind = ScalarKind::real);
  static GenMatrix zeros(GridPtr grid, std::size_t rows, std::size_t cols,
                         ScalarKind kind = ScalarKind::real);
  static GenMatrix from_columns(const std::vector<GenVector>& cols);
  static GenMatrix from_rows(const std::vector<GenVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const GenScalar& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  const GridPtr& grid() const;
  ScalarKind kind() const;

  GenVector col(std::size_t c) const;
  GenVector row(std::size_t r) const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<GenScalar> entries_; // row-major
};

GenVector add(const GenVector& a, const GenVector& b);
GenVector sub(const GenVector& a, const GenVector& b);
GenVector scale(const GenScalar& c, const GenVector& v);
GenVector neg(const GenVector& v);
GenVector conj(const GenVector& v);

GenMatrix add(const GenMatrix& a, const GenMatrix& b);
GenMatrix sub(const GenMatrix& a, const GenMatrix& b);
GenMatrix scale(const GenScalar& c, const GenMatrix& m);
GenMatrix matmul(const GenMatrix& a, const GenMatrix& b);
GenVector matvec(const GenMatrix& a, const GenVector& v);
GenMatrix transpose(const GenMatrix& a);
GenMatrix conj_transpose(const GenMatrix& a);

inline GenMatrix operator*(const GenMatrix& a, const GenMatrix& b) { return matmul(a, b); }
inline GenVector operator*(const GenMatrix& a, const GenVector& v) { return matvec(a, v); }
inline GenMatrix operator+(const GenMatrix& a, const GenMatrix& b) { return add(a, b); }
inline GenMatrix operator-(const GenMatrix& a, const GenMatrix& b) { return sub(a, b); }
inline GenVector operator+(const GenVector& a, const GenVector& b) { return add(a, b); }
inline GenVector operator-(const GenVector& a, const GenVector& b) { return sub(a, b); }

// Per-sample interop with dense numerics.
Eigen::MatrixXcd sample_complex(const GenMatrix& a, std::size_t i);
Eigen::MatrixXd sample_real(const GenMatrix& a, std::size_t i); // real kind only
Eigen::VectorXcd sample_complex(const GenVector& v, std::size_t i);
GenMatrix matrix_from_samples(GridPtr grid, const std::vector<Eigen::MatrixXcd>& per_sample,
                              ScalarKind kind);
GenVector vector_from_samples(GridPtr grid, const std::vector<Eigen::VectorXcd>& per_sample,
                              ScalarKind kind);

// Net of per-sample max absolute entries; the scalar whose classification
// decides entrywise negligibility.
GenScalar max_abs_entry(const GenMatrix& a);
GenScalar max_abs_entry(const GenVector& v);

struct NegligibilityCheck {
  bool negligible;
  AsymptoticReport report; // report on the max-entry net
};
NegligibilityCheck entrywise_negligible(const GenMatrix& a, const ClassifierConfig& cfg);
NegligibilityCheck entrywise_negligible(const GenVector& v, const ClassifierConfig& cfg);

// Determinant via per-sample LU with partial pivoting.  Each grid sample is
// a plain number, so classical elimination per sample is exact to the
// representation.
GenScalar det(const GenMatrix& a);

struct InvertibilityResult {
  bool invertible;
  AsymptoticReport det_report;
};
InvertibilityResult is_invertible(const GenMatrix& a, const ClassifierConfig& cfg);

// Per-sample LU solve of A x = b.  Requires is_invertible; verifies the
// residual A x - b entrywise negligible.  Samples with an exactly singular
// A_eps (possible only off the certified tail) get a zero solution sample.
GenVector solve(const GenMatrix& a, const GenVector& b, const ClassifierConfig& cfg);

// Hermitian inner product sum_j v_j * conj(w_j), per sample.
GenScalar inner(const GenVector& v, const GenVector& w);
GenScalar norm_sq(const GenVector& v); // real kind

// Bilinear pairing sum_j v_j * w_j with no conjugation (used for v^t G w).
GenScalar dot_bilinear(const GenVector& v, const GenVector& w);

// Free vector test: <v,v> strictly positive.
bool is_free(const GenVector& v, const ClassifierConfig& cfg);
AsymptoticReport free_report(const GenVector& v, const ClassifierConfig& cfg);

// Free-set test for several vectors: the Gram matrix of inner products has a
// strictly nonzero determinant.
bool is_free_set(const std::vector<GenVector>& vs, const ClassifierConfig& cfg);
GenMatrix gram_matrix(const std::vector<GenVector>& vs);

// Extends a free set to a basis of the ambient module.  Each appended vector
// is, per grid sample, the least-singular-value right-null direction of the
// stacked conjugated rows of the current set, with the phase fixed so the
// largest-magnitude component is real positive.  Postcondition: the full
// square matrix is invertible.
std::vector<GenVector> extend_to_basis(const std::vector<GenVector>& vs,
                                       const ClassifierConfig& cfg);

// Membership of w in the span of the given vectors, decided per sample by a
// least-squares solve: member iff the residual is entrywise negligible.
struct MembershipCheck {
  bool member;
  AsymptoticReport residual_report;
};
MembershipCheck in_span(const std::vector<GenVector>& gens, const GenVector& w,
                        const ClassifierConfig& cfg);

// For B with negligible determinant: per sample, a unit eigenvector of the
// eigenvalue of smallest modulus (ties broken by solver output order).
// Postconditions: ||v|| = 1 and B v entrywise negligible.
GenVector kernel_free_vector(const GenMatrix& b, const ClassifierConfig& cfg);

// Given real A and a complex unit kernel vector z = x + iy, picks per sample
// v = x when ||x||^2 > 1/4 and v = y otherwise, producing a real free kernel
// vector with ||v||^2 >= 1/4 on the tail.
GenVector realify_kernel_vector(const GenVector& z, const GenMatrix& a,
                                const ClassifierConfig& cfg);

} // namespace gna
