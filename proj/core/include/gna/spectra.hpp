#pragma once

#include <cstdint>
#include <vector>

#include <gna/linalg.hpp>

namespace gna {

enum class EigenTupleKind { hermitian_real, skew_imaginary };

// Distinguished eigenvalue tuple.
//   hermitian_real: real-kind values, non-increasing samplewise.
//   skew_imaginary: purely imaginary values ordered by descending imaginary
//   part, occurring in exact +-i*lambda pairs; odd dimension forces an exact
//   zero in the middle.
struct EigenTuple {
  EigenTupleKind kind;
  std::vector<GenScalar> values;
};

// Eigenvalue criterion: lambda is an eigenvalue iff det(A - lambda I) is
// negligible.  The report carries the determinant classification.
struct EigenvalueCheck {
  bool is_eigenvalue;
  AsymptoticReport det_report;
};
EigenvalueCheck is_eigenvalue(const GenMatrix& a, const GenScalar& lambda,
                              const ClassifierConfig& cfg);

// Unit free eigenvector for a certified eigenvalue: the kernel vector of
// A - lambda I.  ||x|| = 1 and A x - lambda x entrywise negligible.  For real
// A and real lambda the result can be realified afterwards with
// realify_kernel_vector.
GenVector eigenpair_from_root(const GenMatrix& a, const GenScalar& lambda,
                              const ClassifierConfig& cfg);

// Nearest representative in the symmetry class: (A + A*)/2 resp. (A - A^t)/2.
// The input must already be within a negligible perturbation of the class,
// otherwise SymmetryError.
GenMatrix hermitize(const GenMatrix& a, const ClassifierConfig& cfg);
GenMatrix skew_symmetrize(const GenMatrix& a, const ClassifierConfig& cfg);

// Per-sample Hermitian eigendecomposition of the Hermitian representative,
// eigenvalues sorted descending.  U is per-sample unitary with column phases
// fixed (largest-magnitude component real positive); both U* U - I and
// U* A U - diag(values) are certified negligible.
struct HermitianEigen {
  EigenTuple tuple; // hermitian_real
  GenMatrix u;
};
HermitianEigen hermitian_eigentuple(const GenMatrix& a,
                                    const ClassifierConfig& cfg);

// Distinguished tuple of a real skew-symmetric matrix via the Hermitian
// matrix i*A: values theta_k = -i*alpha_k for the ascending spectrum alpha,
// symmetrized so the +-i*lambda pairing is exact.
EigenTuple skew_eigentuple(const GenMatrix& a, const ClassifierConfig& cfg);

// Canonical form of a real skew-symmetric matrix: orthogonal V with
// V^t A V = diag(B_1..B_k, 0..0), B_j = [[0, -lambda_j], [lambda_j, 0]],
// lambda_1 >= ... >= 0 samplewise.  lambdas holds all floor(n/2) values with
// their classifications; values classifying negligible count as zero blocks,
// indeterminate ones keep their block and raise a warning flag.
struct SkewNormalForm {
  GenMatrix v;
  std::vector<GenScalar> lambdas;
  std::vector<AsymptoticReport> lambda_reports;
  std::size_t block_count;      // lambdas not classified negligible
  std::size_t zero_block_count; // n - 2 * block_count
  std::vector<std::uint8_t> indeterminate; // per-lambda warning flags
};
SkewNormalForm skew_normal_form(const GenMatrix& a, const ClassifierConfig& cfg);

// For invertible skew-symmetric A: the basis-column matrix V of the
// symplectic recursion applied to A as a Gramian, so V^t A V - J is
// negligible.  Degenerate A raises NonInvertibleError whose message lists the
// classifications of the distinguished tuple values.
GenMatrix skew_to_standard_j(const GenMatrix& a, const ClassifierConfig& cfg);

// Factorization certificate det(p I - A) = prod_k (p - lambda_k) for the
// normalized characteristic polynomial, verified at the distinguished probe
// values p in {0, 1, -1, 2} (plus +-i for the skew kind).
struct CharPolyProbe {
  Cplx probe;
  AsymptoticReport residual;
};
struct CharPolyResult {
  EigenTuple tuple;
  std::vector<CharPolyProbe> probes;
};
CharPolyResult char_poly_roots_distinguished(const GenMatrix& a,
                                             EigenTupleKind kind,
                                             const ClassifierConfig& cfg);

// Representative independence of the Hermitian tuple: for B within a
// negligible perturbation of A, the per-index differences |lambda_k - beta_k|
// classify negligible, and the Weyl-type bound
//   max_k |lambda_k(eps) - beta_k(eps)| <= ||A_eps - B_eps||_2 + slack
// holds at every sample with a pinned roundoff slack.
struct StabilityReport {
  bool pass;
  AsymptoticReport shift_report; // classify of max_k |lambda_k - beta_k|
  bool weyl_samplewise;
  double worst_margin; // min over samples of rhs + slack - lhs
};
StabilityReport representative_stability_check(const GenMatrix& a,
                                               const GenMatrix& b,
                                               const ClassifierConfig& cfg);

} // namespace gna
