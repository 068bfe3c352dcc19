#pragma once

#include <string>
#include <vector>

#include "gna/errors.hpp"
#include "gna/scalar.hpp"

namespace gna {

enum class Classification {
  negligible,
  strictly_nonzero,
  strictly_positive,
  zero_divisor_like,
  indeterminate,
};

std::string to_string(Classification c);

enum class FitMethod { least_squares_loglog };

// Thresholds for the finite-grid decision procedure.  "For all m" and
// "exists m" over the naturals are replaced by the two configured orders;
// every report echoes them so callers can tighten and re-run.
struct ClassifierConfig {
  int m_neg = 8;              // negligible: |a| <= eps^m_neg on the whole tail
  int m_inv = 8;              // strictly nonzero: |a| > eps^m_inv on the whole tail
  double tail_fraction = 0.5; // certified tail = last ceil(tail_fraction * n) samples
  FitMethod fit_method = FitMethod::least_squares_loglog;

  // Noise absorption.  Residuals of double-precision computations on O(1)
  // data plateau near 1e-16 and can never reach eps^8 at the deep end of the
  // grid (2^-320).  A tail that sits entirely below noise_floor is therefore
  // also accepted as negligible, unless its log-log slope exceeds
  // noise_slope_max: genuinely decaying nets (eps^2, slope 2) escape the
  // branch and keep their nonzero classification, while flat roundoff
  // plateaus (slope ~0) and roundoff on eps-scaled data (slope ~1) are
  // absorbed.  Classification is relative to the grid and these thresholds.
  double noise_floor = 1e-11;
  double noise_slope_max = 1.0;

  void validate() const; // throws ConfigError
};

struct AsymptoticReport {
  Classification classification = Classification::indeterminate;
  int order = 0;        // the order threshold the classification certifies
  double slope = 0.0;   // least-squares fit of log|a| against log eps over the tail
  double residual = 0.0; // rms deviation of that fit (NaN when under 2 points)
  double fitted_log2_c = 0.0; // intercept of the fit, base-2 log
  // Moderateness evidence: every tail sample obeys |a| <= C * eps^-N for the
  // envelope below (N = 0 for non-growing nets).  False only for nets with
  // non-finite samples.
  bool moderate = false;
  int envelope_order = 0;        // N
  double envelope_log2_c = 0.0;  // log2 C, tight over the tail
  double tail_fraction_used = 0.0;
  std::size_t tail_start = 0; // first certified sample index
  // config echo (verdict evidence)
  int m_neg = 0;
  int m_inv = 0;
  double noise_floor = 0.0;
};

AsymptoticReport classify(const GenScalar& a, const ClassifierConfig& cfg);

// Invertibility acceptance: strictly_positive refines strictly_nonzero.
bool is_strictly_nonzero(const AsymptoticReport& r);
bool is_negligible(const AsymptoticReport& r);

class NonInvertibleError : public PreconditionError {
public:
  NonInvertibleError(std::string message, AsymptoticReport report)
      : PreconditionError(std::move(message)), report(std::move(report)) {}
  AsymptoticReport report;
};

// Pointwise reciprocal of a strictly nonzero scalar.  Exact-zero samples
// (possible only outside the certified tail) map to 0: a representative
// choice that never changes the class of the result.
GenScalar invert(const GenScalar& a, const ClassifierConfig& cfg);

// a / b with the divisor required strictly nonzero.
GenScalar div(const GenScalar& a, const GenScalar& b, const ClassifierConfig& cfg);

// Given a, b with a*b negligible, constructs a mask S with a*e_S and
// b*e_{S^c} both negligible.  The mask choice (index in S iff |a_k| <= |b_k|)
// is a heuristic; the postcondition is always re-checked and failure raises
// PostconditionError.
Idempotent zero_divisor_split(const GenScalar& a, const GenScalar& b,
                              const ClassifierConfig& cfg);

// Sum of values_i * e_{S_i} over a partition of the grid.
GenScalar interleave(const std::vector<GenScalar>& values,
                     const std::vector<Idempotent>& partition);

} // namespace gna
