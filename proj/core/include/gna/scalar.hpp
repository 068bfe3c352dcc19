#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "gna/grid.hpp"

namespace gna {

enum class ScalarKind { real, complex };

using Cplx = std::complex<double>;

// A generalized scalar: one net representative sampled on a grid.  All ring
// operations act sample-for-sample, so every classical identity that holds
// per sample holds exactly here.  Values of real kind keep imaginary parts
// exactly zero.
class GenScalar {
public:
  GenScalar() = default;

  static GenScalar constant(GridPtr grid, double value);
  static GenScalar constant(GridPtr grid, Cplx value);
  // The net eps itself: sample i carries grid.eps(i).
  static GenScalar eps_net(GridPtr grid);
  static GenScalar from_samples(GridPtr grid, std::vector<Cplx> samples, ScalarKind kind);
  static GenScalar from_real_samples(GridPtr grid, std::vector<double> samples);

  const GridPtr& grid() const { return grid_; }
  ScalarKind kind() const { return kind_; }
  std::size_t size() const { return samples_.size(); }
  Cplx sample(std::size_t i) const { return samples_[i]; }
  double real_sample(std::size_t i) const { return samples_[i].real(); }
  const std::vector<Cplx>& samples() const { return samples_; }
  bool is_real_kind() const { return kind_ == ScalarKind::real; }

  GenScalar as_complex() const; // same samples, complex kind

  // Exact sample-for-sample equality (representative equality, not class
  // equality; class equality is "difference classified negligible").
  friend bool operator==(const GenScalar& a, const GenScalar& b);

private:
  GridPtr grid_;
  std::vector<Cplx> samples_;
  ScalarKind kind_ = ScalarKind::real;
};

// Characteristic function of an index set S, as a 0/1 net.
class Idempotent {
public:
  Idempotent(GridPtr grid, std::vector<std::uint8_t> mask);

  static Idempotent full(GridPtr grid);
  static Idempotent empty(GridPtr grid);
  // Validates the scalar has exactly 0/1 real samples.
  static Idempotent from_scalar(const GenScalar& s);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return mask_.size(); }
  bool bit(std::size_t i) const { return mask_[i] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  Idempotent complement() const;
  GenScalar to_scalar() const;

private:
  GridPtr grid_;
  std::vector<std::uint8_t> mask_;
};

GenScalar add(const GenScalar& a, const GenScalar& b);
GenScalar sub(const GenScalar& a, const GenScalar& b);
GenScalar mul(const GenScalar& a, const GenScalar& b);
GenScalar neg(const GenScalar& a);
GenScalar conj(const GenScalar& a);
// |a| per sample; result has real kind.
GenScalar abs(const GenScalar& a);
// Principal square root.  Real kind demands pointwise nonnegativity and
// reports the first offending sample index.
GenScalar sqrt(const GenScalar& a);
// Exponentiation by squaring; negative exponents report exact-zero samples.
GenScalar pow_int(const GenScalar& a, long n);

inline GenScalar operator+(const GenScalar& a, const GenScalar& b) { return add(a, b); }
inline GenScalar operator-(const GenScalar& a, const GenScalar& b) { return sub(a, b); }
inline GenScalar operator*(const GenScalar& a, const GenScalar& b) { return mul(a, b); }
inline GenScalar operator-(const GenScalar& a) { return neg(a); }

GenScalar operator*(double c, const GenScalar& a);
GenScalar operator*(Cplx c, const GenScalar& a);
GenScalar operator+(double c, const GenScalar& a);
GenScalar operator-(double c, const GenScalar& a);

Cplx pow_sample(Cplx base, long n, std::size_t sample_index, ScalarKind kind);

} // namespace gna
