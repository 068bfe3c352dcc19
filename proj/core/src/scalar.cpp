#include "gna/scalar.hpp"

#include <cmath>
#include <sstream>

#include "gna/errors.hpp"

namespace gna {

namespace {

void require_real_invariant(const std::vector<Cplx>& samples) {
  for (const Cplx& s : samples)
    if (s.imag() != 0.0)
      throw StructuralError("real-kind scalar has a nonzero imaginary sample");
}

ScalarKind join(ScalarKind a, ScalarKind b) {
  return (a == ScalarKind::real && b == ScalarKind::real) ? ScalarKind::real
                                                          : ScalarKind::complex;
}

template <class F>
GenScalar zip(const GenScalar& a, const GenScalar& b, F f) {
  require_same_grid(a.grid(), b.grid());
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a.sample(i), b.sample(i));
  return GenScalar::from_samples(a.grid(), std::move(out), join(a.kind(), b.kind()));
}

} // namespace

GenScalar GenScalar::constant(GridPtr grid, double value) {
  return from_samples(grid, std::vector<Cplx>(grid->size(), Cplx(value, 0.0)),
                      ScalarKind::real);
}

GenScalar GenScalar::constant(GridPtr grid, Cplx value) {
  ScalarKind kind = value.imag() == 0.0 ? ScalarKind::real : ScalarKind::complex;
  return from_samples(grid, std::vector<Cplx>(grid->size(), value), kind);
}

GenScalar GenScalar::eps_net(GridPtr grid) {
  std::vector<Cplx> s(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) s[i] = Cplx(grid->eps(i), 0.0);
  return from_samples(grid, std::move(s), ScalarKind::real);
}

GenScalar GenScalar::from_samples(GridPtr grid, std::vector<Cplx> samples, ScalarKind kind) {
  if (!grid) throw StructuralError("scalar requires a grid");
  if (samples.size() != grid->size())
    throw StructuralError("sample count does not match grid length");
  if (kind == ScalarKind::real) require_real_invariant(samples);
  GenScalar s;
  s.grid_ = std::move(grid);
  s.samples_ = std::move(samples);
  s.kind_ = kind;
  return s;
}

GenScalar GenScalar::from_real_samples(GridPtr grid, std::vector<double> samples) {
  std::vector<Cplx> c(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) c[i] = Cplx(samples[i], 0.0);
  return from_samples(std::move(grid), std::move(c), ScalarKind::real);
}

GenScalar GenScalar::as_complex() const {
  return from_samples(grid_, samples_, ScalarKind::complex);
}

bool operator==(const GenScalar& a, const GenScalar& b) {
  return a.grid_ && b.grid_ && a.grid_->same_as(*b.grid_) && a.samples_ == b.samples_;
}

Idempotent::Idempotent(GridPtr grid, std::vector<std::uint8_t> mask)
    : grid_(std::move(grid)), mask_(std::move(mask)) {
  if (!grid_) throw StructuralError("idempotent requires a grid");
  if (mask_.size() != grid_->size())
    throw StructuralError("mask length does not match grid length");
  for (std::uint8_t m : mask_)
    if (m > 1) throw StructuralError("mask entries must be 0 or 1");
}

Idempotent Idempotent::full(GridPtr grid) {
  std::vector<std::uint8_t> m(grid->size(), 1);
  return Idempotent(std::move(grid), std::move(m));
}

Idempotent Idempotent::empty(GridPtr grid) {
  std::vector<std::uint8_t> m(grid->size(), 0);
  return Idempotent(std::move(grid), std::move(m));
}

Idempotent Idempotent::from_scalar(const GenScalar& s) {
  std::vector<std::uint8_t> m(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Cplx v = s.sample(i);
    if (v.imag() != 0.0 || (v.real() != 0.0 && v.real() != 1.0)) {
      std::ostringstream os;
      os << "sample " << i << " is not exactly 0 or 1";
      throw StructuralError(os.str());
    }
    m[i] = v.real() == 1.0 ? 1 : 0;
  }
  return Idempotent(s.grid(), std::move(m));
}

Idempotent Idempotent::complement() const {
  std::vector<std::uint8_t> m(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) m[i] = mask_[i] ? 0 : 1;
  return Idempotent(grid_, std::move(m));
}

GenScalar Idempotent::to_scalar() const {
  std::vector<double> s(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) s[i] = mask_[i] ? 1.0 : 0.0;
  return GenScalar::from_real_samples(grid_, std::move(s));
}

GenScalar add(const GenScalar& a, const GenScalar& b) {
  return zip(a, b, [](Cplx x, Cplx y) { return x + y; });
}

GenScalar sub(const GenScalar& a, const GenScalar& b) {
  return zip(a, b, [](Cplx x, Cplx y) { return x - y; });
}

GenScalar mul(const GenScalar& a, const GenScalar& b) {
  // complex*complex in terms of the four real products so that real-kind
  // operands with exact zero imaginary parts stay exactly real
  return zip(a, b, [](Cplx x, Cplx y) {
    return Cplx(x.real() * y.real() - x.imag() * y.imag(),
                x.real() * y.imag() + x.imag() * y.real());
  });
}

GenScalar neg(const GenScalar& a) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a.sample(i);
  return GenScalar::from_samples(a.grid(), std::move(out), a.kind());
}

GenScalar conj(const GenScalar& a) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a.sample(i));
  return GenScalar::from_samples(a.grid(), std::move(out), a.kind());
}

GenScalar abs(const GenScalar& a) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Cplx(a.is_real_kind() ? std::fabs(a.real_sample(i)) : std::abs(a.sample(i)), 0.0);
  return GenScalar::from_samples(a.grid(), std::move(out), ScalarKind::real);
}

GenScalar sqrt(const GenScalar& a) {
  std::vector<Cplx> out(a.size());
  if (a.is_real_kind()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      double v = a.real_sample(i);
      if (v < 0.0)
        throw EvalError("sqrt of a negative real sample", static_cast<std::ptrdiff_t>(i));
      out[i] = Cplx(std::sqrt(v), 0.0);
    }
    return GenScalar::from_samples(a.grid(), std::move(out), ScalarKind::real);
  }
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::sqrt(a.sample(i));
  return GenScalar::from_samples(a.grid(), std::move(out), ScalarKind::complex);
}

Cplx pow_sample(Cplx base, long n, std::size_t sample_index, ScalarKind kind) {
  if (n < 0) {
    if (base == Cplx(0.0, 0.0))
      throw EvalError("negative power of an exact zero sample",
                      static_cast<std::ptrdiff_t>(sample_index));
    base = Cplx(1.0, 0.0) / base;
    n = -n;
  }
  Cplx acc(1.0, 0.0);
  while (n > 0) {
    if (n & 1) {
      acc = kind == ScalarKind::real
                ? Cplx(acc.real() * base.real(), 0.0)
                : acc * base;
    }
    base = kind == ScalarKind::real ? Cplx(base.real() * base.real(), 0.0) : base * base;
    n >>= 1;
  }
  return acc;
}

GenScalar pow_int(const GenScalar& a, long n) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = pow_sample(a.sample(i), n, i, a.kind());
  return GenScalar::from_samples(a.grid(), std::move(out), a.kind());
}

GenScalar operator*(double c, const GenScalar& a) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Cplx(c * a.sample(i).real(), c * a.sample(i).imag());
  return GenScalar::from_samples(a.grid(), std::move(out), a.kind());
}

GenScalar operator*(Cplx c, const GenScalar& a) { return mul(GenScalar::constant(a.grid(), c), a); }

GenScalar operator+(double c, const GenScalar& a) { return add(GenScalar::constant(a.grid(), c), a); }

GenScalar operator-(double c, const GenScalar& a) { return sub(GenScalar::constant(a.grid(), c), a); }

} // namespace gna
