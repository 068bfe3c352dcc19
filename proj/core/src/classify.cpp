#include "gna/classify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gna {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::negligible: return "negligible";
    case Classification::strictly_nonzero: return "strictly_nonzero";
    case Classification::strictly_positive: return "strictly_positive";
    case Classification::zero_divisor_like: return "zero_divisor_like";
    case Classification::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

void ClassifierConfig::validate() const {
  if (m_neg < 1) throw ConfigError("m_neg must be >= 1");
  if (m_inv < 1) throw ConfigError("m_inv must be >= 1");
  if (!(tail_fraction > 0.0) || !(tail_fraction <= 1.0))
    throw ConfigError("tail_fraction must lie in (0, 1]");
  if (!(noise_floor >= 0.0)) throw ConfigError("noise_floor must be >= 0");
}

bool is_strictly_nonzero(const AsymptoticReport& r) {
  return r.classification == Classification::strictly_nonzero ||
         r.classification == Classification::strictly_positive;
}

bool is_negligible(const AsymptoticReport& r) {
  return r.classification == Classification::negligible;
}

AsymptoticReport classify(const GenScalar& a, const ClassifierConfig& cfg) {
  cfg.validate();
  const std::size_t n = a.size();
  const std::size_t tail_len =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.tail_fraction * n)));
  const std::size_t start = n - std::min(tail_len, n);

  AsymptoticReport rep;
  rep.tail_fraction_used = cfg.tail_fraction;
  rep.tail_start = start;
  rep.m_neg = cfg.m_neg;
  rep.m_inv = cfg.m_inv;
  rep.noise_floor = cfg.noise_floor;
  rep.slope = std::numeric_limits<double>::quiet_NaN();
  rep.residual = std::numeric_limits<double>::quiet_NaN();
  rep.fitted_log2_c = std::numeric_limits<double>::quiet_NaN();

  bool finite = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(a.sample(i).real()) || !std::isfinite(a.sample(i).imag()))
      finite = false;
  rep.moderate = finite;
  if (!finite) {
    rep.classification = Classification::indeterminate;
    return rep;
  }

  // All magnitude comparisons run in log2 space: eps^m underflows double
  // precision long before the thresholds stop being meaningful.
  bool all_below_neg = true, all_above_inv = true, all_positive = a.is_real_kind(),
       all_below_floor = true;
  bool any_below = false, any_above = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t fit_count = 0;
  double env_max = -std::numeric_limits<double>::infinity();
  const double log2_floor = cfg.noise_floor > 0.0
                                ? std::log2(cfg.noise_floor)
                                : -std::numeric_limits<double>::infinity();

  for (std::size_t i = start; i < n; ++i) {
    const double mag = std::abs(a.sample(i));
    const double la = std::log2(mag); // -inf for exact zero
    const double le = std::log2(a.grid()->eps(i));

    const bool below_neg = la <= cfg.m_neg * le;
    const bool below_floor = la <= log2_floor;
    const bool above_inv = la > cfg.m_inv * le;

    all_below_neg &= below_neg;
    all_below_floor &= below_floor;
    all_above_inv &= above_inv;
    all_positive &= (a.sample(i).real() > 0.0) && above_inv;
    any_below |= below_neg || below_floor;
    any_above |= above_inv;

    if (mag > 0.0) {
      sx += le;
      sy += la;
      sxx += le * le;
      sxy += le * la;
      ++fit_count;
      env_max = std::max(env_max, la);
    }
  }

  // Least-squares fit of log|a| = slope * log eps + intercept over the
  // nonzero tail samples.
  if (fit_count >= 2) {
    const double denom = fit_count * sxx - sx * sx;
    if (denom > 0.0) {
      rep.slope = (fit_count * sxy - sx * sy) / denom;
      rep.fitted_log2_c = (sy - rep.slope * sx) / fit_count;
      double ss = 0;
      std::size_t m = 0;
      for (std::size_t i = start; i < n; ++i) {
        const double mag = std::abs(a.sample(i));
        if (mag <= 0.0) continue;
        const double d =
            std::log2(mag) - (rep.slope * std::log2(a.grid()->eps(i)) + rep.fitted_log2_c);
        ss += d * d;
        ++m;
      }
      rep.residual = std::sqrt(ss / m);
    }
  }

  // Moderateness envelope |a| <= C * eps^-N, tight over the nonzero tail.
  if (fit_count > 0) {
    const int env_n = (std::isfinite(rep.slope) && rep.slope < 0.0)
                          ? static_cast<int>(std::ceil(-rep.slope))
                          : 0;
    double c_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < n; ++i) {
      const double mag = std::abs(a.sample(i));
      if (mag <= 0.0) continue;
      c_max = std::max(c_max, std::log2(mag) + env_n * std::log2(a.grid()->eps(i)));
    }
    rep.envelope_order = env_n;
    rep.envelope_log2_c = c_max;
  }

  // The slope bound is inclusive; a hair of least-squares roundoff at the
  // boundary must not flip the verdict.
  const bool noise_like =
      all_below_floor && !(rep.slope > cfg.noise_slope_max + 1e-9);

  if (all_below_neg || noise_like) {
    rep.classification = Classification::negligible;
    rep.order = cfg.m_neg;
  } else if (all_positive) {
    rep.classification = Classification::strictly_positive;
    rep.order = cfg.m_inv;
  } else if (all_above_inv) {
    rep.classification = Classification::strictly_nonzero;
    rep.order = cfg.m_inv;
  } else if (any_below && any_above) {
    rep.classification = Classification::zero_divisor_like;
  } else {
    rep.classification = Classification::indeterminate;
  }
  return rep;
}

GenScalar invert(const GenScalar& a, const ClassifierConfig& cfg) {
  AsymptoticReport rep = classify(a, cfg);
  if (!is_strictly_nonzero(rep))
    throw NonInvertibleError("scalar is not strictly nonzero (" +
                                 to_string(rep.classification) + ")",
                             rep);
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Cplx v = a.sample(i);
    if (v == Cplx(0.0, 0.0)) {
      out[i] = Cplx(0.0, 0.0);
    } else if (a.is_real_kind()) {
      out[i] = Cplx(1.0 / v.real(), 0.0);
    } else {
      out[i] = Cplx(1.0, 0.0) / v;
    }
  }
  return GenScalar::from_samples(a.grid(), std::move(out), a.kind());
}

GenScalar div(const GenScalar& a, const GenScalar& b, const ClassifierConfig& cfg) {
  return mul(a, invert(b, cfg));
}

Idempotent zero_divisor_split(const GenScalar& a, const GenScalar& b,
                              const ClassifierConfig& cfg) {
  require_same_grid(a.grid(), b.grid());
  const AsymptoticReport prod = classify(mul(a, b), cfg);
  if (!is_negligible(prod))
    throw PreconditionError("zero_divisor_split requires a negligible product, got " +
                            to_string(prod.classification));

  std::vector<std::uint8_t> mask(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    mask[i] = std::abs(a.sample(i)) <= std::abs(b.sample(i)) ? 1 : 0;
  Idempotent s(a.grid(), std::move(mask));

  // The mask is a per-index heuristic standing in for a non-constructive
  // existence statement; the result is only returned when it checks out.
  const AsymptoticReport ra = classify(mul(a, s.to_scalar()), cfg);
  const AsymptoticReport rb = classify(mul(b, s.complement().to_scalar()), cfg);
  if (!is_negligible(ra) || !is_negligible(rb)) {
    std::ostringstream os;
    os << "zero divisor split failed its postcondition: a*e_S is " << to_string(ra.classification)
       << ", b*e_Sc is " << to_string(rb.classification);
    throw PostconditionError(os.str());
  }
  return s;
}

GenScalar interleave(const std::vector<GenScalar>& values,
                     const std::vector<Idempotent>& partition) {
  if (values.empty() || values.size() != partition.size())
    throw StructuralError("interleave requires matching nonempty value and mask sequences");
  const GridPtr& grid = values.front().grid();
  for (const GenScalar& v : values) require_same_grid(grid, v.grid());
  for (const Idempotent& m : partition) require_same_grid(grid, m.grid());

  // Partition check: every index covered exactly once, which is equivalent
  // to sum of masks = 1 with pairwise products 0.
  for (std::size_t i = 0; i < grid->size(); ++i) {
    int cover = 0;
    for (const Idempotent& m : partition) cover += m.bit(i) ? 1 : 0;
    if (cover != 1) {
      std::ostringstream os;
      os << "masks do not partition the grid at index " << i << " (covered " << cover
         << " times)";
      throw StructuralError(os.str());
    }
  }

  ScalarKind kind = ScalarKind::real;
  for (const GenScalar& v : values)
    if (!v.is_real_kind()) kind = ScalarKind::complex;

  std::vector<Cplx> out(grid->size(), Cplx(0.0, 0.0));
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (partition[j].bit(i)) out[i] = values[j].sample(i);
  return GenScalar::from_samples(grid, std::move(out), kind);
}

} // namespace gna
