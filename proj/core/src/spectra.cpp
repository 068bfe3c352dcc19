#include "gna/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gna/errors.hpp"
#include "gna/symplectic.hpp"

namespace gna {

namespace {

constexpr double kSnfKernelTol = 1e-13;   // relative to ||A_eps||_F
constexpr double kWeylSlackRel = 1e-12;   // roundoff allowance in the Weyl bound

void require_square(const GenMatrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw StructuralError(std::string(what) + " needs a square matrix");
}

// Column phases fixed so the largest-magnitude component is real positive;
// ties keep the first maximal index.
void fix_phase(Eigen::MatrixXcd& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index piv = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const double m = std::abs(u(r, c));
      if (m > best) { best = m; piv = r; }
    }
    const Cplx p = u(piv, c);
    if (std::abs(p) > 0.0) u.col(c) *= std::abs(p) / p;
  }
}

void fix_sign(Eigen::MatrixXd& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index piv = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const double m = std::abs(u(r, c));
      if (m > best) { best = m; piv = r; }
    }
    if (u(piv, c) < 0.0) u.col(c) = -u.col(c);
  }
}

GenMatrix diag_from_values(const std::vector<GenScalar>& vals, GridPtr grid) {
  const std::size_t n = vals.size();
  std::vector<GenScalar> entries(n * n, GenScalar::constant(grid, 0.0));
  for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = vals[i];
  return GenMatrix(n, n, std::move(entries));
}

} // namespace

EigenvalueCheck is_eigenvalue(const GenMatrix& a, const GenScalar& lambda,
                              const ClassifierConfig& cfg) {
  require_square(a, "is_eigenvalue");
  require_same_grid(a.grid(), lambda.grid());
  GenMatrix b = sub(a, scale(lambda, GenMatrix::identity(a.grid(), a.rows(),
                                                         a.kind())));
  AsymptoticReport rep = classify(det(b), cfg);
  return EigenvalueCheck{rep.classification == Classification::negligible, rep};
}

GenVector eigenpair_from_root(const GenMatrix& a, const GenScalar& lambda,
                              const ClassifierConfig& cfg) {
  EigenvalueCheck chk = is_eigenvalue(a, lambda, cfg);
  if (!chk.is_eigenvalue)
    throw PreconditionError("lambda is not an eigenvalue: det(A - lambda I) "
                            "classifies as " +
                            to_string(chk.det_report.classification));
  GenMatrix b = sub(a, scale(lambda, GenMatrix::identity(a.grid(), a.rows(),
                                                         a.kind())));
  return kernel_free_vector(b, cfg);
}

GenMatrix hermitize(const GenMatrix& a, const ClassifierConfig& cfg) {
  require_square(a, "hermitize");
  NegligibilityCheck nc = entrywise_negligible(sub(a, conj_transpose(a)), cfg);
  if (!nc.negligible)
    throw SymmetryError("matrix is not Hermitian up to negligibility: A - A* "
                        "classifies as " + to_string(nc.report.classification));
  return scale(GenScalar::constant(a.grid(), 0.5), add(a, conj_transpose(a)));
}

GenMatrix skew_symmetrize(const GenMatrix& a, const ClassifierConfig& cfg) {
  require_square(a, "skew_symmetrize");
  if (a.kind() != ScalarKind::real)
    throw PreconditionError("skew_symmetrize needs a real-kind matrix");
  NegligibilityCheck nc = entrywise_negligible(add(a, transpose(a)), cfg);
  if (!nc.negligible)
    throw SymmetryError("matrix is not skew-symmetric up to negligibility: "
                        "A + A^t classifies as " +
                        to_string(nc.report.classification));
  return scale(GenScalar::constant(a.grid(), 0.5), sub(a, transpose(a)));
}

HermitianEigen hermitian_eigentuple(const GenMatrix& a,
                                    const ClassifierConfig& cfg) {
  GenMatrix h = hermitize(a, cfg);
  const std::size_t n = h.rows();
  GridPtr grid = h.grid();
  const std::size_t ns = grid->size();

  std::vector<std::vector<double>> vals(n, std::vector<double>(ns));
  std::vector<Eigen::MatrixXcd> us(ns);
  if (h.kind() == ScalarKind::real) {
    for (std::size_t i = 0; i < ns; ++i) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample_real(h, i));
      Eigen::VectorXd ev = es.eigenvalues(); // ascending
      Eigen::MatrixXd u = es.eigenvectors();
      Eigen::MatrixXd ur(n, n);
      for (std::size_t k = 0; k < n; ++k) {
        vals[k][i] = ev(static_cast<Eigen::Index>(n - 1 - k));
        ur.col(static_cast<Eigen::Index>(k)) =
            u.col(static_cast<Eigen::Index>(n - 1 - k));
      }
      fix_sign(ur);
      us[i] = ur.cast<Cplx>();
    }
  } else {
    for (std::size_t i = 0; i < ns; ++i) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sample_complex(h, i));
      Eigen::VectorXd ev = es.eigenvalues();
      Eigen::MatrixXcd u = es.eigenvectors();
      Eigen::MatrixXcd ur(n, n);
      for (std::size_t k = 0; k < n; ++k) {
        vals[k][i] = ev(static_cast<Eigen::Index>(n - 1 - k));
        ur.col(static_cast<Eigen::Index>(k)) =
            u.col(static_cast<Eigen::Index>(n - 1 - k));
      }
      fix_phase(ur);
      us[i] = std::move(ur);
    }
  }

  HermitianEigen out;
  out.tuple.kind = EigenTupleKind::hermitian_real;
  for (std::size_t k = 0; k < n; ++k)
    out.tuple.values.push_back(
        GenScalar::from_real_samples(grid, std::move(vals[k])));
  out.u = matrix_from_samples(grid, us, h.kind());

  NegligibilityCheck unit = entrywise_negligible(
      sub(matmul(conj_transpose(out.u), out.u),
          GenMatrix::identity(grid, n, h.kind())), cfg);
  if (!unit.negligible)
    throw PostconditionError("eigenvector matrix is not unitary: U*U - I "
                             "classifies as " +
                             to_string(unit.report.classification));
  NegligibilityCheck dres = entrywise_negligible(
      sub(matmul(matmul(conj_transpose(out.u), a), out.u),
          diag_from_values(out.tuple.values, grid)), cfg);
  if (!dres.negligible)
    throw PostconditionError("U*AU - diag classifies as " +
                             to_string(dres.report.classification));
  return out;
}

EigenTuple skew_eigentuple(const GenMatrix& a, const ClassifierConfig& cfg) {
  GenMatrix s = skew_symmetrize(a, cfg);
  const std::size_t n = s.rows();
  GridPtr grid = s.grid();
  const std::size_t ns = grid->size();

  std::vector<std::vector<double>> alpha(n, std::vector<double>(ns));
  for (std::size_t i = 0; i < ns; ++i) {
    Eigen::MatrixXcd tilde =
        Cplx(0.0, 1.0) * sample_real(s, i).cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tilde);
    Eigen::VectorXd ev = es.eigenvalues(); // ascending
    for (std::size_t k = 0; k < n; ++k)
      alpha[k][i] = ev(static_cast<Eigen::Index>(k));
  }

  // theta_k = -i * alpha_k with the spectrum symmetrized pairwise so the
  // +-i*lambda pairing is exact in floating point.
  EigenTuple out;
  out.kind = EigenTupleKind::skew_imaginary;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Cplx> samples(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      const double sym = 0.5 * (alpha[k][i] - alpha[n - 1 - k][i]);
      samples[i] = Cplx(0.0, -sym);
    }
    out.values.push_back(
        GenScalar::from_samples(grid, std::move(samples), ScalarKind::complex));
  }
  return out;
}

namespace {

struct SampleSnf {
  Eigen::MatrixXd v;
  std::vector<double> lambdas; // floor(n/2), descending, zero-padded
};

SampleSnf snf_sample(const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  const double scale = std::max(1.0, s.norm());
  SampleSnf out;
  out.v.resize(n, n);
  out.lambdas.assign(static_cast<std::size_t>(n / 2), 0.0);

  Eigen::MatrixXd m0 = -s * s;
  m0 = 0.5 * (m0 + m0.transpose()); // PSD up to roundoff

  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  Eigen::Index col = 0;
  std::size_t pair = 0;
  while (c.cols() > 0) {
    const Eigen::Index r = c.cols();
    Eigen::MatrixXd mr = c.transpose() * m0 * c;
    mr = 0.5 * (mr + mr.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mr);
    Eigen::VectorXd u = c * es.eigenvectors().col(r - 1);
    u.normalize();
    Eigen::VectorXd z = s * u;
    const double lam = z.norm();
    if (r < 2 || lam <= kSnfKernelTol * scale) {
      // Remaining complement is kernel-like; emit its orthonormal columns.
      Eigen::MatrixXd k = c;
      fix_sign(k);
      out.v.block(0, col, n, r) = k;
      col += r;
      break;
    }
    // Sign convention on u before deriving w keeps the net deterministic.
    {
      Eigen::Index piv = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(u(i)) > best) { best = std::abs(u(i)); piv = i; }
      if (u(piv) < 0.0) { u = -u; z = -z; }
    }
    Eigen::VectorXd w = z / lam;
    out.v.col(col) = u;
    out.v.col(col + 1) = w;
    out.lambdas[pair++] = lam;
    col += 2;
    if (r == 2) break;
    // Deflate: orthonormal basis of the complement of span{u, w} inside the
    // current subspace.
    Eigen::MatrixXd b = c - u * (u.transpose() * c) - w * (w.transpose() * c);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, r - 2);
    c = q;
  }
  return out;
}

} // namespace

SkewNormalForm skew_normal_form(const GenMatrix& a,
                                const ClassifierConfig& cfg) {
  GenMatrix s = skew_symmetrize(a, cfg);
  const std::size_t n = s.rows();
  GridPtr grid = s.grid();
  const std::size_t ns = grid->size();
  const std::size_t npairs = n / 2;

  std::vector<Eigen::MatrixXcd> vs(ns);
  std::vector<std::vector<double>> lam(npairs, std::vector<double>(ns));
  for (std::size_t i = 0; i < ns; ++i) {
    SampleSnf one = snf_sample(sample_real(s, i));
    vs[i] = one.v.cast<Cplx>();
    for (std::size_t k = 0; k < npairs; ++k) lam[k][i] = one.lambdas[k];
  }

  SkewNormalForm out;
  out.v = matrix_from_samples(grid, vs, ScalarKind::real);
  out.block_count = 0;
  for (std::size_t k = 0; k < npairs; ++k) {
    out.lambdas.push_back(GenScalar::from_real_samples(grid, std::move(lam[k])));
    out.lambda_reports.push_back(classify(out.lambdas.back(), cfg));
    const Classification c = out.lambda_reports.back().classification;
    out.indeterminate.push_back(c == Classification::indeterminate ? 1 : 0);
    if (c != Classification::negligible) ++out.block_count;
  }
  out.zero_block_count = n - 2 * out.block_count;

  NegligibilityCheck orth = entrywise_negligible(
      sub(matmul(transpose(out.v), out.v), GenMatrix::identity(grid, n)), cfg);
  if (!orth.negligible)
    throw PostconditionError("normal-form matrix is not orthogonal: V^t V - I "
                             "classifies as " +
                             to_string(orth.report.classification));

  // V^t A V against the block form assembled from the emitted lambdas.
  std::vector<GenScalar> blocks(n * n, GenScalar::constant(grid, 0.0));
  for (std::size_t k = 0; k < npairs; ++k) {
    blocks[(2 * k) * n + (2 * k + 1)] = neg(out.lambdas[k]);
    blocks[(2 * k + 1) * n + (2 * k)] = out.lambdas[k];
  }
  NegligibilityCheck block = entrywise_negligible(
      sub(matmul(matmul(transpose(out.v), a), out.v),
          GenMatrix(n, n, std::move(blocks))), cfg);
  if (!block.negligible)
    throw PostconditionError("V^t A V does not match the block form "
                             "(residual classifies as " +
                             to_string(block.report.classification) + ")");
  return out;
}

GenMatrix skew_to_standard_j(const GenMatrix& a, const ClassifierConfig& cfg) {
  GenMatrix s = skew_symmetrize(a, cfg);
  InvertibilityResult inv = is_invertible(s, cfg);
  if (!inv.invertible) {
    EigenTuple t = skew_eigentuple(s, cfg);
    std::string detail = "degenerate skew-symmetric matrix; tuple values classify as [";
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      if (k) detail += ", ";
      detail += to_string(classify(t.values[k], cfg).classification);
    }
    detail += "]";
    throw NonInvertibleError(detail, inv.det_report);
  }
  SymplecticForm form = SymplecticForm::from_gram(s, cfg);
  return symplectic_basis(form, cfg).to_matrix();
}

CharPolyResult char_poly_roots_distinguished(const GenMatrix& a,
                                             EigenTupleKind kind,
                                             const ClassifierConfig& cfg) {
  require_square(a, "char_poly_roots_distinguished");
  CharPolyResult out;
  switch (kind) {
    case EigenTupleKind::hermitian_real:
      out.tuple = hermitian_eigentuple(a, cfg).tuple;
      break;
    case EigenTupleKind::skew_imaginary:
      out.tuple = skew_eigentuple(a, cfg);
      break;
    default:
      throw PreconditionError("unsupported eigenvalue kind");
  }

  std::vector<Cplx> probes = {Cplx(0, 0), Cplx(1, 0), Cplx(-1, 0), Cplx(2, 0)};
  if (kind == EigenTupleKind::skew_imaginary) {
    probes.push_back(Cplx(0, 1));
    probes.push_back(Cplx(0, -1));
  }
  GridPtr grid = a.grid();
  for (const Cplx p : probes) {
    GenScalar pc = GenScalar::constant(grid, p);
    // Normalized characteristic polynomial det(p I - A).
    GenScalar lhs = det(sub(scale(pc, GenMatrix::identity(grid, a.rows(),
                                                          a.kind())), a));
    GenScalar rhs = GenScalar::constant(grid, Cplx(1, 0));
    for (const GenScalar& lk : out.tuple.values) rhs = mul(rhs, sub(pc, lk));
    AsymptoticReport rep = classify(sub(lhs, rhs), cfg);
    if (rep.classification != Classification::negligible)
      throw PostconditionError(
          "characteristic polynomial probe failed: residual classifies as " +
          to_string(rep.classification));
    out.probes.push_back(CharPolyProbe{p, rep});
  }
  return out;
}

StabilityReport representative_stability_check(const GenMatrix& a,
                                               const GenMatrix& b,
                                               const ClassifierConfig& cfg) {
  require_square(a, "representative_stability_check");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw StructuralError("stability check needs matrices of equal shape");
  require_same_grid(a.grid(), b.grid());
  NegligibilityCheck pert = entrywise_negligible(sub(a, b), cfg);
  if (!pert.negligible)
    throw PreconditionError("B - A is not a negligible perturbation "
                            "(classifies as " +
                            to_string(pert.report.classification) + ")");

  HermitianEigen ea = hermitian_eigentuple(a, cfg);
  HermitianEigen eb = hermitian_eigentuple(b, cfg);
  const std::size_t n = a.rows();
  GridPtr grid = a.grid();
  const std::size_t ns = grid->size();

  std::vector<double> maxdiff(ns, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < ns; ++i)
      maxdiff[i] = std::max(maxdiff[i],
                            std::abs(ea.tuple.values[k].real_sample(i) -
                                     eb.tuple.values[k].real_sample(i)));

  StabilityReport out;
  out.shift_report = classify(
      GenScalar::from_real_samples(grid, std::vector<double>(maxdiff)), cfg);

  out.weyl_samplewise = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  GenMatrix ha = hermitize(a, cfg), hb = hermitize(b, cfg);
  for (std::size_t i = 0; i < ns; ++i) {
    Eigen::MatrixXcd d = sample_complex(ha, i) - sample_complex(hb, i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
    const double opnorm = es.eigenvalues().cwiseAbs().maxCoeff();
    const double slack =
        kWeylSlackRel *
        std::max(1.0, sample_complex(ha, i).norm() + sample_complex(hb, i).norm());
    const double margin = opnorm + slack - maxdiff[i];
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < 0.0) out.weyl_samplewise = false;
  }
  out.pass = out.weyl_samplewise &&
             out.shift_report.classification == Classification::negligible;
  return out;
}

} // namespace gna
