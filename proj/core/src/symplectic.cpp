#include "gna/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "gna/errors.hpp"

namespace gna {

namespace {

// sigma(v, w) = v^t G w without building a SymplecticForm.
GenScalar sigma_of(const GenMatrix& g, const GenVector& v, const GenVector& w) {
  return dot_bilinear(v, matvec(g, w));
}

double max_sample_norm(const GenVector& v) {
  double worst = 0.0;
  for (std::size_t s = 0; s < v.grid()->size(); ++s)
    worst = std::max(worst, sample_complex(v, s).norm());
  return worst;
}

GenMatrix standard_j(GridPtr grid, std::size_t n_pairs) {
  const std::size_t m = 2 * n_pairs;
  GenScalar zero = GenScalar::constant(grid, 0.0);
  GenScalar one = GenScalar::constant(grid, 1.0);
  GenScalar minus_one = GenScalar::constant(grid, -1.0);
  std::vector<GenScalar> entries(m * m, zero);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    entries[i * m + (n_pairs + i)] = minus_one;  // sigma(e_i, f_i) = -1
    entries[(n_pairs + i) * m + i] = one;    // sigma(f_i, e_i) = +1
  }
  return GenMatrix(m, m, std::move(entries));
}

struct BasisCols {
  std::vector<GenVector> e, f;
};

// Pair-and-project recursion on a Gramian expressed in the coordinates of the
// current complement.  depth only feeds error messages.
BasisCols basis_recursion(const GenMatrix& g, const ClassifierConfig& cfg,
                          int depth) {
  const std::size_t m = g.rows();
  GridPtr grid = g.grid();

  // Hyperbolic pair by complete pivoting: the entry G_ij largest across the
  // probe samples pairs delta_i with delta_j / G_ij.  The pair then has norm
  // ~ 1 / |G_ij|, and pivot maximality bounds every projection coefficient
  // below, which is what keeps the recursion's growth in check.  Entries that
  // vanish on part of the grid (ring zero divisors) cannot be inverted, so a
  // Gramian without a single strictly nonzero entry falls back to a solve
  // against a unit vector, chosen by the smallest inverse column.
  const std::size_t probes[3] = {0, grid->size() / 2, grid->size() - 1};
  std::size_t pi = 0, pj = 1;
  {
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double score = std::numeric_limits<double>::infinity();
        for (std::size_t s : probes)
          score = std::min(score, std::abs(g.at(i, j).sample(s)));
        if (score > best) {
          best = score;
          pi = i;
          pj = j;
        }
      }
    }
    if (!(best > 0.0) ||
        !is_strictly_nonzero(classify(g.at(pi, pj), cfg))) pi = m;
  }

  GenVector f1, e1;
  if (pi < m) {
    f1 = GenVector::unit(grid, m, pi, g.kind());
    e1 = scale(invert(g.at(pi, pj), cfg),
               GenVector::unit(grid, m, pj, g.kind()));
  } else {
    // Fallback pivot: the coordinate whose G^-1 column is smallest across
    // samples.  The per-sample scan is a selection heuristic only; the
    // ring-level solve still certifies the chosen column.
    std::size_t pivot = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> score(m, 0.0);
    for (std::size_t s = 0; s < grid->size(); ++s) {
      const Eigen::MatrixXcd inv =
          sample_complex(g, s).partialPivLu().inverse();
      for (std::size_t i = 0; i < m; ++i)
        score[i] = std::max(score[i], inv.col(i).norm());
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (std::isfinite(score[i]) && score[i] < best) {
        best = score[i];
        pivot = i;
      }
    }
    f1 = GenVector::unit(grid, m, pivot, g.kind());
    try {
      e1 = solve(g, f1, cfg);  // G e1 = delta_pivot, so sigma(f1, e1) = 1
    } catch (const NonInvertibleError& err) {
      if (depth == 0)
        throw PreconditionError(std::string("symplectic basis: Gramian is not "
                                            "invertible: ") + err.what());
      throw PostconditionError(
          "symplectic basis: projected complement Gramian at depth " +
          std::to_string(depth) + " is not invertible: " + err.what());
    }
  }

  // Balance the pair: sigma(e/t, t f) = sigma(e, f), so splitting the scale
  // keeps both columns moderate instead of one huge and one unit.
  {
    const double nrm = max_sample_norm(e1);
    if (nrm > 4.0) {
      const double t = std::sqrt(nrm);
      e1 = scale(GenScalar::constant(grid, 1.0 / t), e1);
      f1 = scale(GenScalar::constant(grid, t), f1);
    }
  }

  if (m == 2) return BasisCols{{e1}, {f1}};

  // Project every coordinate vector onto the sigma-complement of the plane:
  //   pi(w) = w - sigma(w,e1) f1 + sigma(w,f1) e1.
  // The projections span the complement; keep the m-2 of them that span it
  // best, ranked by a column-pivoted QR at the head sample.  Coordinates
  // nearly inside the plane project to nearly dependent columns, and feeding
  // those to the recursion makes the restricted Gramian numerically singular.
  std::vector<GenVector> proj;
  proj.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    const GenVector b = GenVector::unit(grid, m, l, g.kind());
    proj.push_back(add(sub(b, scale(sigma_of(g, b, e1), f1)),
                       scale(sigma_of(g, b, f1), e1)));
  }
  Eigen::MatrixXcd p0(m, m);
  for (std::size_t l = 0; l < m; ++l)
    p0.col(static_cast<Eigen::Index>(l)) = sample_complex(proj[l], 0);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(p0);
  const auto perm = qr.colsPermutation().indices();

  // Equilibrate the kept columns; rescaling a complement generator only
  // rescales the recursion's coordinates, not the subspace.
  std::vector<GenVector> cs;
  cs.reserve(m - 2);
  for (std::size_t l = 0; l + 2 < m; ++l) {
    GenVector c = proj[static_cast<std::size_t>(perm[static_cast<Eigen::Index>(l)])];
    const double nrm = max_sample_norm(c);
    if (nrm > 0.0 && (nrm > 4.0 || nrm < 0.25))
      c = scale(GenScalar::constant(grid, 1.0 / nrm), c);
    cs.push_back(std::move(c));
  }

  // Restricted Gramian H_{ij} = sigma(c_i, c_j) in complement coordinates.
  std::vector<GenVector> gc;
  gc.reserve(cs.size());
  for (const GenVector& c : cs) gc.push_back(matvec(g, c));
  std::vector<GenScalar> h;
  h.reserve(cs.size() * cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      h.push_back(dot_bilinear(cs[i], gc[j]));
  GenMatrix hmat(cs.size(), cs.size(), std::move(h));

  BasisCols inner = basis_recursion(hmat, cfg, depth + 1);

  // Map complement-coordinate vectors back through the c-columns.
  GenMatrix cmat = GenMatrix::from_columns(cs);
  BasisCols out;
  out.e.push_back(std::move(e1));
  out.f.push_back(std::move(f1));
  for (const GenVector& v : inner.e) out.e.push_back(matvec(cmat, v));
  for (const GenVector& v : inner.f) out.f.push_back(matvec(cmat, v));
  return out;
}

std::string pair_name(const char* fam_a, std::size_t i, const char* fam_b,
                      std::size_t j) {
  return std::string(fam_a) + "_" + std::to_string(i) + ", " + fam_b + "_" +
         std::to_string(j);
}

} // namespace

SymplecticForm SymplecticForm::standard(GridPtr grid, std::size_t n_pairs) {
  if (n_pairs == 0)
    throw PreconditionError("standard symplectic form needs at least one pair");
  return SymplecticForm(standard_j(std::move(grid), n_pairs));
}

SymplecticForm SymplecticForm::from_gram(const GenMatrix& gram,
                                         const ClassifierConfig& cfg) {
  if (gram.rows() != gram.cols())
    throw StructuralError("symplectic Gramian must be square");
  if (gram.rows() < 2 || gram.rows() % 2 != 0)
    throw PreconditionError("symplectic Gramian must have even dimension >= 2, got " +
                            std::to_string(gram.rows()));
  if (gram.kind() != ScalarKind::real)
    throw PreconditionError("symplectic Gramian must be real kind");
  NegligibilityCheck skew = entrywise_negligible(add(gram, transpose(gram)), cfg);
  if (!skew.negligible)
    throw SymmetryError("Gramian is not skew-symmetric: G + G^t classifies as " +
                        to_string(skew.report.classification));
  InvertibilityResult inv = is_invertible(gram, cfg);
  if (!inv.invertible)
    throw NonInvertibleError("symplectic Gramian is degenerate", inv.det_report);
  return SymplecticForm(gram);
}

GenScalar SymplecticForm::apply(const GenVector& v, const GenVector& w) const {
  if (v.n() != dim() || w.n() != dim())
    throw StructuralError("symplectic form applied to vectors of wrong length");
  return dot_bilinear(v, matvec(gram_, w));
}

GenMatrix SymplecticBasis::to_matrix() const {
  if (e.empty() || e.size() != f.size())
    throw StructuralError("symplectic basis must hold matching e/f families");
  std::vector<GenVector> cols;
  cols.reserve(2 * e.size());
  for (const GenVector& v : e) cols.push_back(v);
  for (const GenVector& v : f) cols.push_back(v);
  return GenMatrix::from_columns(cols);
}

RelationCheck check_symplectic_relations(const SymplecticForm& form,
                                         const SymplecticBasis& basis,
                                         const ClassifierConfig& cfg) {
  if (basis.e.size() != basis.f.size() || 2 * basis.e.size() != form.dim())
    throw StructuralError("basis size does not match the form dimension");
  GenMatrix m = basis.to_matrix();
  GenMatrix rel = sub(matmul(matmul(transpose(m), form.gram()), m),
                      standard_j(form.grid(), form.n_pairs()));
  NegligibilityCheck nc = entrywise_negligible(rel, cfg);
  return RelationCheck{nc.negligible, nc.report};
}

SymplecticBasis symplectic_basis(const SymplecticForm& form,
                                 const ClassifierConfig& cfg) {
  BasisCols cols = basis_recursion(form.gram(), cfg, 0);
  SymplecticBasis basis{std::move(cols.e), std::move(cols.f)};
  RelationCheck check = check_symplectic_relations(form, basis, cfg);
  if (!check.ok)
    throw PostconditionError(
        "symplectic basis failed the relation check: max residual classifies as " +
        to_string(check.residual_report.classification));
  return basis;
}

SymplecticBasis extend_symplectic_basis(const SymplecticForm& form,
                                        const std::vector<IndexedVector>& e_part,
                                        const std::vector<IndexedVector>& f_part,
                                        const ClassifierConfig& cfg) {
  const std::size_t n = form.n_pairs();
  const std::size_t m = form.dim();
  const GenMatrix& g = form.gram();
  GridPtr grid = form.grid();

  std::map<std::size_t, GenVector> es, fs;
  auto ingest = [&](const std::vector<IndexedVector>& part, const char* fam,
                    std::map<std::size_t, GenVector>& dst) {
    for (const IndexedVector& iv : part) {
      if (iv.first < 1 || iv.first > n)
        throw PreconditionError(std::string(fam) + " index " +
                                std::to_string(iv.first) + " outside 1.." +
                                std::to_string(n));
      if (iv.second.n() != m)
        throw StructuralError("partial basis vector has wrong length");
      require_same_grid(grid, iv.second.grid());
      if (!dst.emplace(iv.first, iv.second).second)
        throw PreconditionError(std::string("duplicate ") + fam + " index " +
                                std::to_string(iv.first));
    }
  };
  ingest(e_part, "e", es);
  ingest(f_part, "f", fs);

  if (es.empty() && fs.empty()) return symplectic_basis(form, cfg);

  // Partial relations: sigma(e_i, e_k) = 0, sigma(f_j, f_l) = 0,
  // sigma(f_j, e_i) = delta_{ji}.  Name the first offending pair.
  for (auto& [i, ei] : es)
    for (auto& [k, ek] : es) {
      if (i >= k) continue;
      AsymptoticReport r = classify(sigma_of(g, ei, ek), cfg);
      if (r.classification != Classification::negligible)
        throw PreconditionError("partial relation sigma(" + pair_name("e", i, "e", k) +
                                ") is not negligible (" + to_string(r.classification) + ")");
    }
  for (auto& [j, fj] : fs)
    for (auto& [l, fl] : fs) {
      if (j >= l) continue;
      AsymptoticReport r = classify(sigma_of(g, fj, fl), cfg);
      if (r.classification != Classification::negligible)
        throw PreconditionError("partial relation sigma(" + pair_name("f", j, "f", l) +
                                ") is not negligible (" + to_string(r.classification) + ")");
    }
  for (auto& [j, fj] : fs)
    for (auto& [i, ei] : es) {
      GenScalar want = GenScalar::constant(grid, j == i ? 1.0 : 0.0);
      AsymptoticReport r = classify(sub(sigma_of(g, fj, ei), want), cfg);
      if (r.classification != Classification::negligible)
        throw PreconditionError("partial relation sigma(" + pair_name("f", j, "e", i) +
                                ") - delta is not negligible (" +
                                to_string(r.classification) + ")");
    }
  {
    std::vector<GenVector> all;
    for (auto& [i, v] : es) all.push_back(v);
    for (auto& [j, v] : fs) all.push_back(v);
    if (!is_free_set(all, cfg))
      throw PreconditionError("partial basis vectors are not a free set");
  }

  // Solve sigma(x, w_r) = rhs_r over a full basis extension of the current
  // vectors.  The coefficient row for sigma(x, w) = x^t G w is (G w)^t.
  auto solve_partner = [&](const std::vector<GenScalar>& rhs_for_current)
      -> GenVector {
    std::vector<GenVector> current;
    for (auto& [i, v] : es) current.push_back(v);
    for (auto& [j, v] : fs) current.push_back(v);
    std::vector<GenVector> full = extend_to_basis(current, cfg);
    std::vector<GenVector> rows;
    std::vector<GenScalar> rhs;
    rows.reserve(m);
    rhs.reserve(m);
    for (std::size_t r = 0; r < full.size(); ++r) {
      rows.push_back(matvec(g, full[r]));
      rhs.push_back(r < rhs_for_current.size() ? rhs_for_current[r]
                                               : GenScalar::constant(grid, 0.0));
    }
    return solve(GenMatrix::from_rows(rows), GenVector(std::move(rhs)), cfg);
  };

  // Pair up missing partners one index at a time.  The rhs orders match the
  // `current` ordering inside solve_partner: e's ascending, then f's.
  for (;;) {
    std::size_t j0 = 0;
    bool found = false;
    for (auto& [j, v] : fs)
      if (!es.count(j)) { j0 = j; found = true; break; }
    if (found) {
      // New e_{j0}: sigma(x, e_i) = 0, sigma(x, f_j) = -delta_{j0 j}.
      std::vector<GenScalar> rhs;
      for (std::size_t t = 0; t < es.size(); ++t)
        rhs.push_back(GenScalar::constant(grid, 0.0));
      for (auto& [j, v] : fs) {
        (void)v;
        rhs.push_back(GenScalar::constant(grid, j == j0 ? -1.0 : 0.0));
      }
      es.emplace(j0, solve_partner(rhs));
      continue;
    }
    std::size_t i0 = 0;
    for (auto& [i, v] : es)
      if (!fs.count(i)) { i0 = i; found = true; break; }
    if (found) {
      // New f_{i0}: sigma(y, e_i) = delta_{i0 i}, sigma(y, f_j) = 0.
      std::vector<GenScalar> rhs;
      for (auto& [i, v] : es) {
        (void)v;
        rhs.push_back(GenScalar::constant(grid, i == i0 ? 1.0 : 0.0));
      }
      for (std::size_t t = 0; t < fs.size(); ++t)
        rhs.push_back(GenScalar::constant(grid, 0.0));
      fs.emplace(i0, solve_partner(rhs));
      continue;
    }
    break;
  }

  // Index sets now agree.  Handle the unpaired indices through the
  // sigma-complement of the paired planes.
  std::vector<std::size_t> missing;
  for (std::size_t i = 1; i <= n; ++i)
    if (!es.count(i)) missing.push_back(i);

  if (!missing.empty()) {
    std::vector<GenVector> paired;
    for (auto& [i, v] : es) paired.push_back(v);
    for (auto& [j, v] : fs) paired.push_back(v);
    std::vector<GenVector> full = extend_to_basis(paired, cfg);
    std::vector<GenVector> cs;
    for (std::size_t l = paired.size(); l < full.size(); ++l) {
      GenVector c = full[l];
      for (auto& [i, ei] : es) {
        const GenVector& fi = fs.at(i);
        c = add(sub(c, scale(sigma_of(g, full[l], ei), fi)),
                scale(sigma_of(g, full[l], fi), ei));
      }
      cs.push_back(std::move(c));
    }
    std::vector<GenVector> gc;
    for (const GenVector& c : cs) gc.push_back(matvec(g, c));
    std::vector<GenScalar> h;
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j)
        h.push_back(dot_bilinear(cs[i], gc[j]));
    BasisCols inner =
        basis_recursion(GenMatrix(cs.size(), cs.size(), std::move(h)), cfg, 1);
    GenMatrix cmat = GenMatrix::from_columns(cs);
    for (std::size_t t = 0; t < missing.size(); ++t) {
      es.emplace(missing[t], matvec(cmat, inner.e[t]));
      fs.emplace(missing[t], matvec(cmat, inner.f[t]));
    }
  }

  SymplecticBasis basis;
  for (std::size_t i = 1; i <= n; ++i) {
    basis.e.push_back(es.at(i));
    basis.f.push_back(fs.at(i));
  }
  RelationCheck check = check_symplectic_relations(form, basis, cfg);
  if (!check.ok)
    throw PostconditionError(
        "extended basis failed the relation check: max residual classifies as " +
        to_string(check.residual_report.classification));
  return basis;
}

Submodule Submodule::from_generators(std::vector<GenVector> gens,
                                     const ClassifierConfig& cfg) {
  if (gens.empty())
    throw PreconditionError("submodule needs at least one generator; "
                            "use Submodule::zero for the zero submodule");
  GridPtr grid = gens.front().grid();
  const std::size_t dim = gens.front().n();
  for (const GenVector& v : gens) {
    require_same_grid(grid, v.grid());
    if (v.n() != dim) throw StructuralError("generators have mixed lengths");
  }
  if (gens.size() > dim)
    throw PreconditionError("more generators than the ambient dimension");
  if (!is_free_set(gens, cfg))
    throw PreconditionError("generators are not a free set");
  return Submodule(std::move(grid), dim, std::move(gens));
}

Submodule Submodule::zero(GridPtr grid, std::size_t ambient_dim) {
  return Submodule(std::move(grid), ambient_dim, {});
}

Submodule annihilator(const SymplecticForm& form, const Submodule& u,
                      const ClassifierConfig& cfg) {
  const std::size_t m = form.dim();
  if (u.ambient_dim() != m)
    throw StructuralError("submodule ambient dimension does not match the form");
  require_same_grid(form.grid(), u.grid());
  const std::size_t k = u.rank();
  if (k == m) return Submodule::zero(form.grid(), m);

  std::vector<GenVector> full;
  if (k == 0) {
    for (std::size_t j = 0; j < m; ++j)
      full.push_back(GenVector::unit(form.grid(), m, j, form.gram().kind()));
  } else {
    full = extend_to_basis(u.generators(), cfg);
  }

  // Rows (G b_j)^t make v -> (sigma(v, b_j))_j; preimages of the delta's past
  // position k generate U^sigma.
  std::vector<GenVector> rows;
  for (const GenVector& b : full) rows.push_back(matvec(form.gram(), b));
  GenMatrix msys = GenMatrix::from_rows(rows);

  std::vector<GenVector> gens;
  for (std::size_t l = k; l < m; ++l)
    gens.push_back(solve(msys, GenVector::unit(form.grid(), m, l), cfg));

  for (const GenVector& w : gens)
    for (std::size_t i = 0; i < k; ++i) {
      AsymptoticReport r = classify(form.apply(w, u.generators()[i]), cfg);
      if (r.classification != Classification::negligible)
        throw PostconditionError(
            "annihilator generator does not annihilate the submodule "
            "(classifies as " + to_string(r.classification) + ")");
    }
  if (!is_free_set(gens, cfg))
    throw PostconditionError("annihilator generators are not a free set");
  return Submodule::from_generators(std::move(gens), cfg);
}

std::string to_string(SubmoduleClass c) {
  switch (c) {
    case SubmoduleClass::symplectic: return "symplectic";
    case SubmoduleClass::isotropic: return "isotropic";
    case SubmoduleClass::involutive: return "involutive";
    case SubmoduleClass::lagrangian: return "lagrangian";
    case SubmoduleClass::none: return "none";
  }
  return "unknown";
}

SubmoduleClassification classify_submodule(const SymplecticForm& form,
                                           const Submodule& u,
                                           const ClassifierConfig& cfg) {
  const std::size_t k = u.rank();
  if (k == 0)
    throw PreconditionError("cannot classify the zero submodule");
  if (u.ambient_dim() != form.dim())
    throw StructuralError("submodule ambient dimension does not match the form");

  std::vector<GenScalar> r;
  r.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      r.push_back(form.apply(u.generators()[i], u.generators()[j]));
  GenMatrix restricted(k, k, std::move(r));

  SubmoduleClassification out;
  out.rank = k;
  out.restricted_det = classify(det(restricted), cfg);
  out.isotropy_residual = classify(max_abs_entry(restricted), cfg);

  Submodule ann = annihilator(form, u, cfg);
  out.annihilator_rank = ann.rank();
  out.contains_annihilator = true;
  for (const GenVector& w : ann.generators())
    if (!in_span(u.generators(), w, cfg).member) {
      out.contains_annihilator = false;
      break;
    }

  const bool iso =
      out.isotropy_residual.classification == Classification::negligible;
  const bool sympl = is_strictly_nonzero(out.restricted_det);
  if (iso && k == form.n_pairs()) out.cls = SubmoduleClass::lagrangian;
  else if (iso) out.cls = SubmoduleClass::isotropic;
  else if (sympl) out.cls = SubmoduleClass::symplectic;
  else if (out.contains_annihilator) out.cls = SubmoduleClass::involutive;
  else out.cls = SubmoduleClass::none;
  return out;
}

SymplecticMatrixCheck is_symplectic_matrix(const GenMatrix& a,
                                           const ClassifierConfig& cfg) {
  if (a.rows() != a.cols())
    throw StructuralError("symplectic matrix check needs a square matrix");
  if (a.rows() < 2 || a.rows() % 2 != 0)
    throw PreconditionError("symplectic matrix check needs even dimension >= 2");
  GenMatrix j = standard_j(a.grid(), a.rows() / 2);
  NegligibilityCheck rel =
      entrywise_negligible(sub(matmul(matmul(transpose(a), j), a), j), cfg);
  GenScalar d = det(a);
  AsymptoticReport detrep =
      classify(sub(mul(d, d), GenScalar::constant(a.grid(), 1.0)), cfg);
  bool ok = rel.negligible && detrep.classification == Classification::negligible;
  return SymplecticMatrixCheck{ok, rel.report, detrep};
}

GenMatrix symplectomorphism_to_standard(const SymplecticForm& form,
                                        const ClassifierConfig& cfg) {
  return symplectic_basis(form, cfg).to_matrix();
}

SymplecticBasis lagrangian_standard_form(const SymplecticForm& form,
                                         const Submodule& u,
                                         const ClassifierConfig& cfg) {
  SubmoduleClassification sc = classify_submodule(form, u, cfg);
  if (sc.cls != SubmoduleClass::lagrangian)
    throw PreconditionError("submodule is not Lagrangian (classified as " +
                            to_string(sc.cls) + ")");
  std::vector<IndexedVector> e_part;
  for (std::size_t i = 0; i < u.rank(); ++i)
    e_part.emplace_back(i + 1, u.generators()[i]);
  return extend_symplectic_basis(form, e_part, {}, cfg);
}

} // namespace gna
