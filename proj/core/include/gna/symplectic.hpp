#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <gna/linalg.hpp>

namespace gna {

// Skew-symmetric nondegenerate bilinear form on a free module of even rank,
// represented by its Gramian G in the working coordinates:
//   sigma(v, w) = v^t G w  (no conjugation).
// The standard form on rank 2n has G = J = [[0, -I], [I, 0]], so that the
// coordinate vectors e_i = delta_i, f_j = delta_{n+j} satisfy
// sigma(f_j, e_i) = delta_{ji} and sigma(e_i, e_k) = sigma(f_j, f_l) = 0.
class SymplecticForm {
public:
  static SymplecticForm standard(GridPtr grid, std::size_t n_pairs);
  // Validates: square, even dimension >= 2, real kind, G + G^t entrywise
  // negligible, det(G) strictly nonzero.  Throws PreconditionError /
  // StructuralError with the failing evidence.
  static SymplecticForm from_gram(const GenMatrix& gram,
                                  const ClassifierConfig& cfg);

  const GenMatrix& gram() const { return gram_; }
  GridPtr grid() const { return gram_.grid(); }
  std::size_t dim() const { return gram_.rows(); }       // 2n
  std::size_t n_pairs() const { return gram_.rows() / 2; } // n

  GenScalar apply(const GenVector& v, const GenVector& w) const;

private:
  explicit SymplecticForm(GenMatrix gram) : gram_(std::move(gram)) {}
  GenMatrix gram_;
};

// A symplectic basis {e_1..e_n, f_1..f_n}:
//   sigma(e_i, e_k) = 0,  sigma(f_j, f_l) = 0,  sigma(f_j, e_i) = delta_{ji}
// (the off-diagonal relations up to negligible nets).  to_matrix() stacks the
// vectors as columns [e_1..e_n | f_1..f_n]; for basis M of form G this gives
// M^t G M = J up to negligible entries.
struct SymplecticBasis {
  std::vector<GenVector> e;
  std::vector<GenVector> f;

  std::size_t n_pairs() const { return e.size(); }
  GenMatrix to_matrix() const;
};

// Certifies the three relation families; the report classifies the net of
// per-sample maxima over all relation residuals.
struct RelationCheck {
  bool ok;
  AsymptoticReport residual_report;
};
RelationCheck check_symplectic_relations(const SymplecticForm& form,
                                         const SymplecticBasis& basis,
                                         const ClassifierConfig& cfg);

// Constructs a symplectic basis by the pair-and-project recursion: pick
// f_1 = delta_1 and e_1 = G^{-1} delta_1, split off the plane they span with
// the projector w -> w - sigma(w,e_1) f_1 + sigma(w,f_1) e_1, and recurse on
// the Gramian of the projected complement.  The relations are re-checked on
// the assembled basis; failure raises PostconditionError.
SymplecticBasis symplectic_basis(const SymplecticForm& form,
                                 const ClassifierConfig& cfg);

// Partial data for basis extension: vectors tagged with their 1-based pair
// index in {1..n}.  Indices must be distinct; the vectors at matching indices
// must satisfy the partial relations sigma(e_i, e_k) = 0 = sigma(f_j, f_l),
// sigma(f_j, e_i) = delta_{ji} (checked, offending pair named on failure).
using IndexedVector = std::pair<std::size_t, GenVector>;

// Completes partial symplectic data to a full symplectic basis that retains
// every given vector at its index.  Missing partners are obtained by solving
// sigma(x, b) = prescribed over a full basis extension; once the index sets
// agree the orthogonal complement of the paired planes is handled by the
// symplectic_basis recursion.
SymplecticBasis extend_symplectic_basis(const SymplecticForm& form,
                                        const std::vector<IndexedVector>& e_part,
                                        const std::vector<IndexedVector>& f_part,
                                        const ClassifierConfig& cfg);

// Finitely generated submodule with a free generating set; non-free input is
// rejected at construction.  rank() is the number of generators.
class Submodule {
public:
  static Submodule from_generators(std::vector<GenVector> gens,
                                   const ClassifierConfig& cfg);
  // Zero submodule of the given ambient module (annihilator of everything).
  static Submodule zero(GridPtr grid, std::size_t ambient_dim);

  const std::vector<GenVector>& generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }
  std::size_t ambient_dim() const { return ambient_dim_; }
  GridPtr grid() const { return grid_; }

private:
  Submodule(GridPtr grid, std::size_t ambient_dim, std::vector<GenVector> gens)
      : grid_(std::move(grid)), ambient_dim_(ambient_dim), gens_(std::move(gens)) {}
  GridPtr grid_;
  std::size_t ambient_dim_;
  std::vector<GenVector> gens_;
};

// Symplectic annihilator U^sigma = {v : sigma(v, u) = 0 for all u in U}.
// Construction: extend U's generators to a full basis {b_1..b_m}; the map
// v -> (sigma(v, b_j))_j is the invertible matrix B^t G^t, so the preimages
// of delta_{k+1}..delta_{m} form a free generating set of U^sigma.  Always
// satisfies rank U + rank U^sigma = dim.  Postconditions (each generator
// annihilates U, the result is free) are re-checked.
Submodule annihilator(const SymplecticForm& form, const Submodule& u,
                      const ClassifierConfig& cfg);

enum class SubmoduleClass { symplectic, isotropic, involutive, lagrangian, none };
std::string to_string(SubmoduleClass c);

// Evidence gathered while classifying a submodule.
struct SubmoduleClassification {
  SubmoduleClass cls;
  std::size_t rank;
  std::size_t annihilator_rank;    // always ambient_dim - rank
  AsymptoticReport restricted_det; // det of the restricted Gramian sigma(u_i, u_j)
  AsymptoticReport isotropy_residual; // max |sigma(u_i, u_j)| over all pairs
  bool contains_annihilator;       // U^sigma subset of U (involutivity)
};
// Most specific class wins: lagrangian (isotropic and rank = dim/2), then
// isotropic, then symplectic (restricted Gramian invertible), then involutive
// (U^sigma subset of U), else none.
SubmoduleClassification classify_submodule(const SymplecticForm& form,
                                           const Submodule& u,
                                           const ClassifierConfig& cfg);

// Checks A^t J A - J entrywise negligible against the standard form of
// matching dimension, and reports classify(det(A)^2 - 1) alongside.
struct SymplecticMatrixCheck {
  bool is_symplectic;
  AsymptoticReport relation_report;     // max |(A^t J A - J)_{ij}|
  AsymptoticReport det_identity_report; // det(A)^2 - 1
};
SymplecticMatrixCheck is_symplectic_matrix(const GenMatrix& a,
                                           const ClassifierConfig& cfg);

// Basis matrix M = [e|f] of a symplectic basis for the form, certified to
// satisfy M^t G M - J entrywise negligible (PostconditionError otherwise).
GenMatrix symplectomorphism_to_standard(const SymplecticForm& form,
                                        const ClassifierConfig& cfg);

// For Lagrangian U: a symplectic basis whose e-vectors are exactly the given
// generators of U, exhibiting the module as U + U^* with U = span{e_i}.
// Throws PreconditionError when classify_submodule(U) is not lagrangian.
SymplecticBasis lagrangian_standard_form(const SymplecticForm& form,
                                         const Submodule& u,
                                         const ClassifierConfig& cfg);

} // namespace gna
