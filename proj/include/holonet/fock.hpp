#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "holonet/cocycle.hpp"
#include "holonet/cover.hpp"
#include "holonet/group.hpp"

namespace holonet {

/// Largest mode count for which dense Fock matrices are built.
inline constexpr int kMaxModes = 12;

struct Mode {
  std::string label;
  std::vector<RegionId> support;  // regions containing the mode
  int component = -1;             // overlap component for shared modes
};

/// Finite one-particle space: private modes per region, optionally one or
/// more modes shared by the two regions of each overlap component. Modes of
/// causally disjoint regions are distinct basis vectors.
class OneParticleSpace {
 public:
  static OneParticleSpace build(const Cover& cover, int modes_per_region, int shared_per_overlap = 0);
  /// Restricted to `regions` and the overlaps among them.
  static OneParticleSpace build(const Cover& cover, int modes_per_region, int shared_per_overlap,
                                std::span<const RegionId> regions);

  int dimension() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  std::vector<int> private_modes(RegionId r) const;
  std::vector<int> shared_modes(RegionId a, RegionId b) const;
  /// Modes whose support contains r.
  std::vector<int> modes_in(RegionId r) const;

  Vector basis_vector(int mode) const;
  /// ⟨f, g⟩, conjugate-linear in f.
  Complex inner(const Vector& f, const Vector& g) const;
  /// Union of the supports of modes where |f_j| > tol.
  std::set<RegionId> support_of(const Vector& f, double tol = 0.0) const;
  bool supported_in(const Vector& f, RegionId r, double tol = 0.0) const;

 private:
  std::vector<Mode> modes_;
};

enum class Parity { Even, Odd, Mixed };
std::string to_string(Parity p);

/// Dense operator on Fock space with its charge grade (nullopt = mixed),
/// parity and region support tags.
class FieldOp {
 public:
  FieldOp(Matrix m, std::optional<int> grade, Parity parity, std::set<RegionId> support);
  /// Grade-κ operator; parity follows from κ mod 2.
  FieldOp(Matrix m, int grade, std::set<RegionId> support);

  const Matrix& matrix() const { return matrix_; }
  std::optional<int> grade() const { return grade_; }
  Parity parity() const { return parity_; }
  const std::set<RegionId>& support() const { return support_; }

  FieldOp adjoint() const;
  FieldOp scaled(Complex c) const;

  friend FieldOp operator*(const FieldOp& a, const FieldOp& b);
  friend FieldOp operator+(const FieldOp& a, const FieldOp& b);
  friend FieldOp operator-(const FieldOp& a, const FieldOp& b);

 private:
  Matrix matrix_;
  std::optional<int> grade_;
  Parity parity_;
  std::set<RegionId> support_;
};

/// Fock space over K modes; basis index bits are mode occupations, mode 0
/// the least significant bit. Throws CapacityError for K > kMaxModes.
class FockSpace {
 public:
  explicit FockSpace(int modes);

  int modes() const { return modes_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << modes_; }
  Vector vacuum() const;
  static int particle_number(Eigen::Index basis_state);
  /// Diagonal of the number operator.
  Eigen::VectorXd number_diagonal() const;
  Matrix number_operator() const;

  /// Jordan-Wigner sign (−1)^{#occupied modes below j}.
  static double jw_sign(Eigen::Index basis_state, int mode);

  Vector apply_creator(int mode, const Vector& v) const;
  Vector apply_annihilator(int mode, const Vector& v) const;
  FieldOp creator(int mode, std::set<RegionId> support = {}) const;
  FieldOp annihilator(int mode, std::set<RegionId> support = {}) const;
  /// Second-quantized phase U_ζ = ζ^N.
  Matrix gauge_unitary(Complex zeta) const;

 private:
  int modes_;
};

/// ψ(f) = Σ f_j c_j†: the smeared creator, linear in f, grade +1.
FieldOp field(const FockSpace& fock, const OneParticleSpace& space, const Vector& f);

/// α_ζ(T) = U_ζ T U_ζ*.
FieldOp gauge_action(const FockSpace& fock, Complex zeta, const FieldOp& t);
/// Charge grade κ with α_ζ(T) = ζ^κ T for all ζ, probed at two phases;
/// nullopt when T mixes grades.
std::optional<int> grading(const FockSpace& fock, const Matrix& t);
Parity parity_of(const FockSpace& fock, const Matrix& t);

/// ‖[T,S]‖ when either factor is even, ‖{T,S}‖ when both are odd. Supports
/// must be causally disjoint in `cover` (SupportError) and parities definite
/// (GradeError).
double normal_commutation_check(const Cover& cover, const FieldOp& t, const FieldOp& s);

/// ψ_o(f) = e^{−iφ_o} ψ(f) for f supported in o; needs primitives.
FieldOp twisted_local_field(const FockSpace& fock, const OneParticleSpace& space, const FlatPotentialU1& pot,
                            RegionId o, const Vector& f);

struct GluedField {
  FieldOp field;
  double chart_residual = 0.0;    // max distance between chart evaluations
  double section_residual = 0.0;  // max inconsistency of the section on overlaps
};

/// ψ_A(ς) evaluated through every chart o of the section, ψ(e^{−iφ_o} ς_o).
/// Section entries must satisfy ς_o = e^{iÂ_{oa}} ς_a on overlaps; throws
/// SupportError otherwise (tolerance 1e-10).
GluedField glue_psi_A(const FockSpace& fock, const OneParticleSpace& space, const FlatPotentialU1& pot,
                      const std::map<RegionId, Vector>& section);

/// α_g(T)·S for T ∈ F_o, S ∈ F_{o'}; g must be a U(1) value and T graded.
FieldOp twisted_product(const FockSpace& fock, const FieldOp& t, const FieldOp& s, const GroupValue& g);

/// Dimension of the commutant of a set of operators (small K only).
int commutant_dimension(std::span<const Matrix> generators);

}  // namespace holonet
