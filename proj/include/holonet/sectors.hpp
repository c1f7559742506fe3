#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holonet/cocycle.hpp"
#include "holonet/fock.hpp"
#include "holonet/nerve.hpp"
#include "holonet/path.hpp"

namespace holonet {

/// φ_o: ordered product of creators on κ private modes of region o,
/// c†_{m1} c†_{m2} ... c†_{mκ}. A partial isometry that maps Ω to the unit
/// charged vector v_o.
class Implementer {
 public:
  Implementer(const FockSpace& fock, RegionId region, std::vector<int> modes);

  RegionId region() const { return region_; }
  int charge() const { return static_cast<int>(modes_.size()); }
  const std::vector<int>& modes() const { return modes_; }

  Vector apply(const Vector& v) const;
  Vector apply_adjoint(const Vector& v) const;
  /// Dense φ_o with grade κ and support {o}.
  FieldOp op() const;

 private:
  FockSpace fock_;
  RegionId region_;
  std::vector<int> modes_;
};

/// Throws SectorError when o owns fewer than κ private modes.
Implementer implementer(const FockSpace& fock, const OneParticleSpace& space, RegionId o, int kappa);

/// span{Ω, v_o : all regions o} with an explicit orthonormal basis.
struct WindowSubspace {
  Matrix basis;                  // column 0 = Ω, column 1 + k = v_{regions[k]}
  std::vector<RegionId> regions;

  Eigen::Index dimension() const { return basis.cols(); }
  Eigen::Index column(RegionId r) const;
  Matrix projector() const { return basis * basis.adjoint(); }
};

/// Fock space, implementers and window for one cover and charge.
class SectorContext {
 public:
  /// Throws CapacityError when regions × modes_per_region exceeds kMaxModes.
  SectorContext(NerveGraph nerve, int modes_per_region, int charge = 1);
  SectorContext(const SectorContext&) = delete;
  SectorContext& operator=(const SectorContext&) = delete;

  const NerveGraph& nerve() const { return nerve_; }
  const Cover& cover() const { return nerve_.cover; }
  const OneParticleSpace& space() const { return space_; }
  const FockSpace& fock() const { return fock_; }
  int charge() const { return charge_; }
  const Implementer& implementer(RegionId o) const { return implementers_.at(static_cast<std::size_t>(o)); }
  const WindowSubspace& window() const { return window_; }
  /// v_o = φ_o Ω.
  Vector charged_vector(RegionId o) const;

 private:
  NerveGraph nerve_;
  OneParticleSpace space_;
  FockSpace fock_;
  int charge_;
  std::vector<Implementer> implementers_;
  WindowSubspace window_;
};

enum class TransporterKind { Dhr, Twisted, RhoLayer };
std::string to_string(TransporterKind k);

/// Telescoped form g · φ_end φ_start* of a transporter entry or path.
struct TelescopedEntry {
  RegionId end = 0;
  RegionId start = 0;
  GroupValue coefficient = GroupValue::identity(GroupDescriptor::u1());
};

/// Charge transporter on the Fock representation: ẑ_{o'o} = g_{o'o} φ_{o'} φ_o*
/// on every ordered overlap component, z_{oo} = φ_o φ_o*.
class SectorTransporter {
 public:
  SectorTransporter(std::shared_ptr<const SectorContext> ctx, TransitionCocycle cocycle, TransporterKind kind);

  TransporterKind kind() const { return kind_; }
  const SectorContext& context() const { return *ctx_; }
  const TransitionCocycle& cocycle() const { return cocycle_; }

  TelescopedEntry entry(const EdgeStep& s) const;
  /// Grade-0 dense matrix of one entry.
  FieldOp entry_op(const EdgeStep& s) const;
  /// ẑ_p applied to each column of `vectors`; first step applied first.
  Matrix transport(const PosetPath& p, const Matrix& vectors) const;
  /// Dense ẑ_p.
  FieldOp path_op(const PosetPath& p) const;
  /// B* ẑ_p B on the window basis.
  Matrix window_compression(const PosetPath& p) const;
  /// (end, start, g_p) with g_p the ordered cocycle product along p. An empty
  /// path at a is treated as the stay z_{aa}.
  TelescopedEntry telescoped(const PosetPath& p) const;
  /// g_p |v_end⟩⟨v_start| in window coordinates.
  Matrix symbolic_window(const PosetPath& p) const;

 private:
  std::shared_ptr<const SectorContext> ctx_;
  TransitionCocycle cocycle_;
  TransporterKind kind_;
};

/// z¹: every coefficient is 1.
SectorTransporter z1(std::shared_ptr<const SectorContext> ctx);
/// z^σ = g·z¹ with g = transition_cocycle(σ); throws VariantMismatch unless U(1).
SectorTransporter twisted_transporter(std::shared_ptr<const SectorContext> ctx, const SigmaMorphism& sigma);
SectorTransporter twisted_transporter(std::shared_ptr<const SectorContext> ctx, const TransitionCocycle& g);

/// ‖B*(ẑ_{r0r1} ẑ_{r1r2} − ẑ_{r0r2})B‖ for a cover triple.
double window_cocycle_residual(const SectorTransporter& z, const Triple& t);
/// Degenerate nestings (o,o,a), (o,a,a), (o,a,o) along one overlap component.
double window_degenerate_residual(const SectorTransporter& z, const Overlap& ov);
/// ‖B* ẑ_p B − g_p |v_end⟩⟨v_start|‖.
double window_telescoping_residual(const SectorTransporter& z, const PosetPath& p);

struct TopologicalComponent {
  GroupValue value = GroupValue::identity(GroupDescriptor::u1());
  double residual = 0.0;  // distance of the compression from value·|v_a⟩⟨v_a|
};

/// c with B* ẑ_ℓ B = c |v_a⟩⟨v_a|. Throws SectorError when the compression is
/// not of that form within `tol`.
TopologicalComponent topological_component(const SectorTransporter& z, const PosetPath& loop,
                                           double tol = kGroupTolerance);

/// ⟨ẑ_q v_a, ẑ_p v_a⟩ for two paths a -> o.
Complex transition_amplitude(const SectorTransporter& z, const PosetPath& q, const PosetPath& p);

/// π_o(t) = φ_o T φ_o* for gauge-invariant T; throws GradeError otherwise.
FieldOp charge_morphism(const SectorContext& ctx, RegionId o, const FieldOp& t);
/// ‖B*(π_{o'}(t) ẑ_{o'o} − ẑ_{o'o} π_o(t))B‖ for one step o -> o'.
double intertwining_residual(const SectorTransporter& z, const EdgeStep& s, const FieldOp& t);
/// ‖C*(π_o(t') − t')C‖ on the charged window C = φ_o W, t' ∈ R_e, e ⊥ o.
double localization_residual(const SectorContext& ctx, RegionId o, const FieldOp& t_prime);
/// ‖B*(ẑ_p t ẑ_p* − π_o(t))B‖ for p: e -> o, e ⊥ o, t ∈ R_o.
double transport_charge_residual(const SectorTransporter& z, const PosetPath& p, const FieldOp& t);

struct ImplementerRelations {
  double adjoint_pair = 0.0;  // ‖φ_o*φ_e − s φ_e φ_o*‖
  double pair = 0.0;          // ‖φ_o φ_e − s φ_e φ_o‖
  double even = 0.0;          // ‖φ_o T − T φ_o‖
  double sign = 1.0;          // s = (−1)^κ for creator implementers
};
/// The three commutation relations between implementers of o ⊥ e and an
/// even T supported in e, with creator-realization signs.
ImplementerRelations implementer_relations(const SectorContext& ctx, RegionId o, RegionId e, const FieldOp& t);

struct Classification {
  bool dhr = true;
  std::map<std::string, GroupValue> components;  // per generator of the presentation
  int dimension = 1;
  double max_residual = 0.0;
};
Classification classify(const SectorTransporter& z, const Pi1Presentation& pres, double tol = kGroupTolerance);

/// Per-region unit phases relating two transporters on the window, or a
/// witness loop of the ratio cocycle when none exist.
TrivializeResult sector_equivalence(const SectorTransporter& z, const SectorTransporter& w,
                                    double tol = kGroupTolerance);

/// Non-Abelian layer: entries (end, start, ρ(g_{o'o})) without a Fock realization.
class RhoLayerTransporter {
 public:
  /// Throws InconsistentCocycle when ρ∘σ violates a relation of the presentation.
  RhoLayerTransporter(const NerveGraph& nerve, const SigmaMorphism& rho_sigma);

  int dimension() const { return cocycle_.group().dimension; }
  const TransitionCocycle& cocycle() const { return cocycle_; }
  TelescopedEntry entry(const EdgeStep& s) const;

  GroupValue rho_holonomy(const PosetPath& loop) const;
  /// ‖path_ordered_exp(log of each step) − rho_holonomy‖.
  double log_crosscheck(const PosetPath& p) const;
  CocycleReport cocycle_law(double tol = kGroupTolerance) const;
  Classification classify(const Pi1Presentation& pres, double tol = kGroupTolerance) const;

 private:
  NerveGraph nerve_;
  TransitionCocycle cocycle_;
};

}  // namespace holonet
