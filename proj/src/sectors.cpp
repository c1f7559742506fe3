#include "holonet/sectors.hpp"

#include <algorithm>
#include <cmath>

namespace holonet {

namespace {

Complex scalar_coefficient(const GroupValue& g) {
  if (g.kind() != GroupKind::PhaseU1) throw VariantMismatch("Fock transporters need U(1) coefficients");
  return g.to_complex();
}

Matrix window_of(const SectorContext& ctx, const Matrix& image) { return ctx.window().basis.adjoint() * image; }

}  // namespace

// ---------------------------------------------------------------- Implementer

Implementer::Implementer(const FockSpace& fock, RegionId region, std::vector<int> modes)
    : fock_(fock), region_(region), modes_(std::move(modes)) {
  if (modes_.empty()) throw SectorError("implementer needs charge at least 1");
}

Vector Implementer::apply(const Vector& v) const {
  Vector out = v;
  for (auto it = modes_.rbegin(); it != modes_.rend(); ++it) out = fock_.apply_creator(*it, out);
  return out;
}

Vector Implementer::apply_adjoint(const Vector& v) const {
  // (c†_{m1} ... c†_{mκ})* = c_{mκ} ... c_{m1}
  Vector out = v;
  for (int m : modes_) out = fock_.apply_annihilator(m, out);
  return out;
}

FieldOp Implementer::op() const {
  Matrix m = Matrix::Identity(fock_.dimension(), fock_.dimension());
  for (auto it = modes_.rbegin(); it != modes_.rend(); ++it) m = fock_.creator(*it).matrix() * m;
  return FieldOp(std::move(m), charge(), {region_});
}

Implementer implementer(const FockSpace& fock, const OneParticleSpace& space, RegionId o, int kappa) {
  if (kappa < 1) throw SectorError("charge must be a positive integer");
  std::vector<int> modes = space.private_modes(o);
  if (static_cast<int>(modes.size()) < kappa) {
    throw SectorError("region #" + std::to_string(o) + " owns " + std::to_string(modes.size()) +
                      " private modes, charge " + std::to_string(kappa) + " needs more");
  }
  modes.resize(static_cast<std::size_t>(kappa));
  return Implementer(fock, o, std::move(modes));
}

// ---------------------------------------------------------------- context

Eigen::Index WindowSubspace::column(RegionId r) const {
  auto it = std::find(regions.begin(), regions.end(), r);
  if (it == regions.end()) throw SectorError("region #" + std::to_string(r) + " has no window vector");
  return 1 + (it - regions.begin());
}

namespace {

FockSpace checked_fock(const Cover& cover, int modes_per_region) {
  const long k = static_cast<long>(cover.region_count()) * modes_per_region;
  if (k > kMaxModes) {
    throw CapacityError(std::to_string(cover.region_count()) + " regions x " + std::to_string(modes_per_region) +
                        " modes = " + std::to_string(k) + " modes exceeds the dense capacity of " +
                        std::to_string(kMaxModes));
  }
  return FockSpace(static_cast<int>(k));
}

}  // namespace

SectorContext::SectorContext(NerveGraph nerve, int modes_per_region, int charge)
    : nerve_(std::move(nerve)),
      space_(OneParticleSpace::build(nerve_.cover, modes_per_region)),
      fock_(checked_fock(nerve_.cover, modes_per_region)),
      charge_(charge) {
  for (RegionId r = 0; r < nerve_.vertex_count(); ++r) implementers_.push_back(holonet::implementer(fock_, space_, r, charge));
  window_.basis = Matrix::Zero(fock_.dimension(), nerve_.vertex_count() + 1);
  window_.basis.col(0) = fock_.vacuum();
  for (RegionId r = 0; r < nerve_.vertex_count(); ++r) {
    window_.regions.push_back(r);
    window_.basis.col(r + 1) = charged_vector(r);
  }
}

Vector SectorContext::charged_vector(RegionId o) const { return implementer(o).apply(fock_.vacuum()); }

// ---------------------------------------------------------------- transporter

std::string to_string(TransporterKind k) {
  switch (k) {
    case TransporterKind::Dhr: return "z1";
    case TransporterKind::Twisted: return "z_sigma";
    case TransporterKind::RhoLayer: return "rho_layer";
  }
  return "?";
}

SectorTransporter::SectorTransporter(std::shared_ptr<const SectorContext> ctx, TransitionCocycle cocycle,
                                     TransporterKind kind)
    : ctx_(std::move(ctx)), cocycle_(std::move(cocycle)), kind_(kind) {
  if (!ctx_) throw SectorError("transporter needs a sector context");
  if (cocycle_.group().kind != GroupKind::PhaseU1) throw VariantMismatch("Fock transporters need a U(1) cocycle");
  if (cocycle_.edge_count() != ctx_->nerve().edges.size()) throw SectorError("cocycle does not match the cover");
}

TelescopedEntry SectorTransporter::entry(const EdgeStep& s) const {
  return {s.to, s.from, cocycle_.value(s)};
}

FieldOp SectorTransporter::entry_op(const EdgeStep& s) const {
  const Complex c = scalar_coefficient(cocycle_.value(s));
  const FieldOp to = ctx_->implementer(s.to).op();
  const FieldOp from = ctx_->implementer(s.from).op();
  return (to * from.adjoint()).scaled(c);
}

Matrix SectorTransporter::transport(const PosetPath& p, const Matrix& vectors) const {
  std::vector<EdgeStep> steps = p.steps();
  if (steps.empty()) steps.push_back({p.start(), p.start(), -1});
  Matrix out = vectors;
  for (const auto& s : steps) {
    const Complex c = scalar_coefficient(cocycle_.value(s));
    const Implementer& to = ctx_->implementer(s.to);
    const Implementer& from = ctx_->implementer(s.from);
    for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = c * to.apply(from.apply_adjoint(out.col(j)));
  }
  return out;
}

FieldOp SectorTransporter::path_op(const PosetPath& p) const {
  std::vector<EdgeStep> steps = p.steps();
  if (steps.empty()) steps.push_back({p.start(), p.start(), -1});
  std::optional<FieldOp> acc;
  for (const auto& s : steps) {
    FieldOp e = entry_op(s);
    acc = acc ? e * *acc : std::move(e);
  }
  return *acc;
}

Matrix SectorTransporter::window_compression(const PosetPath& p) const {
  return window_of(*ctx_, transport(p, ctx_->window().basis));
}

TelescopedEntry SectorTransporter::telescoped(const PosetPath& p) const {
  return {p.end(), p.start(), holonomy(cocycle_, p)};
}

Matrix SectorTransporter::symbolic_window(const PosetPath& p) const {
  const WindowSubspace& w = ctx_->window();
  Matrix m = Matrix::Zero(w.dimension(), w.dimension());
  m(w.column(p.end()), w.column(p.start())) = scalar_coefficient(holonomy(cocycle_, p));
  return m;
}

SectorTransporter z1(std::shared_ptr<const SectorContext> ctx) {
  const GroupDescriptor u1 = GroupDescriptor::u1();
  std::vector<GroupValue> ones(ctx->nerve().edges.size(), GroupValue::identity(u1));
  TransitionCocycle g(ctx->nerve(), std::move(ones));
  return SectorTransporter(std::move(ctx), std::move(g), TransporterKind::Dhr);
}

SectorTransporter twisted_transporter(std::shared_ptr<const SectorContext> ctx, const SigmaMorphism& sigma) {
  if (sigma.target().kind != GroupKind::PhaseU1) {
    throw VariantMismatch("twisted_transporter needs a U(1) morphism; use the rho layer for U(n)");
  }
  TransitionCocycle g = transition_cocycle(sigma, ctx->nerve());
  return SectorTransporter(std::move(ctx), std::move(g), TransporterKind::Twisted);
}

SectorTransporter twisted_transporter(std::shared_ptr<const SectorContext> ctx, const TransitionCocycle& g) {
  if (g.group().kind != GroupKind::PhaseU1) throw VariantMismatch("twisted_transporter needs a U(1) cocycle");
  return SectorTransporter(std::move(ctx), g, TransporterKind::Twisted);
}

// ---------------------------------------------------------------- window identities

double window_cocycle_residual(const SectorTransporter& z, const Triple& t) {
  const auto [r0, r1, r2] = t.regions;
  const PosetPath two(r2, {EdgeStep{r1, r2, t.components[1]}, EdgeStep{r0, r1, t.components[0]}});
  const PosetPath one(r2, {EdgeStep{r0, r2, t.components[2]}});
  return max_norm(z.window_compression(two) - z.window_compression(one));
}

double window_degenerate_residual(const SectorTransporter& z, const Overlap& ov) {
  const RegionId o = ov.first;
  const RegionId a = ov.second;
  const int c = ov.component;
  const EdgeStep stay_o{o, o, -1};
  const EdgeStep stay_a{a, a, -1};
  const EdgeStep oa{o, a, c};
  const EdgeStep ao{a, o, c};
  const Matrix z_oa = z.window_compression(PosetPath(a, {oa}));
  double r = 0.0;
  r = std::max(r, max_norm(z.window_compression(PosetPath(a, {oa, stay_o})) - z_oa));
  r = std::max(r, max_norm(z.window_compression(PosetPath(a, {stay_a, oa})) - z_oa));
  r = std::max(r, max_norm(z.window_compression(PosetPath(o, {ao, oa})) - z.window_compression(PosetPath(o, {stay_o}))));
  return r;
}

double window_telescoping_residual(const SectorTransporter& z, const PosetPath& p) {
  return max_norm(z.window_compression(p) - z.symbolic_window(p));
}

TopologicalComponent topological_component(const SectorTransporter& z, const PosetPath& loop, double tol) {
  if (!loop.is_loop()) throw PathError("topological_component: path is not a loop");
  const Matrix m = z.window_compression(loop);
  const Eigen::Index a = z.context().window().column(loop.start());
  const Complex c = m(a, a);
  Matrix rest = m;
  rest(a, a) = 0.0;
  const double residual = std::max(max_norm(rest), std::abs(std::abs(c) - 1.0));
  if (!(residual <= tol)) {
    throw SectorError("topological_component: window compression is not a unit scalar (residual " +
                      std::to_string(residual) + ")");
  }
  return {GroupValue::phase(std::arg(c)), residual};
}

Complex transition_amplitude(const SectorTransporter& z, const PosetPath& q, const PosetPath& p) {
  if (q.start() != p.start() || q.end() != p.end()) {
    throw PathError("transition_amplitude: paths do not share both endpoints");
  }
  const Vector v = z.context().charged_vector(p.start());
  const Vector zq = z.transport(q, v);
  const Vector zp = z.transport(p, v);
  return zq.dot(zp);
}

// ---------------------------------------------------------------- charges

FieldOp charge_morphism(const SectorContext& ctx, RegionId o, const FieldOp& t) {
  const std::optional<int> k = t.grade() ? t.grade() : grading(ctx.fock(), t.matrix());
  if (!k || *k != 0) throw GradeError("charge_morphism: operator is not gauge invariant");
  const FieldOp phi = ctx.implementer(o).op();
  FieldOp out = phi * FieldOp(t.matrix(), 0, t.support()) * phi.adjoint();
  std::set<RegionId> support = t.support();
  support.insert(o);
  return FieldOp(out.matrix(), 0, std::move(support));
}

double intertwining_residual(const SectorTransporter& z, const EdgeStep& s, const FieldOp& t) {
  const SectorContext& ctx = z.context();
  const Matrix zm = z.entry_op(s).matrix();
  const Matrix lhs = charge_morphism(ctx, s.to, t).matrix() * zm;
  const Matrix rhs = zm * charge_morphism(ctx, s.from, t).matrix();
  const Matrix& b = ctx.window().basis;
  return max_norm(b.adjoint() * (lhs - rhs) * b);
}

double localization_residual(const SectorContext& ctx, RegionId o, const FieldOp& t_prime) {
  for (RegionId e : t_prime.support()) {
    if (!ctx.cover().causally_disjoint(o, e)) {
      throw SupportError("localization_residual: operator is not supported away from the charge region");
    }
  }
  const Implementer& phi = ctx.implementer(o);
  const WindowSubspace& w = ctx.window();
  std::vector<Vector> cols;
  for (Eigen::Index j = 0; j < w.dimension(); ++j) {
    Vector v = phi.apply(w.basis.col(j));
    if (v.norm() > 0.5) cols.push_back(v / v.norm());
  }
  Matrix c(ctx.fock().dimension(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) c.col(static_cast<Eigen::Index>(j)) = cols[j];
  const Matrix diff = charge_morphism(ctx, o, t_prime).matrix() - t_prime.matrix();
  return max_norm(c.adjoint() * diff * c);
}

double transport_charge_residual(const SectorTransporter& z, const PosetPath& p, const FieldOp& t) {
  const SectorContext& ctx = z.context();
  if (!ctx.cover().causally_disjoint(p.start(), p.end())) {
    throw SupportError("transport_charge_residual: path endpoints must be causally disjoint");
  }
  const Matrix zp = z.path_op(p).matrix();
  const Matrix lhs = zp * t.matrix() * zp.adjoint();
  const Matrix rhs = charge_morphism(ctx, p.end(), t).matrix();
  const Matrix& b = ctx.window().basis;
  return max_norm(b.adjoint() * (lhs - rhs) * b);
}

ImplementerRelations implementer_relations(const SectorContext& ctx, RegionId o, RegionId e, const FieldOp& t) {
  if (!ctx.cover().causally_disjoint(o, e)) throw SupportError("implementer_relations: regions are not disjoint");
  if (parity_of(ctx.fock(), t.matrix()) != Parity::Even) throw GradeError("implementer_relations: T must be even");
  const Matrix po = ctx.implementer(o).op().matrix();
  const Matrix pe = ctx.implementer(e).op().matrix();
  ImplementerRelations r;
  r.sign = (ctx.charge() % 2 == 0) ? 1.0 : -1.0;
  r.adjoint_pair = max_norm(po.adjoint() * pe - r.sign * pe * po.adjoint());
  r.pair = max_norm(po * pe - r.sign * pe * po);
  r.even = max_norm(po * t.matrix() - t.matrix() * po);
  return r;
}

// ---------------------------------------------------------------- classification

Classification classify(const SectorTransporter& z, const Pi1Presentation& pres, double tol) {
  const NerveGraph& nerve = z.context().nerve();
  Classification out;
  for (std::size_t i = 0; i < pres.generators.size(); ++i) {
    const PosetPath loop = edge_loop(nerve, pres.generator_edges[i]);
    const TopologicalComponent c = topological_component(z, loop, tol);
    out.max_residual = std::max(out.max_residual, c.residual);
    if (!c.value.is_identity(tol)) out.dhr = false;
    out.components.emplace(pres.generators[i], c.value);
  }
  return out;
}

TrivializeResult sector_equivalence(const SectorTransporter& z, const SectorTransporter& w, double tol) {
  const SectorContext& ctx = z.context();
  if (&ctx != &w.context()) throw SectorError("sector_equivalence: transporters live on different contexts");
  const NerveGraph& nerve = ctx.nerve();
  std::vector<GroupValue> ratio;
  for (const auto& e : nerve.edges) {
    const PosetPath step(e.lo, {EdgeStep{e.hi, e.lo, e.component}});
    const Eigen::Index i = ctx.window().column(e.hi);
    const Eigen::Index j = ctx.window().column(e.lo);
    const Complex cz = z.window_compression(step)(i, j);
    const Complex cw = w.window_compression(step)(i, j);
    ratio.push_back(GroupValue::phase(std::arg(cw / cz)));
  }
  return trivialize(TransitionCocycle(nerve, std::move(ratio)), nerve, tol);
}

// ---------------------------------------------------------------- rho layer

RhoLayerTransporter::RhoLayerTransporter(const NerveGraph& nerve, const SigmaMorphism& rho_sigma)
    : nerve_(nerve), cocycle_(transition_cocycle(rho_sigma, nerve)) {
  if (rho_sigma.target().kind != GroupKind::MatrixUn) throw VariantMismatch("rho layer needs a U(n) morphism");
  const auto violations = validate_sigma(pi1_presentation(nerve), rho_sigma);
  if (!violations.empty()) {
    throw InconsistentCocycle("rho layer: morphism violates relation " + violations.front().word.to_string() +
                              " (residual " + std::to_string(violations.front().residual) + ")");
  }
}

TelescopedEntry RhoLayerTransporter::entry(const EdgeStep& s) const { return {s.to, s.from, cocycle_.value(s)}; }

GroupValue RhoLayerTransporter::rho_holonomy(const PosetPath& loop) const {
  if (!loop.is_loop()) throw PathError("rho_holonomy: path is not a loop");
  return holonomy(cocycle_, loop);
}

double RhoLayerTransporter::log_crosscheck(const PosetPath& p) const {
  std::vector<LieValue> logs;
  for (const auto& s : p.steps()) logs.push_back(unitary_log(cocycle_.value(s).matrix()));
  const GroupValue poe = path_ordered_exp(logs, cocycle_.group());
  return distance(poe, holonomy(cocycle_, p));
}

CocycleReport RhoLayerTransporter::cocycle_law(double tol) const { return check_cocycle(cocycle_, nerve_.cover, tol); }

Classification RhoLayerTransporter::classify(const Pi1Presentation& pres, double tol) const {
  Classification out;
  out.dimension = dimension();
  for (std::size_t i = 0; i < pres.generators.size(); ++i) {
    const GroupValue h = rho_holonomy(edge_loop(nerve_, pres.generator_edges[i]));
    if (!h.is_identity(tol)) out.dhr = false;
    out.components.emplace(pres.generators[i], h);
  }
  return out;
}

}  // namespace holonet
