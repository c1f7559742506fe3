#include "holonet/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace holonet {

namespace {

Parity combine(Parity a, Parity b) {
  if (a == Parity::Mixed || b == Parity::Mixed) return Parity::Mixed;
  return a == b ? Parity::Even : Parity::Odd;
}

Parity parity_from_grade(int k) { return (k % 2 == 0) ? Parity::Even : Parity::Odd; }

std::set<RegionId> merged(const std::set<RegionId>& a, const std::set<RegionId>& b) {
  std::set<RegionId> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- OneParticleSpace

OneParticleSpace OneParticleSpace::build(const Cover& cover, int modes_per_region, int shared_per_overlap) {
  std::vector<RegionId> all(static_cast<std::size_t>(cover.region_count()));
  for (RegionId r = 0; r < cover.region_count(); ++r) all[static_cast<std::size_t>(r)] = r;
  return build(cover, modes_per_region, shared_per_overlap, all);
}

OneParticleSpace OneParticleSpace::build(const Cover& cover, int modes_per_region, int shared_per_overlap,
                                         std::span<const RegionId> regions) {
  if (modes_per_region < 1) throw Error("every region needs at least one private mode");
  if (shared_per_overlap < 0) throw Error("shared mode count must be non-negative");
  std::vector<RegionId> rs(regions.begin(), regions.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  OneParticleSpace space;
  for (RegionId r : rs) {
    for (int k = 0; k < modes_per_region; ++k) {
      space.modes_.push_back({cover.name(r) + "." + std::to_string(k), {r}, -1});
    }
  }
  if (shared_per_overlap > 0) {
    std::vector<Overlap> overlaps = cover.overlaps;
    for (auto& o : overlaps) {
      if (o.first > o.second) std::swap(o.first, o.second);
    }
    std::sort(overlaps.begin(), overlaps.end(), [](const Overlap& x, const Overlap& y) {
      return std::tuple{x.first, x.second, x.component} < std::tuple{y.first, y.second, y.component};
    });
    for (const auto& o : overlaps) {
      if (!std::binary_search(rs.begin(), rs.end(), o.first) || !std::binary_search(rs.begin(), rs.end(), o.second)) {
        continue;
      }
      for (int k = 0; k < shared_per_overlap; ++k) {
        space.modes_.push_back({cover.name(o.first) + "&" + cover.name(o.second) + "#" + std::to_string(o.component) +
                                    "." + std::to_string(k),
                                {o.first, o.second},
                                o.component});
      }
    }
  }
  return space;
}

std::vector<int> OneParticleSpace::private_modes(RegionId r) const {
  std::vector<int> out;
  for (int j = 0; j < dimension(); ++j) {
    const auto& m = modes_[static_cast<std::size_t>(j)];
    if (m.support.size() == 1 && m.support.front() == r) out.push_back(j);
  }
  return out;
}

std::vector<int> OneParticleSpace::shared_modes(RegionId a, RegionId b) const {
  std::vector<int> out;
  for (int j = 0; j < dimension(); ++j) {
    const auto& s = modes_[static_cast<std::size_t>(j)].support;
    if (s.size() == 2 && ((s[0] == a && s[1] == b) || (s[0] == b && s[1] == a))) out.push_back(j);
  }
  return out;
}

std::vector<int> OneParticleSpace::modes_in(RegionId r) const {
  std::vector<int> out;
  for (int j = 0; j < dimension(); ++j) {
    const auto& s = modes_[static_cast<std::size_t>(j)].support;
    if (std::find(s.begin(), s.end(), r) != s.end()) out.push_back(j);
  }
  return out;
}

Vector OneParticleSpace::basis_vector(int mode) const {
  Vector v = Vector::Zero(dimension());
  v(mode) = 1.0;
  return v;
}

Complex OneParticleSpace::inner(const Vector& f, const Vector& g) const {
  if (f.size() != dimension() || g.size() != dimension()) throw Error("one-particle vector has wrong dimension");
  return f.dot(g);  // Eigen's dot conjugates the left operand
}

std::set<RegionId> OneParticleSpace::support_of(const Vector& f, double tol) const {
  if (f.size() != dimension()) throw Error("one-particle vector has wrong dimension");
  std::set<RegionId> out;
  for (int j = 0; j < dimension(); ++j) {
    if (std::abs(f(j)) > tol) {
      const auto& s = modes_[static_cast<std::size_t>(j)].support;
      out.insert(s.begin(), s.end());
    }
  }
  return out;
}

bool OneParticleSpace::supported_in(const Vector& f, RegionId r, double tol) const {
  if (f.size() != dimension()) throw Error("one-particle vector has wrong dimension");
  for (int j = 0; j < dimension(); ++j) {
    if (std::abs(f(j)) <= tol) continue;
    const auto& s = modes_[static_cast<std::size_t>(j)].support;
    if (std::find(s.begin(), s.end(), r) == s.end()) return false;
  }
  return true;
}

// ---------------------------------------------------------------- FieldOp

std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
  }
  return "?";
}

FieldOp::FieldOp(Matrix m, std::optional<int> grade, Parity parity, std::set<RegionId> support)
    : matrix_(std::move(m)), grade_(grade), parity_(parity), support_(std::move(support)) {
  if (grade_ && parity_ != parity_from_grade(*grade_)) throw GradeError("parity inconsistent with charge grade");
}

FieldOp::FieldOp(Matrix m, int grade, std::set<RegionId> support)
    : FieldOp(std::move(m), grade, parity_from_grade(grade), std::move(support)) {}

FieldOp FieldOp::adjoint() const {
  return FieldOp(matrix_.adjoint(), grade_ ? std::optional<int>(-*grade_) : std::nullopt, parity_, support_);
}

FieldOp FieldOp::scaled(Complex c) const { return FieldOp(matrix_ * c, grade_, parity_, support_); }

FieldOp operator*(const FieldOp& a, const FieldOp& b) {
  std::optional<int> g;
  if (a.grade_ && b.grade_) g = *a.grade_ + *b.grade_;
  return FieldOp(a.matrix_ * b.matrix_, g, combine(a.parity_, b.parity_), merged(a.support_, b.support_));
}

FieldOp operator+(const FieldOp& a, const FieldOp& b) {
  const std::optional<int> g = (a.grade_ && b.grade_ && *a.grade_ == *b.grade_) ? a.grade_ : std::nullopt;
  const Parity p = a.parity_ == b.parity_ ? a.parity_ : Parity::Mixed;
  return FieldOp(a.matrix_ + b.matrix_, g, p, merged(a.support_, b.support_));
}

FieldOp operator-(const FieldOp& a, const FieldOp& b) { return a + b.scaled(-1.0); }

// ---------------------------------------------------------------- FockSpace

FockSpace::FockSpace(int modes) : modes_(modes) {
  if (modes < 0) throw Error("negative mode count");
  if (modes > kMaxModes) {
    throw CapacityError("Fock space with " + std::to_string(modes) + " modes exceeds the dense capacity of " +
                        std::to_string(kMaxModes) + " modes");
  }
}

Vector FockSpace::vacuum() const {
  Vector v = Vector::Zero(dimension());
  v(0) = 1.0;
  return v;
}

int FockSpace::particle_number(Eigen::Index s) { return std::popcount(static_cast<unsigned long>(s)); }

Eigen::VectorXd FockSpace::number_diagonal() const {
  Eigen::VectorXd d(dimension());
  for (Eigen::Index s = 0; s < dimension(); ++s) d(s) = particle_number(s);
  return d;
}

Matrix FockSpace::number_operator() const { return number_diagonal().cast<Complex>().asDiagonal(); }

double FockSpace::jw_sign(Eigen::Index s, int mode) {
  const auto below = static_cast<unsigned long>(s) & ((1UL << mode) - 1UL);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

Vector FockSpace::apply_creator(int mode, const Vector& v) const {
  const Eigen::Index bit = Eigen::Index{1} << mode;
  Vector out = Vector::Zero(dimension());
  for (Eigen::Index s = 0; s < dimension(); ++s) {
    if (!(s & bit) && v(s) != Complex(0.0)) out(s | bit) += jw_sign(s, mode) * v(s);
  }
  return out;
}

Vector FockSpace::apply_annihilator(int mode, const Vector& v) const {
  const Eigen::Index bit = Eigen::Index{1} << mode;
  Vector out = Vector::Zero(dimension());
  for (Eigen::Index s = 0; s < dimension(); ++s) {
    if ((s & bit) && v(s) != Complex(0.0)) out(s & ~bit) += jw_sign(s, mode) * v(s);
  }
  return out;
}

FieldOp FockSpace::creator(int mode, std::set<RegionId> support) const {
  if (mode < 0 || mode >= modes_) throw Error("mode index out of range");
  const Eigen::Index bit = Eigen::Index{1} << mode;
  Matrix m = Matrix::Zero(dimension(), dimension());
  for (Eigen::Index s = 0; s < dimension(); ++s) {
    if (!(s & bit)) m(s | bit, s) = jw_sign(s, mode);
  }
  return FieldOp(std::move(m), 1, std::move(support));
}

FieldOp FockSpace::annihilator(int mode, std::set<RegionId> support) const {
  return creator(mode, std::move(support)).adjoint();
}

Matrix FockSpace::gauge_unitary(Complex zeta) const {
  Vector d(dimension());
  for (Eigen::Index s = 0; s < dimension(); ++s) d(s) = std::pow(zeta, particle_number(s));
  return d.asDiagonal();
}

// ---------------------------------------------------------------- operations

FieldOp field(const FockSpace& fock, const OneParticleSpace& space, const Vector& f) {
  if (f.size() != fock.modes() || space.dimension() != fock.modes()) {
    throw Error("field: one-particle vector dimension does not match the Fock space");
  }
  const Eigen::Index n = fock.dimension();
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < fock.modes(); ++j) {
    if (f(j) == Complex(0.0)) continue;
    const Eigen::Index bit = Eigen::Index{1} << j;
    for (Eigen::Index s = 0; s < n; ++s) {
      if (!(s & bit)) m(s | bit, s) += FockSpace::jw_sign(s, j) * f(j);
    }
  }
  return FieldOp(std::move(m), 1, space.support_of(f));
}

FieldOp gauge_action(const FockSpace& fock, Complex zeta, const FieldOp& t) {
  const Eigen::VectorXd n = fock.number_diagonal();
  Matrix m = t.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(0.0)) m(i, j) *= std::pow(zeta, static_cast<int>(n(i) - n(j)));
    }
  }
  return FieldOp(std::move(m), t.grade(), t.parity(), t.support());
}

std::optional<int> grading(const FockSpace& fock, const Matrix& t) {
  const double scale = std::max(1.0, max_norm(t));
  if (max_norm(t) == 0.0) return 0;
  const int k = fock.modes();
  const double step = 2.0 * std::numbers::pi / (2.0 * k + 1.0);
  const Complex z1 = std::polar(1.0, step);
  const Complex z2 = std::polar(1.0, std::numbers::sqrt2);
  const FieldOp probe(t, std::nullopt, Parity::Mixed, {});

  Eigen::Index bi = 0;
  Eigen::Index bj = 0;
  t.cwiseAbs().maxCoeff(&bi, &bj);
  const Matrix a1 = gauge_action(fock, z1, probe).matrix();
  const int kappa = static_cast<int>(std::lround(std::arg(a1(bi, bj) / t(bi, bj)) / step));
  for (const Complex z : {z1, z2}) {
    const Matrix a = gauge_action(fock, z, probe).matrix();
    if (max_norm(a - std::pow(z, kappa) * t) > 1e-12 * scale) return std::nullopt;
  }
  return kappa;
}

Parity parity_of(const FockSpace& fock, const Matrix& t) {
  const double scale = std::max(1.0, max_norm(t));
  const Matrix d = gauge_action(fock, -1.0, FieldOp(t, std::nullopt, Parity::Mixed, {})).matrix();
  if (max_norm(d - t) <= 1e-12 * scale) return Parity::Even;
  if (max_norm(d + t) <= 1e-12 * scale) return Parity::Odd;
  return Parity::Mixed;
}

double normal_commutation_check(const Cover& cover, const FieldOp& t, const FieldOp& s) {
  for (RegionId a : t.support()) {
    for (RegionId b : s.support()) {
      if (!cover.causally_disjoint(a, b)) {
        throw SupportError("normal_commutation_check: supports '" + cover.name(a) + "' and '" + cover.name(b) +
                           "' are not causally disjoint");
      }
    }
  }
  if (t.parity() == Parity::Mixed || s.parity() == Parity::Mixed) {
    throw GradeError("normal_commutation_check: operands need definite parity");
  }
  const Matrix ts = t.matrix() * s.matrix();
  const Matrix st = s.matrix() * t.matrix();
  const bool both_odd = t.parity() == Parity::Odd && s.parity() == Parity::Odd;
  return max_norm(both_odd ? Matrix(ts + st) : Matrix(ts - st));
}

FieldOp twisted_local_field(const FockSpace& fock, const OneParticleSpace& space, const FlatPotentialU1& pot,
                            RegionId o, const Vector& f) {
  if (!pot.primitives) throw Error("twisted_local_field: potential has no local primitives");
  if (!space.supported_in(f, o)) throw SupportError("twisted_local_field: f is not supported in the region");
  const double phi = pot.primitives->at(static_cast<std::size_t>(o));
  return field(fock, space, f).scaled(std::polar(1.0, -phi));
}

GluedField glue_psi_A(const FockSpace& fock, const OneParticleSpace& space, const FlatPotentialU1& pot,
                      const std::map<RegionId, Vector>& section) {
  if (section.empty()) throw Error("glue_psi_A: empty section");
  if (!pot.primitives) throw Error("glue_psi_A: potential has no local primitives");

  double section_residual = 0.0;
  for (auto it = section.begin(); it != section.end(); ++it) {
    if (!space.supported_in(it->second, it->first)) {
      throw SupportError("glue_psi_A: section entry is not supported in its chart region");
    }
    for (auto jt = std::next(it); jt != section.end(); ++jt) {
      const RegionId o = it->first;
      const RegionId a = jt->first;
      // The overlap component is read off the modes carrying the section.
      std::set<int> comps;
      for (int j = 0; j < space.dimension(); ++j) {
        if (std::abs(it->second(j)) > 0.0 || std::abs(jt->second(j)) > 0.0) {
          comps.insert(space.modes()[static_cast<std::size_t>(j)].component);
        }
      }
      if (comps.size() != 1 || *comps.begin() < 0) {
        throw SupportError("glue_psi_A: section must live in a single overlap component");
      }
      const double ahat = pot.angle(o, a, *comps.begin());
      section_residual =
          std::max(section_residual, (it->second - std::polar(1.0, ahat) * jt->second).cwiseAbs().maxCoeff());
    }
  }
  if (section_residual > 1e-10) {
    throw SupportError("glue_psi_A: section is inconsistent across chart transitions (residual " +
                       std::to_string(section_residual) + ")");
  }

  std::optional<FieldOp> first;
  double chart_residual = 0.0;
  for (const auto& [o, v] : section) {
    const double phi = pot.primitives->at(static_cast<std::size_t>(o));
    FieldOp op = field(fock, space, Vector(std::polar(1.0, -phi) * v));
    if (!first) {
      first = std::move(op);
    } else {
      chart_residual = std::max(chart_residual, max_norm(op.matrix() - first->matrix()));
    }
  }
  return GluedField{std::move(*first), chart_residual, section_residual};
}

FieldOp twisted_product(const FockSpace& fock, const FieldOp& t, const FieldOp& s, const GroupValue& g) {
  if (!t.grade()) throw GradeError("twisted_product: left factor has mixed grade");
  if (g.kind() != GroupKind::PhaseU1) throw VariantMismatch("twisted_product: twist must be a U(1) value");
  return gauge_action(fock, g.to_complex(), t) * s;
}

int commutant_dimension(std::span<const Matrix> generators) {
  if (generators.empty()) throw Error("commutant_dimension: no generators");
  const Eigen::Index n = generators.front().rows();
  if (n > 64) throw CapacityError("commutant_dimension: operator dimension too large");
  // vec(AX − XA) = (I⊗A − Aᵀ⊗I) vec(X), column-major.
  const Matrix id = Matrix::Identity(n, n);
  Matrix system(static_cast<Eigen::Index>(generators.size()) * n * n, n * n);
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Matrix& a = generators[g];
    Matrix block = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        block.block(i * n, j * n, n, n) += id(i, j) * a;
        block.block(i * n, j * n, n, n) -= a(j, i) * id;
      }
    }
    system.block(static_cast<Eigen::Index>(g) * n * n, 0, n * n, n * n) = block;
  }
  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.dimensionOfKernel());
}

}  // namespace holonet
