#include "holonet/group.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace holonet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void mismatch(const char* what, GroupKind a, GroupKind b) {
  throw VariantMismatch(std::string(what) + ": " + to_string(a) + " vs " + to_string(b));
}

void append_reduced(std::vector<Letter>& out, const Letter& l) {
  if (!out.empty() && out.back().symbol == l.symbol && out.back().exponent == -l.exponent) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

double canonical_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double angular_distance(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- Word

Word::Word(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (const auto& l : letters) {
    if (l.exponent != 1 && l.exponent != -1) {
      throw Error("word letters must have exponent ±1");
    }
    append_reduced(letters_, l);
  }
}

Word Word::generator(std::string symbol, int exponent) {
  return Word({Letter{std::move(symbol), exponent}});
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(Letter{it->symbol, -it->exponent});
  }
  return w;
}

Word Word::power(int k) const {
  Word base = k < 0 ? inverse() : *this;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out = out * base;
  return out;
}

Word Word::cyclically_reduced() const {
  std::size_t lo = 0;
  std::size_t hi = letters_.size();
  while (hi - lo >= 2 && letters_[lo].symbol == letters_[hi - 1].symbol &&
         letters_[lo].exponent == -letters_[hi - 1].exponent) {
    ++lo;
    --hi;
  }
  Word w;
  w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(lo),
                    letters_.begin() + static_cast<std::ptrdiff_t>(hi));
  return w;
}

int Word::occurrences(const std::string& symbol) const {
  int n = 0;
  for (const auto& l : letters_) n += (l.symbol == symbol);
  return n;
}

int Word::exponent_sum(const std::string& symbol) const {
  int n = 0;
  for (const auto& l : letters_) {
    if (l.symbol == symbol) n += l.exponent;
  }
  return n;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ' ';
    s += letters_[i].symbol;
    if (letters_[i].exponent < 0) s += "^-1";
  }
  return s;
}

Word operator*(const Word& a, const Word& b) {
  Word w;
  w.letters_ = a.letters_;
  for (const auto& l : b.letters_) append_reduced(w.letters_, l);
  return w;
}

// ---------------------------------------------------------------- GroupValue

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::PhaseU1: return "U1";
    case GroupKind::MatrixUn: return "Un";
    case GroupKind::FreeWord: return "FreeWord";
    case GroupKind::CyclicZn: return "Zn";
  }
  return "?";
}

GroupValue GroupValue::phase(double theta) {
  if (!std::isfinite(theta)) throw Error("phase angle must be finite");
  GroupValue v;
  v.payload_ = canonical_angle(theta);
  return v;
}

GroupValue GroupValue::matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw NotUnitary("U(n) value must be a nonempty square matrix");
  const Matrix defect = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  if (!m.allFinite() || max_norm(defect) > kUnitarityTolerance) {
    std::ostringstream os;
    os << "matrix is not unitary: max|U*U - I| = " << max_norm(defect);
    throw NotUnitary(os.str());
  }
  GroupValue v;
  v.payload_ = std::move(m);
  return v;
}

GroupValue GroupValue::word(Word w) {
  GroupValue v;
  v.payload_ = std::move(w);
  return v;
}

GroupValue GroupValue::cyclic(long residue, long modulus) {
  if (modulus < 1) throw Error("cyclic modulus must be positive");
  GroupValue v;
  long r = residue % modulus;
  if (r < 0) r += modulus;
  v.payload_ = Cyclic{r, modulus};
  return v;
}

GroupValue GroupValue::identity(const GroupDescriptor& g) {
  switch (g.kind) {
    case GroupKind::PhaseU1: return phase(0.0);
    case GroupKind::MatrixUn: return matrix(Matrix::Identity(g.dimension, g.dimension));
    case GroupKind::FreeWord: return word(Word{});
    case GroupKind::CyclicZn: return cyclic(0, g.modulus);
  }
  throw Error("unknown group kind");
}

GroupKind GroupValue::kind() const { return static_cast<GroupKind>(payload_.index()); }

GroupDescriptor GroupValue::descriptor() const {
  switch (kind()) {
    case GroupKind::MatrixUn: return GroupDescriptor::un(static_cast<int>(matrix().rows()));
    case GroupKind::CyclicZn: return {GroupKind::CyclicZn, 1, modulus()};
    default: return {kind(), 1, 1};
  }
}

double GroupValue::angle() const {
  if (kind() != GroupKind::PhaseU1) throw VariantMismatch("angle() on " + to_string(kind()));
  return std::get<double>(payload_);
}

const Matrix& GroupValue::matrix() const {
  if (kind() != GroupKind::MatrixUn) throw VariantMismatch("matrix() on " + to_string(kind()));
  return std::get<Matrix>(payload_);
}

const Word& GroupValue::word() const {
  if (kind() != GroupKind::FreeWord) throw VariantMismatch("word() on " + to_string(kind()));
  return std::get<Word>(payload_);
}

long GroupValue::residue() const {
  if (kind() != GroupKind::CyclicZn) throw VariantMismatch("residue() on " + to_string(kind()));
  return std::get<Cyclic>(payload_).residue;
}

long GroupValue::modulus() const {
  if (kind() != GroupKind::CyclicZn) throw VariantMismatch("modulus() on " + to_string(kind()));
  return std::get<Cyclic>(payload_).modulus;
}

Complex GroupValue::to_complex() const { return std::polar(1.0, angle()); }

Matrix GroupValue::to_matrix() const {
  if (kind() == GroupKind::PhaseU1) return Matrix::Constant(1, 1, to_complex());
  return matrix();
}

bool GroupValue::is_identity(double tol) const {
  return distance(*this, identity(descriptor())) <= tol;
}

GroupValue compose(const GroupValue& a, const GroupValue& b) {
  if (a.kind() != b.kind()) mismatch("compose", a.kind(), b.kind());
  switch (a.kind()) {
    case GroupKind::PhaseU1: return GroupValue::phase(a.angle() + b.angle());
    case GroupKind::MatrixUn:
      if (a.matrix().rows() != b.matrix().rows()) throw VariantMismatch("compose: U(n) dimension mismatch");
      return GroupValue::matrix(a.matrix() * b.matrix());
    case GroupKind::FreeWord: return GroupValue::word(a.word() * b.word());
    case GroupKind::CyclicZn:
      if (a.modulus() != b.modulus()) throw VariantMismatch("compose: cyclic modulus mismatch");
      return GroupValue::cyclic(a.residue() + b.residue(), a.modulus());
  }
  throw Error("unknown group kind");
}

GroupValue inverse(const GroupValue& a) {
  switch (a.kind()) {
    case GroupKind::PhaseU1: return GroupValue::phase(-a.angle());
    case GroupKind::MatrixUn: return GroupValue::matrix(a.matrix().adjoint());
    case GroupKind::FreeWord: return GroupValue::word(a.word().inverse());
    case GroupKind::CyclicZn: return GroupValue::cyclic(-a.residue(), a.modulus());
  }
  throw Error("unknown group kind");
}

double distance(const GroupValue& a, const GroupValue& b) {
  if (a.kind() != b.kind()) mismatch("distance", a.kind(), b.kind());
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (a.kind()) {
    case GroupKind::PhaseU1: return angular_distance(a.angle(), b.angle());
    case GroupKind::MatrixUn:
      if (a.matrix().rows() != b.matrix().rows()) throw VariantMismatch("distance: U(n) dimension mismatch");
      return max_norm(a.matrix() - b.matrix());
    case GroupKind::FreeWord: return a.word() == b.word() ? 0.0 : inf;
    case GroupKind::CyclicZn:
      return (a.modulus() == b.modulus() && a.residue() == b.residue()) ? 0.0 : inf;
  }
  return inf;
}

bool approx_equal(const GroupValue& a, const GroupValue& b, double tol) { return distance(a, b) <= tol; }

// ---------------------------------------------------------------- LieValue

LieValue LieValue::scalar(double theta) {
  LieValue v;
  v.payload_ = theta;
  return v;
}

LieValue LieValue::matrix(Matrix x) {
  if (x.rows() != x.cols() || x.rows() == 0) throw NotUnitary("Lie algebra value must be square");
  if (max_norm(x + x.adjoint()) > kAntiHermitianTolerance) {
    throw NotUnitary("Lie algebra value is not anti-Hermitian");
  }
  LieValue v;
  v.payload_ = std::move(x);
  return v;
}

LieKind LieValue::kind() const { return static_cast<LieKind>(payload_.index()); }

double LieValue::scalar_value() const {
  if (kind() != LieKind::ScalarU1) throw VariantMismatch("scalar_value() on matrix Lie value");
  return std::get<double>(payload_);
}

const Matrix& LieValue::matrix_value() const {
  if (kind() != LieKind::MatrixUn) throw VariantMismatch("matrix_value() on scalar Lie value");
  return std::get<Matrix>(payload_);
}

Matrix expm(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix a = x / std::ldexp(1.0, squarings);

  // ‖a‖₁ ≤ 1/2, so 20 terms leave a remainder below 1/2^20/20! ≈ 4e-25.
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 20; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

LieValue unitary_log(const Matrix& u) {
  // A unitary is normal, so its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Matrix d = Matrix::Zero(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) d(i, i) = Complex(0.0, std::arg(t(i, i)));
  Matrix x = q * d * q.adjoint();
  x = 0.5 * (x - x.adjoint());
  return LieValue::matrix(std::move(x));
}

GroupValue path_ordered_exp(std::span<const LieValue> steps, const GroupDescriptor& empty_group) {
  if (steps.empty()) return GroupValue::identity(empty_group);
  const LieKind kind = steps.front().kind();
  for (const auto& s : steps) {
    if (s.kind() != kind) throw VariantMismatch("path_ordered_exp: mixed Lie value variants");
  }
  if (kind == LieKind::ScalarU1) {
    double total = 0.0;
    for (const auto& s : steps) total += s.scalar_value();
    return GroupValue::phase(total);
  }
  const Eigen::Index n = steps.front().matrix_value().rows();
  Matrix acc = Matrix::Identity(n, n);
  for (const auto& s : steps) {
    if (s.matrix_value().rows() != n) throw VariantMismatch("path_ordered_exp: dimension mismatch");
    acc = expm(s.matrix_value()) * acc;
  }
  return GroupValue::matrix(std::move(acc));
}

}  // namespace holonet
