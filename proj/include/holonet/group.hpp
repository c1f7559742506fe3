#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "holonet/error.hpp"

namespace holonet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Two group values are equal when their distance is at most this.
inline constexpr double kGroupTolerance = 1e-10;
/// Construction tolerance for ‖U†U − I‖_max.
inline constexpr double kUnitarityTolerance = 1e-10;
/// Construction tolerance for ‖X + X†‖_max of Lie algebra matrices.
inline constexpr double kAntiHermitianTolerance = 1e-12;

/// Canonical representative of an angle in (−π, π].
double canonical_angle(double theta);

/// Distance between two angles on the circle, in [0, π].
double angular_distance(double a, double b);

double max_norm(const Matrix& m);

struct Letter {
  std::string symbol;
  int exponent = 1;  // ±1

  bool operator==(const Letter&) const = default;
};

/// A freely reduced word over abstract generator symbols.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  static Word generator(std::string symbol, int exponent = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word inverse() const;
  Word power(int k) const;

  /// Cyclically reduced form (conjugate of this word).
  Word cyclically_reduced() const;

  /// Number of occurrences of a symbol, either exponent.
  int occurrences(const std::string& symbol) const;
  int exponent_sum(const std::string& symbol) const;

  /// "1" for the empty word, otherwise e.g. "a b^-1".
  std::string to_string() const;

  friend Word operator*(const Word& a, const Word& b);
  bool operator==(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

enum class GroupKind { PhaseU1, MatrixUn, FreeWord, CyclicZn };

std::string to_string(GroupKind kind);

/// Which concrete group a value lives in.
struct GroupDescriptor {
  GroupKind kind = GroupKind::PhaseU1;
  int dimension = 1;  // MatrixUn only
  long modulus = 1;   // CyclicZn only

  static GroupDescriptor u1() { return {}; }
  static GroupDescriptor un(int n) { return {GroupKind::MatrixUn, n, 1}; }

  bool operator==(const GroupDescriptor&) const = default;
};

class GroupValue {
 public:
  /// U(1) element e^{iθ}; the angle is canonicalized.
  static GroupValue phase(double theta);
  /// U(n) element; throws NotUnitary beyond kUnitarityTolerance.
  static GroupValue matrix(Matrix m);
  static GroupValue word(Word w);
  static GroupValue cyclic(long residue, long modulus);
  static GroupValue identity(const GroupDescriptor& g);

  GroupKind kind() const;
  GroupDescriptor descriptor() const;

  double angle() const;
  const Matrix& matrix() const;
  const Word& word() const;
  long residue() const;
  long modulus() const;

  /// e^{iθ} for phases, the matrix for U(n); throws for the discrete variants.
  Complex to_complex() const;
  Matrix to_matrix() const;

  bool is_identity(double tol = kGroupTolerance) const;

 private:
  struct Cyclic {
    long residue;
    long modulus;
  };
  GroupValue() = default;
  std::variant<double, Matrix, Word, Cyclic> payload_;
};

GroupValue compose(const GroupValue& a, const GroupValue& b);
GroupValue inverse(const GroupValue& a);

/// Angular distance for phases, max-norm for matrices; 0 or +inf for the
/// discrete variants. Throws VariantMismatch across variants.
double distance(const GroupValue& a, const GroupValue& b);
bool approx_equal(const GroupValue& a, const GroupValue& b, double tol = kGroupTolerance);

enum class LieKind { ScalarU1, MatrixUn };

class LieValue {
 public:
  static LieValue scalar(double theta);
  /// Throws NotUnitary (anti-Hermitian check) beyond kAntiHermitianTolerance.
  static LieValue matrix(Matrix x);

  LieKind kind() const;
  double scalar_value() const;
  const Matrix& matrix_value() const;

 private:
  LieValue() = default;
  std::variant<double, Matrix> payload_;
};

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
Matrix expm(const Matrix& x);

/// Principal logarithm of a unitary, returned as an anti-Hermitian matrix.
LieValue unitary_log(const Matrix& u);

/// exp(X_n)···exp(X_1): later steps multiply on the left. An empty list
/// yields the identity of `empty_group`.
GroupValue path_ordered_exp(std::span<const LieValue> steps,
                            const GroupDescriptor& empty_group = GroupDescriptor::u1());

}  // namespace holonet
