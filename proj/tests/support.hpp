// Shared fixtures, hand-rolled generators and independent oracles for tests.
#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "holonet/cocycle.hpp"
#include "holonet/cover.hpp"
#include "holonet/group.hpp"
#include "holonet/nerve.hpp"
#include "holonet/path.hpp"

namespace testing_support {

using namespace holonet;

inline constexpr double kPi = std::numbers::pi;

inline std::vector<BuiltinSpec> builtin_specs() {
  return {parse_builtin("circle", 5), parse_builtin("annulus"), parse_builtin("disk"), parse_builtin("figure_eight"),
          parse_builtin("torus")};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Haar-ish SU(2) element from a unit quaternion (a, b, c, d):
/// [[a + ib, c + id], [−c + id, a − ib]].
inline Matrix random_su2(std::mt19937_64& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& x : q) {
      x = gaussian(rng);
      n += x * x;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  Matrix m(2, 2);
  m << Complex(q[0], q[1]) / n, Complex(q[2], q[3]) / n, Complex(-q[2], q[3]) / n, Complex(q[0], -q[1]) / n;
  return m;
}

/// exp(−i θ/2 axis·Pauli), written out in closed form.
inline Matrix su2_axis_angle(double ax, double ay, double az, double theta) {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  ax /= n;
  ay /= n;
  az /= n;
  const Complex i(0.0, 1.0);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix m(2, 2);
  m << c - i * s * az, -i * s * (ax - i * ay), -i * s * (ax + i * ay), c + i * s * az;
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, int n) {
  Vector v(n);
  for (int j = 0; j < n; ++j) v(j) = Complex(gaussian(rng), gaussian(rng));
  return v;
}

/// σ on the free generators of `pres`. SU(2) values share one axis when the
/// presentation is free abelian, so commutator relations hold.
inline SigmaMorphism random_sigma(const Pi1Presentation& pres, const GroupDescriptor& g, std::mt19937_64& rng) {
  std::map<std::string, GroupValue> values;
  const double ax = gaussian(rng);
  const double ay = gaussian(rng);
  const double az = gaussian(rng);
  for (const auto& gen : pres.free_generators) {
    if (g.kind == GroupKind::PhaseU1) {
      values.emplace(gen, GroupValue::phase(uniform(rng, -kPi, kPi)));
    } else if (pres.normal_form == NormalForm::FreeAbelian) {
      values.emplace(gen, GroupValue::matrix(su2_axis_angle(ax, ay, az, uniform(rng, -2 * kPi, 2 * kPi))));
    } else {
      values.emplace(gen, GroupValue::matrix(random_su2(rng)));
    }
  }
  return SigmaMorphism(pres, g, std::move(values));
}

/// Independent oracle for the path-ordered exponential of piecewise-constant
/// steps: each step split into n substeps of second-order Taylor updates.
inline Matrix poe_subdivision(const std::vector<Matrix>& steps, int n) {
  const Eigen::Index d = steps.empty() ? 1 : steps.front().rows();
  Matrix acc = Matrix::Identity(d, d);
  for (const auto& x : steps) {
    const Matrix h = x / static_cast<double>(n);
    const Matrix u = Matrix::Identity(d, d) + h + 0.5 * h * h;
    for (int k = 0; k < n; ++k) acc = u * acc;
  }
  return acc;
}

/// Random anti-Hermitian 2x2 matrix with entries of size ~scale.
inline Matrix random_anti_hermitian(std::mt19937_64& rng, int n, double scale) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gaussian(rng), gaussian(rng)) * scale;
  }
  return 0.5 * (a - a.adjoint());
}

/// Dense Jordan-Wigner creator built from Kronecker products, independent of
/// the library: c_j† = Z ⊗ ... ⊗ Z ⊗ σ⁺ ⊗ I ⊗ ... with mode 0 the least
/// significant bit (rightmost factor).
inline Matrix kron_creator(int modes, int j) {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  Matrix plus(2, 2);
  plus << 0, 0, 1, 0;
  const Matrix id = Matrix::Identity(2, 2);
  Matrix acc = Matrix::Identity(1, 1);
  for (int k = modes - 1; k >= 0; --k) {
    const Matrix& f = k > j ? id : (k == j ? plus : z);
    Matrix next(acc.rows() * 2, acc.cols() * 2);
    for (Eigen::Index a = 0; a < acc.rows(); ++a) {
      for (Eigen::Index b = 0; b < acc.cols(); ++b) next.block(a * 2, b * 2, 2, 2) = acc(a, b) * f;
    }
    acc = next;
  }
  return acc;
}

/// Product of σ over the letters of a word, evaluated directly.
inline GroupValue evaluate_word(const std::map<std::string, GroupValue>& sigma, const Word& w,
                                const GroupDescriptor& g) {
  GroupValue acc = GroupValue::identity(g);
  for (const auto& l : w.letters()) {
    const GroupValue& v = sigma.at(l.symbol);
    acc = compose(acc, l.exponent > 0 ? v : inverse(v));
  }
  return acc;
}

/// Visited-region sequence winding k times around a ring of regions.
inline std::vector<RegionId> winding_sequence(const std::vector<RegionId>& ring, int k) {
  std::vector<RegionId> out{ring.front()};
  const int n = static_cast<int>(ring.size());
  for (int t = 0; t < std::abs(k) * n; ++t) {
    const int idx = k >= 0 ? (t + 1) % n : (n - 1 - (t % n)) % n;
    out.push_back(ring[static_cast<std::size_t>(idx)]);
  }
  return out;
}

}  // namespace testing_support
