#include "doctest.h"

#include "support.hpp"

using namespace holonet;
using namespace testing_support;

TEST_CASE("canonical angles land in (-pi, pi]") {
  CHECK(canonical_angle(kPi) == doctest::Approx(kPi));
  CHECK(canonical_angle(-kPi) == doctest::Approx(kPi));
  CHECK(canonical_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(canonical_angle(2 * kPi) == doctest::Approx(0.0));
  CHECK(canonical_angle(-kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(angular_distance(kPi - 1e-3, -kPi + 1e-3) == doctest::Approx(2e-3));
}

TEST_CASE("words are freely reduced") {
  const Word a = Word::generator("a");
  const Word b = Word::generator("b");
  CHECK((a * b * b.inverse() * a.inverse()).empty());
  CHECK((a * b).to_string() == "a b");
  CHECK((a * b).inverse().to_string() == "b^-1 a^-1");
  CHECK(Word().to_string() == "1");
  CHECK(a.power(3).size() == 3);
  CHECK(a.power(-2) == a.inverse() * a.inverse());
  CHECK((b * a * b.inverse()).cyclically_reduced() == a);
  const Word w = a * b * a.inverse() * b;
  CHECK(w.occurrences("a") == 2);
  CHECK(w.exponent_sum("a") == 0);
  CHECK(w.exponent_sum("b") == 2);
}

TEST_CASE("phase arithmetic") {
  const GroupValue x = GroupValue::phase(1.0);
  const GroupValue y = GroupValue::phase(2.5);
  CHECK(compose(x, y).angle() == doctest::Approx(canonical_angle(3.5)));
  CHECK(compose(x, inverse(x)).is_identity());
  CHECK(GroupValue::phase(2 * kPi).is_identity());
  CHECK(distance(GroupValue::phase(kPi), GroupValue::phase(-kPi)) == doctest::Approx(0.0));
  CHECK(std::abs(GroupValue::phase(kPi / 2).to_complex() - Complex(0, 1)) < 1e-15);
}

TEST_CASE("unitary matrices compose and reject non-unitary input") {
  std::mt19937_64 rng(1);
  const Matrix u = random_su2(rng);
  const Matrix v = random_su2(rng);
  const GroupValue gu = GroupValue::matrix(u);
  const GroupValue gv = GroupValue::matrix(v);
  CHECK(max_norm(compose(gu, gv).matrix() - u * v) < 1e-15);
  CHECK(compose(gu, inverse(gu)).is_identity());
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(GroupValue::matrix(bad), NotUnitary);
  CHECK_THROWS_AS(GroupValue::matrix(Matrix(2, 3)), NotUnitary);
}

TEST_CASE("mixing variants is rejected") {
  const GroupValue p = GroupValue::phase(0.3);
  const GroupValue m = GroupValue::identity(GroupDescriptor::un(2));
  CHECK_THROWS_AS(compose(p, m), VariantMismatch);
  CHECK_THROWS_AS(distance(p, m), VariantMismatch);
  CHECK_THROWS_AS(p.matrix(), VariantMismatch);
  CHECK_THROWS_AS(compose(m, GroupValue::identity(GroupDescriptor::un(3))), VariantMismatch);
}

TEST_CASE("discrete variants") {
  const GroupValue a = GroupValue::word(Word::generator("a"));
  CHECK(compose(a, inverse(a)).is_identity());
  CHECK(distance(a, a) == 0.0);
  CHECK(std::isinf(distance(a, inverse(a))));
  const GroupValue c = GroupValue::cyclic(4, 5);
  CHECK(compose(c, c).residue() == 3);
  CHECK(inverse(c).residue() == 1);
  CHECK_THROWS_AS(compose(c, GroupValue::cyclic(1, 4)), VariantMismatch);
}

TEST_CASE("expm matches closed forms") {
  // diag(iα, iβ) exponentiates entrywise
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = Complex(0, 0.7);
  d(1, 1) = Complex(0, -2.1);
  const Matrix e = expm(d);
  CHECK(std::abs(e(0, 0) - std::polar(1.0, 0.7)) < 1e-14);
  CHECK(std::abs(e(1, 1) - std::polar(1.0, -2.1)) < 1e-14);
  CHECK(std::abs(e(0, 1)) < 1e-15);

  // exp(−iθ/2 n·σ) against the Rodrigues form
  const double theta = 2.3;
  Matrix x(2, 2);
  const Complex i(0, 1);
  const double nx = 0.6, ny = 0.0, nz = 0.8;
  x << -i * theta / 2.0 * nz, -i * theta / 2.0 * (nx - i * ny), -i * theta / 2.0 * (nx + i * ny),
      i * theta / 2.0 * nz;
  CHECK(max_norm(expm(x) - su2_axis_angle(nx, ny, nz, theta)) < 1e-13);

  // large norm exercises the squaring phase
  CHECK(max_norm(expm(10.0 * x) - su2_axis_angle(nx, ny, nz, 10.0 * theta)) < 1e-11);
}

TEST_CASE("unitary_log inverts expm") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    const Matrix x = random_anti_hermitian(rng, n, 0.8);
    const Matrix u = expm(x);
    const LieValue l = unitary_log(u);
    CHECK(max_norm(l.matrix_value() + l.matrix_value().adjoint()) < 1e-12);
    CHECK(max_norm(expm(l.matrix_value()) - u) < 1e-12);
  }
  CHECK_THROWS_AS(LieValue::matrix(Matrix::Identity(2, 2)), NotUnitary);
}

TEST_CASE("path-ordered exponential orders later steps to the left") {
  std::mt19937_64 rng(3);
  const Matrix x1 = random_anti_hermitian(rng, 2, 1.0);
  const Matrix x2 = random_anti_hermitian(rng, 2, 1.0);
  const std::vector<LieValue> steps{LieValue::matrix(x1), LieValue::matrix(x2)};
  const GroupValue g = path_ordered_exp(steps);
  CHECK(max_norm(g.matrix() - expm(x2) * expm(x1)) < 1e-13);
  CHECK(max_norm(g.matrix() - expm(x1) * expm(x2)) > 1e-3);

  const std::vector<LieValue> scalars{LieValue::scalar(0.5), LieValue::scalar(-1.25), LieValue::scalar(3.0)};
  CHECK(path_ordered_exp(scalars).angle() == doctest::Approx(canonical_angle(2.25)));
  CHECK(path_ordered_exp({}).is_identity());
  CHECK(path_ordered_exp({}, GroupDescriptor::un(3)).matrix().rows() == 3);

  const std::vector<LieValue> mixed{LieValue::scalar(0.5), LieValue::matrix(x1)};
  CHECK_THROWS_AS(path_ordered_exp(mixed), VariantMismatch);
}

TEST_CASE("subdivision oracle converges to the path-ordered exponential") {
  std::mt19937_64 rng(11);
  std::vector<Matrix> xs;
  std::vector<LieValue> steps;
  for (int k = 0; k < 4; ++k) {
    xs.push_back(random_anti_hermitian(rng, 2, 0.7));
    steps.push_back(LieValue::matrix(xs.back()));
  }
  const Matrix exact = path_ordered_exp(steps).matrix();
  const double e3 = max_norm(poe_subdivision(xs, 1000) - exact);
  const double e4 = max_norm(poe_subdivision(xs, 10000) - exact);
  CHECK(e4 < 1e-8);
  CHECK(e3 / e4 >= 10.0);
}
