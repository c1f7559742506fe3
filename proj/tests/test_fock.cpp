#include "doctest.h"

#include "holonet/fock.hpp"
#include "support.hpp"

using namespace holonet;
using namespace testing_support;

TEST_CASE("creators agree with the Kronecker-product oracle") {
  for (int k = 1; k <= 5; ++k) {
    const FockSpace fock(k);
    for (int j = 0; j < k; ++j) {
      CAPTURE(k);
      CAPTURE(j);
      CHECK(max_norm(fock.creator(j).matrix() - kron_creator(k, j)) == 0.0);
      CHECK(max_norm(fock.annihilator(j).matrix() - kron_creator(k, j).adjoint()) == 0.0);
    }
  }
}

TEST_CASE("canonical anticommutation relations") {
  const int k = 4;
  const FockSpace fock(k);
  const Matrix id = Matrix::Identity(fock.dimension(), fock.dimension());
  Matrix number = Matrix::Zero(fock.dimension(), fock.dimension());
  for (int i = 0; i < k; ++i) {
    const Matrix ci = fock.annihilator(i).matrix();
    number += ci.adjoint() * ci;
    for (int j = 0; j < k; ++j) {
      const Matrix cj = fock.annihilator(j).matrix();
      const Matrix mixed = ci * cj.adjoint() + cj.adjoint() * ci;
      CHECK(max_norm(mixed - (i == j ? id : Matrix::Zero(id.rows(), id.cols()))) == 0.0);
      CHECK(max_norm(ci * cj + cj * ci) == 0.0);
    }
  }
  CHECK(max_norm(number - fock.number_operator()) == 0.0);
  CHECK(std::abs(fock.vacuum()(0) - 1.0) == 0.0);
  CHECK(fock.vacuum().norm() == 1.0);
}

TEST_CASE("matrix-free application matches dense operators") {
  std::mt19937_64 rng(8);
  const FockSpace fock(5);
  for (int j = 0; j < 5; ++j) {
    const Vector v = random_vector(rng, static_cast<int>(fock.dimension()));
    CHECK(max_norm(Matrix(fock.apply_creator(j, v) - fock.creator(j).matrix() * v)) < 1e-14);
    CHECK(max_norm(Matrix(fock.apply_annihilator(j, v) - fock.annihilator(j).matrix() * v)) < 1e-14);
  }
}

TEST_CASE("too many modes is a capacity error") {
  CHECK_NOTHROW(FockSpace{kMaxModes});
  CHECK_THROWS_AS(FockSpace{kMaxModes + 1}, CapacityError);
}

TEST_CASE("smeared fields are linear and obey the smeared CAR") {
  std::mt19937_64 rng(12);
  const Cover cover = builtin_cover("circle", 4);
  const OneParticleSpace space = OneParticleSpace::build(cover, 1);
  const FockSpace fock(space.dimension());
  const Matrix id = Matrix::Identity(fock.dimension(), fock.dimension());
  for (int trial = 0; trial < 5; ++trial) {
    const Vector f = random_vector(rng, space.dimension());
    const Vector g = random_vector(rng, space.dimension());
    const Complex a(gaussian(rng), gaussian(rng));
    const Complex b(gaussian(rng), gaussian(rng));
    const Matrix lhs = field(fock, space, Vector(a * f + b * g)).matrix();
    const Matrix rhs = a * field(fock, space, f).matrix() + b * field(fock, space, g).matrix();
    CHECK(max_norm(lhs - rhs) < 1e-13);
    const Matrix pf = field(fock, space, f).matrix();
    const Matrix pg = field(fock, space, g).matrix();
    CHECK(max_norm(pf.adjoint() * pg + pg * pf.adjoint() - space.inner(f, g) * id) < 1e-12);
    CHECK(max_norm(pf * pg + pg * pf) < 1e-12);
  }
  CHECK(field(fock, space, space.basis_vector(2)).support() == std::set<RegionId>{2});
}

TEST_CASE("grading and parity") {
  const FockSpace fock(3);
  const FieldOp c0 = fock.creator(0);
  const FieldOp c1 = fock.creator(1);
  CHECK(grading(fock, c0.matrix()) == 1);
  CHECK(grading(fock, c0.adjoint().matrix()) == -1);
  CHECK(grading(fock, (c0 * c1).matrix()) == 2);
  CHECK(grading(fock, (c0 * c0.adjoint()).matrix()) == 0);
  CHECK(grading(fock, Matrix::Zero(8, 8)) == 0);
  const Matrix hopping = (c0 + c1.adjoint()).matrix();
  CHECK_FALSE(grading(fock, hopping).has_value());
  CHECK(parity_of(fock, hopping) == Parity::Odd);
  CHECK(parity_of(fock, (c0 * c1.adjoint()).matrix()) == Parity::Even);
  const Matrix mixed = c0.matrix() + (c0 * c1.adjoint()).matrix();
  CHECK(parity_of(fock, mixed) == Parity::Mixed);
  CHECK((c0 + c1.adjoint()).parity() == Parity::Odd);
  CHECK((c0 + c0 * c1).parity() == Parity::Mixed);

  // α_ζ(ψ) = ζ ψ
  const Complex zeta = std::polar(1.0, 0.4);
  CHECK(max_norm(gauge_action(fock, zeta, c0).matrix() - zeta * c0.matrix()) < 1e-15);
  CHECK(max_norm(fock.gauge_unitary(zeta) * c0.matrix() * fock.gauge_unitary(zeta).adjoint() -
                 zeta * c0.matrix()) < 1e-14);
  CHECK_THROWS_AS(FieldOp(c0.matrix(), std::optional<int>(1), Parity::Even, {}), GradeError);
}

TEST_CASE("normal commutation between causally disjoint regions") {
  const Cover cover = builtin_cover("circle", 5);
  const OneParticleSpace space = OneParticleSpace::build(cover, 1);
  const FockSpace fock(space.dimension());
  REQUIRE_FALSE(cover.disjoint_pairs.empty());
  const auto [a, b] = cover.disjoint_pairs.front();
  const FieldOp ta = field(fock, space, space.basis_vector(space.private_modes(a).front()));
  const FieldOp tb = field(fock, space, space.basis_vector(space.private_modes(b).front()));
  CHECK(normal_commutation_check(cover, ta, tb) == 0.0);
  CHECK(normal_commutation_check(cover, ta * ta.adjoint(), tb) == 0.0);
  CHECK(normal_commutation_check(cover, ta.adjoint(), tb * tb.adjoint()) == 0.0);
  // the wrong bracket is visible
  CHECK(max_norm(ta.matrix() * tb.matrix() - tb.matrix() * ta.matrix()) > 1.0);

  const RegionId neighbour = (a + 1) % 5;
  REQUIRE(cover.overlapping(a, neighbour));
  const FieldOp tn = field(fock, space, space.basis_vector(space.private_modes(neighbour).front()));
  CHECK_THROWS_AS(normal_commutation_check(cover, ta, tn), SupportError);
  CHECK_THROWS_AS(normal_commutation_check(cover, ta + ta * ta.adjoint(), tb), GradeError);
}

TEST_CASE("twisted local fields on nested regions differ by the potential") {
  std::mt19937_64 rng(19);
  const Cover cover = builtin_cover("disk");
  const NerveGraph nerve = build_nerve(cover);
  std::vector<double> phi;
  for (int r = 0; r < 3; ++r) phi.push_back(uniform(rng, -kPi, kPi));
  const FlatPotentialU1 pot = FlatPotentialU1::from_primitives(nerve, phi);
  const OneParticleSpace space = OneParticleSpace::build(cover, 1, 1);
  const FockSpace fock(space.dimension());
  for (const auto& ov : cover.overlaps) {
    const RegionId o = ov.first;
    const RegionId o2 = ov.second;
    const Vector f = space.basis_vector(space.shared_modes(o, o2).front());
    const Matrix in_o = twisted_local_field(fock, space, pot, o, f).matrix();
    const Matrix in_o2 = twisted_local_field(fock, space, pot, o2, f).matrix();
    CHECK(max_norm(in_o2 - std::polar(1.0, -pot.angle(o2, o, ov.component)) * in_o) < 1e-13);
  }
  const Vector private0 = space.basis_vector(space.private_modes(0).front());
  CHECK_THROWS_AS(twisted_local_field(fock, space, pot, 1, private0), SupportError);
}

TEST_CASE("glued field is chart independent") {
  std::mt19937_64 rng(23);
  const Cover cover = builtin_cover("disk");
  const NerveGraph nerve = build_nerve(cover);
  std::vector<double> phi;
  for (int r = 0; r < 3; ++r) phi.push_back(uniform(rng, -kPi, kPi));
  const FlatPotentialU1 pot = FlatPotentialU1::from_primitives(nerve, phi);
  const OneParticleSpace space = OneParticleSpace::build(cover, 1, 1);
  const FockSpace fock(space.dimension());

  const Vector h = space.basis_vector(space.shared_modes(0, 1).front()) * Complex(0.6, -0.8);
  const std::map<RegionId, Vector> section{{0, std::polar(1.0, phi[0]) * h}, {1, std::polar(1.0, phi[1]) * h}};
  const GluedField glued = glue_psi_A(fock, space, pot, section);
  CHECK(glued.chart_residual < 1e-13);
  CHECK(glued.section_residual < 1e-13);
  CHECK(max_norm(glued.field.matrix() - field(fock, space, h).matrix()) < 1e-13);

  std::map<RegionId, Vector> broken = section;
  broken.at(1) *= std::polar(1.0, 0.1);
  CHECK_THROWS_AS(glue_psi_A(fock, space, pot, broken), SupportError);
}

TEST_CASE("twisted product multiplies by g^grade") {
  const FockSpace fock(2);
  const FieldOp t = fock.creator(0);
  const FieldOp s = fock.creator(1).adjoint();
  const GroupValue g = GroupValue::phase(0.9);
  CHECK(max_norm(twisted_product(fock, t, s, g).matrix() - g.to_complex() * (t * s).matrix()) < 1e-15);
  CHECK(max_norm(twisted_product(fock, t * t.adjoint(), s, g).matrix() - (t * t.adjoint() * s).matrix()) < 1e-15);
  CHECK_THROWS_AS(twisted_product(fock, t + t.adjoint(), s, g), GradeError);
  CHECK_THROWS_AS(twisted_product(fock, t, s, GroupValue::identity(GroupDescriptor::un(2))), VariantMismatch);
}

TEST_CASE("the CAR algebra acts irreducibly") {
  const FockSpace fock(3);
  std::vector<Matrix> gens;
  for (int j = 0; j < 3; ++j) {
    gens.push_back(fock.creator(j).matrix());
    gens.push_back(fock.annihilator(j).matrix());
  }
  CHECK(commutant_dimension(gens) == 1);
  // the number operator alone commutes with every block-diagonal matrix
  const std::vector<Matrix> only_n{fock.number_operator()};
  CHECK(commutant_dimension(only_n) == 1 + 9 + 9 + 1);
}
