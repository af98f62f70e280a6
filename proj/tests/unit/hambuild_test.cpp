#include <random>

#include "doctest.h"

#include "core/hambuild.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "test_util.hpp"

using namespace mbspec;

namespace {

GridSpec grid(std::size_t n, std::size_t axes) { return GridSpec{n, testing_models::axes(axes), 1.0}; }

SpaceId sp(std::initializer_list<std::size_t> axes) {
  std::vector<std::size_t> v(axes);
  return SpaceId::from_axes(v);
}

DenseMatrix dense(const SparseMatrix& m) { return DenseMatrix(m); }

KineticSpec laplacians(const Semilattice& s, std::vector<double> weights = {}, double shift_o = 0.0) {
  KineticSpec k;
  for (auto x : s.members()) {
    KineticSymbol sym;
    sym.weights = weights;
    if (x.is_trivial()) sym.shift = shift_o;
    k.set(x, sym);
  }
  return k;
}

}  // namespace

TEST_SUITE("hambuild") {

TEST_CASE("kinetic blocks") {
  auto g1 = grid(2, 1);
  Semilattice s(g1.axes, {trivial_space, sp({0})});
  auto k = kinetic(laplacians(s, {}, 0.75), s, g1);
  REQUIRE(k.block(trivial_space, trivial_space));
  CHECK(dense(*k.block(trivial_space, trivial_space))(0, 0) == cplx(0.75));
  CHECK(oracle::max_abs_diff(oracle::eigenvalues(dense(*k.block(sp({0}), sp({0})))), {0.0, 4.0}) < 1e-14);

  auto g2 = grid(4, 2);
  KineticSymbol sym;
  sym.weights = {1.0, 0.3};
  auto delta = dense(free_kinetic_block(g2, sp({0, 1}), sym));
  CHECK(oracle::max_abs(delta - oracle::laplacian_matrix(4, {1.0, 0.3})) < 1e-14);
  CHECK(oracle::max_abs_diff(oracle::eigenvalues(delta), oracle::laplacian_spectrum(4, {1.0, 0.3})) < 1e-12);
}

TEST_CASE("tabulated symbol is diagonal in the Fourier basis") {
  auto g = grid(5, 1);
  KineticSymbol sym;
  sym.kind = SymbolKind::tabulated;
  sym.table = {0.0, 1.0, 3.0, 3.0, 1.0};
  sym.shift = 0.5;
  auto m = dense(kinetic_block(g, sp({0}), sym));
  CHECK(oracle::max_abs(m - m.adjoint()) == 0.0);
  CHECK(oracle::max_abs_diff(oracle::eigenvalues(m), {0.5, 1.5, 1.5, 3.5, 3.5}) < 1e-13);
  sym.table.pop_back();
  CHECK_THROWS_AS(kinetic_block(g, sp({0}), sym), Error);
}

TEST_CASE("potential blocks") {
  auto g = grid(3, 2);
  std::vector<double> c(9, 0.4);
  CHECK(oracle::max_abs(dense(potential(g, sp({0, 1}), trivial_space, c)) - 0.4 * DenseMatrix::Identity(9, 9)) == 0.0);

  std::vector<double> v{1.0, 2.0, 3.0};
  auto m = dense(potential(g, sp({0, 1}), sp({0}), v));
  auto split = tensor_split(g, sp({0, 1}), sp({0}));
  for (std::size_t i = 0; i < 9; ++i) CHECK(m(i, i) == cplx(v[split.inner(i)]));
  CHECK(oracle::max_abs(m - DenseMatrix(m.diagonal().asDiagonal())) == 0.0);

  std::vector<double> scalar{2.5};
  CHECK(oracle::max_abs(dense(potential(g, sp({0, 1}), sp({0, 1}), scalar)) - 2.5 * DenseMatrix::Identity(9, 9)) == 0.0);
  CHECK_FAILS_WITH(potential(g, sp({0}), sp({1}), v), ErrorKind::NotASubspace);
  std::vector<double> wrong{1.0};
  CHECK_FAILS_WITH(potential(g, sp({0, 1}), sp({0}), wrong), ErrorKind::LengthMismatch);
}

TEST_CASE("creation blocks") {
  auto g = grid(4, 2);
  Vector theta = Vector::Random(4);
  theta /= theta.norm();
  auto a = dense(create(g, sp({0, 1}), sp({0}), theta));
  CHECK(oracle::max_abs(a.adjoint() * a - DenseMatrix::Identity(4, 4)) < 1e-14);

  Vector t2 = 3.0 * theta;
  auto from_vac = dense(create(g, sp({0}), trivial_space, t2));
  CHECK((from_vac.col(0) - t2).norm() == 0.0);
  auto b = dense(create(g, sp({0, 1}), sp({0}), t2));
  Eigen::JacobiSVD<DenseMatrix> svd(b);
  CHECK(std::abs(svd.singularValues()(0) - t2.norm()) < 1e-13);
  CHECK_FAILS_WITH(create(g, sp({0}), sp({0}), theta), ErrorKind::NotAStrictSubspace);
}

TEST_CASE("interaction of a single term") {
  auto g = grid(4, 1);
  Semilattice s(g.axes, {trivial_space, sp({0})});
  InteractionTerm pot(trivial_space);
  std::vector<double> v{-1.0, 0.0, 0.5, 0.0};
  pot.add_potential(g, sp({0}), v);
  auto i = interaction(pot, s, g);
  CHECK(i.blocks().size() == 1);
  CHECK(oracle::max_abs(dense(*i.block(sp({0}), sp({0}))) - DenseMatrix(Vector(Eigen::Vector4d(-1, 0, 0.5, 0).cast<cplx>()).asDiagonal())) == 0.0);

  InteractionTerm shift(sp({0}));
  std::vector<double> one{1.5};
  shift.add_potential(g, sp({0}), one);
  CHECK(oracle::max_abs(dense(*interaction(shift, s, g).block(sp({0}), sp({0}))) - 1.5 * DenseMatrix::Identity(4, 4)) == 0.0);

  InteractionTerm fr(trivial_space);
  Vector theta = Vector::Random(4);
  fr.add_creation(g, sp({0}), trivial_space, theta);
  CHECK_FAILS_WITH(interaction(fr, s, g), ErrorKind::HermitianClosureViolation);
  auto closed = fr.hermitian_closure();
  CHECK(closed.blocks().size() == 2);
  CHECK(closed.blocks()[1].kind == BlockKind::annihilation);
  auto op = interaction(closed, s, g);
  CHECK((dense(*op.block(sp({0}), trivial_space)).col(0) - theta).norm() == 0.0);
  CHECK((dense(*op.block(trivial_space, sp({0}))).row(0) - theta.adjoint()).norm() == 0.0);
  CHECK(hermiticity_defect(op) == 0.0);
}

TEST_CASE("support rule and membership") {
  auto g = grid(3, 2);
  Semilattice s(g.axes, {trivial_space, sp({0}), sp({1}), sp({0, 1})});
  InteractionTerm t(sp({0}));
  std::vector<double> v(3, 1.0);
  CHECK_FAILS_WITH(t.add_potential(g, sp({1}), v), ErrorKind::SupportViolation);
  InteractionTerm outside(sp({0}));
  std::vector<double> w(1, 1.0);
  outside.add_potential(g, sp({0}), w);
  Semilattice small(g.axes, {trivial_space, sp({1})});
  CHECK_FAILS_WITH(interaction(outside, small, g), ErrorKind::NotAMember);
}

TEST_CASE("raw blocks are checked for invariance") {
  auto g = grid(3, 2);
  testing_models::Rng rng(3);
  DenseMatrix r = DenseMatrix::Random(3, 3);
  SparseMatrix reduced = r.sparseView();
  SparseMatrix full = lift(g, sp({0, 1}), sp({0, 1}), sp({0}), SparseMatrix(reduced + SparseMatrix(reduced.adjoint())));

  InteractionTerm ok(sp({0}));
  ok.add_raw(g, sp({0, 1}), sp({0, 1}), full, RawPolicy::reject);
  REQUIRE(ok.blocks().size() == 1);
  CHECK(ok.blocks()[0].factorizable);
  CHECK(oracle::max_abs(dense(ok.blocks()[0].reduced) - dense(SparseMatrix(reduced + SparseMatrix(reduced.adjoint()))))< 1e-14);

  DenseMatrix bad = DenseMatrix(full);
  bad(0, 0) += 1.0;
  InteractionTerm rej(sp({0}));
  CHECK_FAILS_WITH(rej.add_raw(g, sp({0, 1}), sp({0, 1}), bad.sparseView(), RawPolicy::reject),
                   ErrorKind::InvarianceViolation);
  InteractionTerm sym(sp({0}));
  sym.add_raw(g, sp({0, 1}), sp({0, 1}), bad.sparseView(), RawPolicy::symmetrize);
  // The averaged block commutes with every translation along Z.
  for (long a = 0; a < 3; ++a) {
    std::vector<long> va{a, 0};
    DenseMatrix u = translate(g, sp({0, 1}), va);
    DenseMatrix m = dense(sym.blocks()[0].full);
    CHECK(oracle::max_abs(u * m * u.adjoint() - m) < 1e-14);
  }
}

TEST_CASE("friedrichs assembly against the arrow matrix") {
  auto g = grid(4, 1);
  Semilattice s(g.axes, {trivial_space, sp({0})});
  auto k = kinetic(laplacians(s), s, g);
  InteractionTerm t(trivial_space);
  Vector theta = Vector::Zero(4);
  theta[0] = 1.0;
  t.add_creation(g, sp({0}), trivial_space, theta);
  std::vector<InteractionTerm> terms{t.hermitian_closure()};
  auto h = assemble(k, terms);
  CHECK(hermiticity_defect(h) == 0.0);

  DenseMatrix arrow = DenseMatrix::Zero(5, 5);
  arrow.bottomRightCorner(4, 4) = oracle::laplacian_matrix(4, {1.0});
  arrow(1, 0) = arrow(0, 1) = 1.0;
  CHECK(oracle::max_abs(h.to_dense() - arrow) == 0.0);
  CHECK(oracle::max_abs_diff(oracle::eigenvalues(h.to_dense()), oracle::eigenvalues(arrow)) < 1e-13);

  std::vector<InteractionTerm> none;
  CHECK(max_norm_difference(assemble(k, none), k) == 0.0);
  BlockOperator bare(k.sectors_ptr());
  CHECK_FAILS_WITH(assemble(bare, terms), ErrorKind::MissingDecomposition);
}

TEST_CASE("assemble is additive in the terms") {
  auto models = testing_models::model_family(5, 12);
  for (const auto& d : models) {
    auto k = kinetic(d.kinetic, d.lattice, d.grid);
    auto h = assemble(k, d.terms);
    CHECK(hermiticity_defect(h) <= 1e-14);
    for (std::size_t drop = 0; drop < d.terms.size(); ++drop) {
      std::vector<InteractionTerm> rest;
      for (std::size_t i = 0; i < d.terms.size(); ++i) {
        if (i != drop) rest.push_back(d.terms[i]);
      }
      auto diff = h - assemble(k, rest);
      CHECK(max_norm_difference(diff, interaction(d.terms[drop], d.lattice, d.grid)) < 1e-14);
    }
  }
}

TEST_CASE("terms are invariant under translations along Z") {
  auto models = testing_models::model_family(9, 10);
  for (const auto& d : models) {
    const std::size_t n = d.grid.points_per_axis;
    for (const auto& term : d.terms) {
      auto op = interaction(term, d.lattice, d.grid);
      const auto z = term.z().axes();
      std::size_t count = 1;
      for (std::size_t i = 0; i < z.size(); ++i) count *= n;
      for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<long> a(d.grid.universe().size(), 0);
        std::size_t rest = idx;
        for (auto axis : z) {
          a[axis] = static_cast<long>(rest % n);
          rest /= n;
        }
        CHECK(translation_defect(op, a) == 0.0);
      }
    }
  }
}

TEST_CASE("pauli-fierz field") {
  auto g = grid(3, 2);
  Semilattice chain(g.axes, {trivial_space, sp({0}), sp({0, 1})});
  auto k = kinetic(laplacians(chain), chain, g);
  CHECK(max_norm_difference(pauli_fierz(k, {}), k) == 0.0);

  ThetaMap thetas;
  thetas[{sp({0}), trivial_space}] = Vector::Random(3);
  thetas[{sp({0, 1}), trivial_space}] = Vector::Random(9);
  thetas[{sp({0, 1}), sp({0})}] = Vector::Random(3);
  auto h = pauli_fierz(k, thetas);
  auto phi = h - k;
  CHECK(hermiticity_defect(h) == 0.0);
  std::size_t upper = 0;
  for (const auto& [key, m] : phi.blocks()) {
    if (key.first == key.second) {
      CHECK(max_abs(m) == 0.0);
    } else if (key.first < key.second && max_abs(m) > 0) {
      ++upper;
    }
  }
  CHECK(upper == 3);
  CHECK(oracle::max_abs(DenseMatrix(*phi.block(sp({0}), trivial_space)).col(0) - thetas[{sp({0}), trivial_space}]) == 0.0);

  Semilattice square(g.axes, {trivial_space, sp({0}), sp({1}), sp({0, 1})});
  auto k2 = kinetic(laplacians(square), square, g);
  ThetaMap bad;
  bad[{sp({0}), sp({1})}] = Vector::Random(3);
  CHECK_THROWS_AS(pauli_fierz(k2, bad), Error);
}

TEST_CASE("quotient symbols") {
  auto g = grid(4, 2);
  KineticSymbol y;
  y.weights = {1.0, 2.0};
  y.shift = 0.3;
  KineticSymbol x = y;
  auto q = quotient_symbol(g, sp({0, 1}), y, sp({0}), x);
  REQUIRE(q);
  CHECK(q->shift == 0.3);
  auto qv = symbol_values(g, sp({1}), *q);
  auto direct = symbol_values(g, sp({1}), y);
  CHECK(oracle::max_abs_diff(qv, direct) == 0.0);

  KineticSymbol other = y;
  other.weights = {1.5, 2.0};
  CHECK_FALSE(quotient_symbol(g, sp({0, 1}), y, sp({0}), other));

  KineticSymbol tab;
  tab.kind = SymbolKind::tabulated;
  tab.table.resize(16);
  for (std::size_t i = 0; i < 16; ++i) tab.table[i] = static_cast<double>(i * i % 7);
  KineticSymbol tx;
  tx.kind = SymbolKind::tabulated;
  tx.table = {0, 1, 2, 3};
  CHECK_FALSE(quotient_symbol(g, sp({0, 1}), tab, sp({0}), tx));
}

}  // TEST_SUITE
