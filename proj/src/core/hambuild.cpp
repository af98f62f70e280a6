#include "core/hambuild.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace mbspec {

namespace {

std::string label(const GridSpec& grid, SpaceId x) { return space_label(x, grid.universe()); }

void require_support(const GridSpec& grid, SpaceId z, SpaceId x, SpaceId y) {
  if (!z.subset_of(meet(x, y))) {
    fail(ErrorKind::SupportViolation, "term Z=" + label(grid, z) + " is not contained in " + label(grid, x) +
                                          " ∩ " + label(grid, y));
  }
}

SparseMatrix diagonal(std::span<const double> v) {
  const auto d = static_cast<Eigen::Index>(v.size());
  std::vector<Triplet> t;
  t.reserve(v.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (v[static_cast<std::size_t>(i)] != 0.0) t.emplace_back(i, i, cplx{v[static_cast<std::size_t>(i)], 0.0});
  }
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix from_dense(const DenseMatrix& a) {
  std::vector<Triplet> t;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != cplx{0.0, 0.0}) t.emplace_back(i, j, a(i, j));
    }
  }
  SparseMatrix m(a.rows(), a.cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

template <typename Fn>
void for_each_nonzero(const SparseMatrix& m, Fn&& fn) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) fn(it.row(), it.col(), it.value());
  }
}

// Every a in Z_n^{|Z|}, written as a full per-axis vector.
std::vector<std::vector<long>> translations_in(const GridSpec& grid, SpaceId z) {
  std::vector<std::vector<long>> out;
  const std::size_t count = grid.dim(z);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(coordinates(grid, z, i));
  return out;
}

std::vector<long> unit_vector(const GridSpec& grid, std::size_t axis) {
  std::vector<long> a(grid.universe().size(), 0);
  a[axis] = 1;
  return a;
}

}  // namespace

const KineticSymbol& KineticSpec::at(SpaceId x) const {
  auto it = per_space_.find(x);
  if (it == per_space_.end()) fail(ErrorKind::ValidationError, "kinetic spec does not cover a member space");
  return it->second;
}

std::vector<double> symbol_values(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol) {
  const std::size_t d = grid.dim(x);
  if (symbol.kind == SymbolKind::tabulated) {
    if (symbol.table.size() != d) {
      fail(ErrorKind::LengthMismatch, "tabulated symbol for " + label(grid, x) + " has length " +
                                          std::to_string(symbol.table.size()) + ", expected " + std::to_string(d));
    }
    return symbol.table;
  }
  if (!symbol.weights.empty() && symbol.weights.size() != grid.universe().size()) {
    fail(ErrorKind::LengthMismatch, "laplacian weights need one entry per axis");
  }
  for (auto axis : x.axes()) {
    if (!(symbol.weight(axis) > 0)) fail(ErrorKind::ValidationError, "laplacian weights must be positive");
  }
  const double n = static_cast<double>(grid.points_per_axis);
  std::vector<double> h(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    auto k = coordinates(grid, x, i);
    double s = 0.0;
    for (auto axis : x.axes()) {
      s += symbol.weight(axis) * (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k[axis]) / n));
    }
    h[i] = s;
  }
  return h;
}

SparseMatrix free_kinetic_block(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol) {
  const std::size_t d = grid.dim(x);
  const auto dd = static_cast<Eigen::Index>(d);
  std::vector<Triplet> t;
  if (symbol.kind == SymbolKind::discrete_laplacian) {
    symbol_values(grid, x, symbol);  // validates weights
    for (std::size_t i = 0; i < d; ++i) {
      auto c = coordinates(grid, x, i);
      double diag = 0.0;
      for (auto axis : x.axes()) {
        const double w = symbol.weight(axis);
        diag += 2.0 * w;
        for (long step : {1L, -1L}) {
          auto nb = c;
          nb[axis] += step;
          t.emplace_back(static_cast<int>(i), static_cast<int>(flat_index(grid, x, nb)), cplx{-w, 0.0});
        }
      }
      if (diag != 0.0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), cplx{diag, 0.0});
    }
    SparseMatrix m(dd, dd);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(cplx{0.0, 0.0});
    return m;
  }

  // Tabulated: the circulant c(x - y) with c(d) = N^{-1} sum_k h(k) e^{2 pi i <k,d>/n}.
  const auto h = symbol_values(grid, x, symbol);
  const long n = static_cast<long>(grid.points_per_axis);
  std::vector<std::vector<long>> coords(d);
  for (std::size_t i = 0; i < d; ++i) coords[i] = coordinates(grid, x, i);
  std::vector<cplx> c(d);
  for (std::size_t j = 0; j < d; ++j) {
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < d; ++k) {
      if (h[k] == 0.0) continue;
      long phase = 0;
      for (auto axis : x.axes()) phase = (phase + coords[k][axis] * coords[j][axis]) % n;
      s += h[k] * unit_root(phase, grid.points_per_axis);
    }
    c[j] = s / static_cast<double>(d);
  }
  t.reserve(d * d);
  std::vector<long> diff(grid.universe().size(), 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      for (auto axis : x.axes()) diff[axis] = coords[i][axis] - coords[j][axis];
      cplx v = c[flat_index(grid, x, diff)];
      if (i == j) v = cplx{v.real(), 0.0};
      if (v == cplx{0.0, 0.0}) continue;
      t.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      if (i != j) t.emplace_back(static_cast<int>(j), static_cast<int>(i), std::conj(v));
    }
  }
  SparseMatrix m(dd, dd);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix kinetic_block(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol) {
  SparseMatrix m = free_kinetic_block(grid, x, symbol);
  if (symbol.shift != 0.0) {
    SparseMatrix id(m.rows(), m.cols());
    id.setIdentity();
    m += symbol.shift * id;
  }
  m.makeCompressed();
  return m;
}

std::optional<KineticSymbol> quotient_symbol(const GridSpec& grid, SpaceId y, const KineticSymbol& sym_y,
                                             SpaceId x, const KineticSymbol& sym_x) {
  if (!x.subset_of(y)) fail(ErrorKind::NotASubspace, label(grid, x) + " is not a subspace of " + label(grid, y));
  if (sym_y.kind == SymbolKind::discrete_laplacian && sym_x.kind == SymbolKind::discrete_laplacian) {
    for (auto axis : x.axes()) {
      if (sym_y.weight(axis) != sym_x.weight(axis)) return std::nullopt;
    }
    KineticSymbol out = sym_y;
    out.table.clear();
    return out;
  }
  const auto hy = symbol_values(grid, y, sym_y);
  const auto hx = symbol_values(grid, x, sym_x);
  TensorSplit split(grid, y, x);
  std::vector<double> g(split.inner_dim());
  for (std::size_t r = 0; r < g.size(); ++r) g[r] = hy[split.join(0, r)] - hx[0];
  double scale = 1.0;
  for (double v : hy) scale = std::max(scale, std::abs(v));
  for (std::size_t o = 0; o < split.outer_dim(); ++o) {
    for (std::size_t r = 0; r < split.inner_dim(); ++r) {
      if (std::abs(hy[split.join(o, r)] - hx[o] - g[r]) > 1e-12 * scale) return std::nullopt;
    }
  }
  KineticSymbol out;
  out.kind = SymbolKind::tabulated;
  out.table = std::move(g);
  out.shift = sym_y.shift;
  return out;
}

const char* to_string(BlockKind kind) noexcept {
  switch (kind) {
    case BlockKind::potential: return "potential";
    case BlockKind::creation: return "creation";
    case BlockKind::annihilation: return "annihilation";
    case BlockKind::kernel: return "kernel";
    case BlockKind::raw: return "raw";
  }
  return "?";
}

SparseMatrix potential(const GridSpec& grid, SpaceId x, SpaceId z, std::span<const double> v) {
  if (!z.subset_of(x)) fail(ErrorKind::NotASubspace, label(grid, z) + " is not a subspace of " + label(grid, x));
  TensorSplit split(grid, x, z);
  if (v.size() != split.inner_dim()) {
    fail(ErrorKind::LengthMismatch, "potential has length " + std::to_string(v.size()) + ", expected " +
                                        std::to_string(split.inner_dim()));
  }
  std::vector<double> diag(split.size());
  for (std::size_t i = 0; i < split.size(); ++i) diag[i] = v[split.inner(i)];
  return diagonal(diag);
}

SparseMatrix create(const GridSpec& grid, SpaceId x, SpaceId y, const Vector& theta) {
  if (!y.strict_subset_of(x)) {
    fail(ErrorKind::NotAStrictSubspace, label(grid, y) + " is not a strict subspace of " + label(grid, x));
  }
  TensorSplit split(grid, x, y);
  if (static_cast<std::size_t>(theta.size()) != split.inner_dim()) {
    fail(ErrorKind::LengthMismatch, "theta has length " + std::to_string(theta.size()) + ", expected " +
                                        std::to_string(split.inner_dim()));
  }
  std::vector<Triplet> t;
  for (std::size_t a = 0; a < split.outer_dim(); ++a) {
    for (std::size_t b = 0; b < split.inner_dim(); ++b) {
      const cplx v = theta[static_cast<Eigen::Index>(b)];
      if (v != cplx{0.0, 0.0}) t.emplace_back(static_cast<int>(split.join(a, b)), static_cast<int>(a), v);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(split.size()), static_cast<Eigen::Index>(split.outer_dim()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix lift(const GridSpec& grid, SpaceId x, SpaceId y, SpaceId z, const SparseMatrix& reduced) {
  TensorSplit sx(grid, x, z);
  TensorSplit sy(grid, y, z);
  if (static_cast<std::size_t>(reduced.rows()) != sx.inner_dim() ||
      static_cast<std::size_t>(reduced.cols()) != sy.inner_dim()) {
    fail(ErrorKind::DimensionMismatch, "reduced block shape does not match H_{Y/Z} -> H_{X/Z}");
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(reduced.nonZeros()) * sx.outer_dim());
  for_each_nonzero(reduced, [&](Eigen::Index r, Eigen::Index c, cplx v) {
    for (std::size_t o = 0; o < sx.outer_dim(); ++o) {
      t.emplace_back(static_cast<int>(sx.join(o, static_cast<std::size_t>(r))),
                     static_cast<int>(sy.join(o, static_cast<std::size_t>(c))), v);
    }
  });
  SparseMatrix m(static_cast<Eigen::Index>(sx.size()), static_cast<Eigen::Index>(sy.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void InteractionTerm::push(const GridSpec& grid, TermBlock block) {
  for (const auto& b : blocks_) {
    if (b.row == block.row && b.col == block.col) {
      fail(ErrorKind::ValidationError, "duplicate block (" + label(grid, block.row) + ", " + label(grid, block.col) +
                                           ") in term Z=" + label(grid, z_));
    }
  }
  block.reduced.makeCompressed();
  block.full.makeCompressed();
  blocks_.push_back(std::move(block));
}

void InteractionTerm::add_potential(const GridSpec& grid, SpaceId x, std::span<const double> v) {
  require_support(grid, z_, x, x);
  TermBlock b{x, x, BlockKind::potential, true, {}, {}};
  TensorSplit split(grid, x, z_);
  if (v.size() != split.inner_dim()) {
    fail(ErrorKind::LengthMismatch, "potential has length " + std::to_string(v.size()) + ", expected " +
                                        std::to_string(split.inner_dim()));
  }
  b.reduced = diagonal(v);
  b.full = potential(grid, x, z_, v);
  push(grid, std::move(b));
}

void InteractionTerm::add_creation(const GridSpec& grid, SpaceId x, SpaceId y, const Vector& theta,
                                   const DenseMatrix* factor) {
  if (!y.strict_subset_of(x)) {
    fail(ErrorKind::NotAStrictSubspace, label(grid, y) + " is not a strict subspace of " + label(grid, x));
  }
  require_support(grid, z_, x, y);
  const SpaceId xz = axis_difference(x, z_);
  const SpaceId yz = axis_difference(y, z_);
  TensorSplit split(grid, xz, yz);  // H_{X/Z} = H_{Y/Z} (x) H_{X/Y}
  if (static_cast<std::size_t>(theta.size()) != split.inner_dim()) {
    fail(ErrorKind::LengthMismatch, "theta has length " + std::to_string(theta.size()) + ", expected " +
                                        std::to_string(split.inner_dim()));
  }
  const auto dy = static_cast<Eigen::Index>(split.outer_dim());
  if (factor && (factor->rows() != dy || factor->cols() != dy)) {
    fail(ErrorKind::DimensionMismatch, "creation factor must act on H_{Y/Z}");
  }
  std::vector<Triplet> t;
  for (Eigen::Index b = 0; b < theta.size(); ++b) {
    const cplx th = theta[b];
    if (th == cplx{0.0, 0.0}) continue;
    for (Eigen::Index a = 0; a < dy; ++a) {
      const auto row = static_cast<int>(split.join(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
      if (!factor) {
        t.emplace_back(row, static_cast<int>(a), th);
        continue;
      }
      for (Eigen::Index c = 0; c < dy; ++c) {
        const cplx v = (*factor)(a, c) * th;
        if (v != cplx{0.0, 0.0}) t.emplace_back(row, static_cast<int>(c), v);
      }
    }
  }
  TermBlock blk{x, y, BlockKind::creation, true, {}, {}};
  blk.reduced = SparseMatrix(static_cast<Eigen::Index>(split.size()), dy);
  blk.reduced.setFromTriplets(t.begin(), t.end());
  blk.full = lift(grid, x, y, z_, blk.reduced);
  push(grid, std::move(blk));
}

void InteractionTerm::add_kernel(const GridSpec& grid, SpaceId x, SpaceId y, const DenseMatrix& kernel,
                                 std::size_t max_dense) {
  require_support(grid, z_, x, y);
  const auto rows = grid.dim(axis_difference(x, z_));
  const auto cols = grid.dim(axis_difference(y, z_));
  if (static_cast<std::size_t>(kernel.rows()) != rows || static_cast<std::size_t>(kernel.cols()) != cols) {
    fail(ErrorKind::DimensionMismatch, "kernel shape " + std::to_string(kernel.rows()) + "x" +
                                           std::to_string(kernel.cols()) + " does not match " +
                                           std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (rows > max_dense || cols > max_dense) {
    fail(ErrorKind::DimensionCap, "kernel exceeds the dense size cap " + std::to_string(max_dense));
  }
  TermBlock b{x, y, BlockKind::kernel, true, from_dense(kernel), {}};
  b.full = lift(grid, x, y, z_, b.reduced);
  push(grid, std::move(b));
}

void InteractionTerm::add_raw(const GridSpec& grid, SpaceId x, SpaceId y, const SparseMatrix& full,
                              RawPolicy policy, double tol) {
  require_support(grid, z_, x, y);
  if (static_cast<std::size_t>(full.rows()) != grid.dim(x) || static_cast<std::size_t>(full.cols()) != grid.dim(y)) {
    fail(ErrorKind::DimensionMismatch, "raw block shape does not match dim H_X x dim H_Y");
  }
  double defect = 0.0;
  for (auto axis : z_.axes()) {
    const auto a = unit_vector(grid, axis);
    SparseMatrix d = translate(grid, x, a) * full * SparseMatrix(translate(grid, y, a).adjoint()) - full;
    defect = std::max(defect, max_abs(d));
  }
  SparseMatrix m = full;
  if (defect > tol) {
    if (policy == RawPolicy::reject) {
      fail(ErrorKind::InvarianceViolation, "raw block (" + label(grid, x) + ", " + label(grid, y) +
                                               ") is not invariant under translations in Z=" + label(grid, z_));
    }
    const auto shifts = translations_in(grid, z_);
    SparseMatrix acc(full.rows(), full.cols());
    for (const auto& a : shifts) {
      acc += translate(grid, x, a) * full * SparseMatrix(translate(grid, y, a).adjoint());
    }
    m = acc / static_cast<double>(shifts.size());
  }

  TensorSplit sx(grid, x, z_);
  TensorSplit sy(grid, y, z_);
  bool factorizable = true;
  std::vector<Triplet> t;
  for_each_nonzero(m, [&](Eigen::Index i, Eigen::Index j, cplx v) {
    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(j);
    if (sx.outer(ii) != sy.outer(jj)) {
      if (std::abs(v) > tol) factorizable = false;
      return;
    }
    t.emplace_back(static_cast<int>(sx.inner(ii)), static_cast<int>(sy.inner(jj)),
                   v / static_cast<double>(sx.outer_dim()));
  });
  TermBlock b{x, y, BlockKind::raw, factorizable, {}, {}};
  if (factorizable) {
    b.reduced = SparseMatrix(static_cast<Eigen::Index>(sx.inner_dim()), static_cast<Eigen::Index>(sy.inner_dim()));
    b.reduced.setFromTriplets(t.begin(), t.end());
    b.full = lift(grid, x, y, z_, b.reduced);
  } else {
    b.full = m;
  }
  push(grid, std::move(b));
}

void InteractionTerm::add_factored(const GridSpec& grid, SpaceId x, SpaceId y, BlockKind kind,
                                   SparseMatrix reduced) {
  require_support(grid, z_, x, y);
  TermBlock b{x, y, kind, true, std::move(reduced), {}};
  b.full = lift(grid, x, y, z_, b.reduced);
  push(grid, std::move(b));
}

InteractionTerm InteractionTerm::hermitian_closure() const {
  InteractionTerm out = *this;
  for (const auto& b : blocks_) {
    if (b.row == b.col) continue;
    bool mirrored = std::any_of(blocks_.begin(), blocks_.end(),
                                [&](const TermBlock& o) { return o.row == b.col && o.col == b.row; });
    if (mirrored) continue;
    TermBlock m{b.col, b.row, b.kind, b.factorizable, {}, SparseMatrix(b.full.adjoint())};
    if (b.kind == BlockKind::creation) m.kind = BlockKind::annihilation;
    if (b.kind == BlockKind::annihilation) m.kind = BlockKind::creation;
    if (b.factorizable) m.reduced = SparseMatrix(b.reduced.adjoint());
    m.full.makeCompressed();
    m.reduced.makeCompressed();
    out.blocks_.push_back(std::move(m));
  }
  return out;
}

BlockOperator kinetic(const KineticSpec& spec, const Semilattice& s, const GridSpec& grid) {
  grid.validate();
  auto table = std::make_shared<const SectorTable>(grid, s);
  BlockOperator k(table);
  for (std::size_t i = 0; i < table->size(); ++i) {
    const SpaceId x = (*table)[i].space;
    if (!spec.contains(x)) fail(ErrorKind::ValidationError, "kinetic spec does not cover " + s.label(x));
    k.set_block(i, i, kinetic_block(grid, x, spec.at(x)));
  }
  k.set_hermitian(true);
  k.attach(std::make_shared<const Decomposition>(Decomposition{grid, s, spec, {}}));
  return k;
}

BlockOperator interaction(const InteractionTerm& term, const Semilattice& s, const GridSpec& grid) {
  const SpaceId z = term.z();
  if (!s.contains(z)) fail(ErrorKind::NotAMember, "term support Z=" + s.label(z) + " is not in the semilattice");
  auto table = std::make_shared<const SectorTable>(grid, s);
  BlockOperator op(table);
  const auto& blocks = term.blocks();
  for (const auto& b : blocks) {
    if (!s.contains(b.row) || !s.contains(b.col)) {
      fail(ErrorKind::NotAMember, "block (" + s.label(b.row) + ", " + s.label(b.col) + ") leaves the semilattice");
    }
    require_support(grid, z, b.row, b.col);
  }
  for (const auto& b : blocks) {
    const std::size_t i = table->index_of(b.row);
    const std::size_t j = table->index_of(b.col);
    const double scale = 1.0 + max_abs(b.full);
    if (i == j) {
      SparseMatrix adj = b.full.adjoint();
      if (max_abs(SparseMatrix(b.full - adj)) > 1e-12 * scale) {
        fail(ErrorKind::HermitianClosureViolation, "diagonal block on " + s.label(b.row) + " is not Hermitian");
      }
      op.add_to_block(i, i, SparseMatrix(0.5 * (b.full + adj)));
      continue;
    }
    auto mirror = std::find_if(blocks.begin(), blocks.end(),
                               [&](const TermBlock& o) { return o.row == b.col && o.col == b.row; });
    if (mirror == blocks.end()) {
      fail(ErrorKind::HermitianClosureViolation,
           "block (" + s.label(b.row) + ", " + s.label(b.col) + ") has no adjoint partner");
    }
    SparseMatrix adj = b.full.adjoint();
    if (max_abs(SparseMatrix(mirror->full - adj)) > 1e-12 * scale) {
      fail(ErrorKind::HermitianClosureViolation,
           "block (" + s.label(b.col) + ", " + s.label(b.row) + ") is not the adjoint of its partner");
    }
    // The upper block is the source of truth so that the sum is exactly Hermitian.
    if (i < j) {
      op.add_to_block(i, j, b.full);
      op.add_to_block(j, i, adj);
    }
  }
  op.set_hermitian(true);
  return op;
}

BlockOperator assemble(const BlockOperator& k, std::span<const InteractionTerm> terms) {
  const auto& d = k.decomposition();
  if (!d) fail(ErrorKind::MissingDecomposition, "assemble needs an operator built by kinetic()");
  BlockOperator h = k;
  auto next = std::make_shared<Decomposition>(*d);
  for (const auto& term : terms) {
    BlockOperator i = interaction(term, d->lattice, d->grid);
    if (!(i.sectors() == k.sectors())) fail(ErrorKind::SectorMismatch, "term lives on a different sector table");
    h += i;
    next->terms.push_back(term);
  }
  h.set_hermitian(k.hermitian());
  h.attach(std::move(next));
  return h;
}

BlockOperator build_hamiltonian(const Decomposition& d) {
  return assemble(kinetic(d.kinetic, d.lattice, d.grid), d.terms);
}

BlockOperator pauli_fierz(const BlockOperator& k, const ThetaMap& thetas) {
  const auto& d = k.decomposition();
  if (!d) fail(ErrorKind::MissingDecomposition, "pauli_fierz needs an operator built by kinetic()");
  std::vector<InteractionTerm> terms;
  for (const auto& [pair, theta] : thetas) {
    const auto [x, y] = pair;
    if (!d->lattice.contains(x) || !d->lattice.contains(y)) {
      fail(ErrorKind::NotAMember, "field coupling references a space outside the semilattice");
    }
    InteractionTerm t(y);
    t.add_creation(d->grid, x, y, theta);
    terms.push_back(t.hermitian_closure());
  }
  return assemble(k, terms);
}

double translation_defect(const BlockOperator& op, std::span<const long> a) {
  SparseMatrix u = translate_all(op.sectors(), a);
  SparseMatrix m = op.to_sparse();
  SparseMatrix d = u * m * SparseMatrix(u.adjoint()) - m;
  return max_abs(d);
}

}  // namespace mbspec
