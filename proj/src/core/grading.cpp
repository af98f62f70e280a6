#include "core/grading.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace mbspec {

namespace {

const Decomposition& decomposition_of(const BlockOperator& h) {
  if (!h.decomposition()) {
    fail(ErrorKind::MissingDecomposition, "operator carries no term decomposition");
  }
  return *h.decomposition();
}

}  // namespace

BlockOperator project_geq(const BlockOperator& h, SpaceId x) {
  const auto& d = decomposition_of(h);
  Decomposition sub{d.grid, d.lattice.filter_geq(x), {}, {}};
  for (auto y : sub.lattice.members()) sub.kinetic.set(y, d.kinetic.at(y));
  for (const auto& term : d.terms) {
    if (x.subset_of(term.z())) sub.terms.push_back(term);
  }
  return build_hamiltonian(sub);
}

BlockOperator reduced(const BlockOperator& h, SpaceId x) {
  const auto& d = decomposition_of(h);
  Quotient q = quotient(d.lattice, x);
  const auto& sym_x = d.kinetic.at(x);
  Decomposition out{d.grid, q.lattice, {}, {}};
  for (auto y : q.preimage) {
    auto sym = quotient_symbol(d.grid, y, d.kinetic.at(y), x, sym_x);
    if (!sym) {
      fail(ErrorKind::NonFactorizableTerm,
           "kinetic symbol of " + d.lattice.label(y) + " does not split over " + d.lattice.label(x));
    }
    out.kinetic.set(axis_difference(y, x), std::move(*sym));
  }
  for (const auto& term : d.terms) {
    if (!x.subset_of(term.z())) continue;
    InteractionTerm t(axis_difference(term.z(), x));
    for (const auto& b : term.blocks()) {
      if (!b.factorizable) {
        fail(ErrorKind::NonFactorizableTerm, "block (" + d.lattice.label(b.row) + ", " + d.lattice.label(b.col) +
                                                 ") of term Z=" + d.lattice.label(term.z()) +
                                                 " does not factor through 1_Z");
      }
      t.add_factored(d.grid, axis_difference(b.row, x), axis_difference(b.col, x), b.kind, b.reduced);
    }
    out.terms.push_back(std::move(t));
  }
  return build_hamiltonian(out);
}

BlockOperator restrict_to(const BlockOperator& h, std::span<const SpaceId> t) {
  if (t.empty()) fail(ErrorKind::EmptySubset, "restriction needs a nonempty subfamily");
  const auto& table = h.sectors();
  std::vector<std::size_t> kept;
  for (auto x : t) {
    const std::size_t i = table.index_of(x);
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<SpaceId> spaces;
  for (auto i : kept) spaces.push_back(table[i].space);
  auto sub = std::make_shared<const SectorTable>(table.grid(), spaces);
  BlockOperator out(sub);
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = 0; b < kept.size(); ++b) {
      if (const auto* m = h.block(kept[a], kept[b])) out.set_block(a, b, *m);
    }
  }
  out.set_hermitian(h.hermitian());
  return out;
}

SparseMatrix free_laplacian(const BlockOperator& h, SpaceId x) {
  const auto& d = decomposition_of(h);
  if (!d.lattice.contains(x)) fail(ErrorKind::NotAMember, d.lattice.label(x) + " is not a member");
  return free_kinetic_block(d.grid, x, d.kinetic.at(x));
}

BlockOperator kron_sum(const GridSpec& grid, SpaceId x, const SparseMatrix& delta_x, const BlockOperator& r) {
  const auto dx = grid.dim(x);
  if (static_cast<std::size_t>(delta_x.rows()) != dx || static_cast<std::size_t>(delta_x.cols()) != dx) {
    fail(ErrorKind::DimensionMismatch, "Delta_X does not act on H_X");
  }
  const auto& rt = r.sectors();
  std::vector<SpaceId> spaces;
  for (const auto& s : rt.sectors()) {
    if (s.space.mask() & x.mask()) fail(ErrorKind::InvalidArgument, "quotient sector overlaps X");
    spaces.push_back(axis_union(s.space, x));
  }
  auto table = std::make_shared<const SectorTable>(grid, spaces);
  BlockOperator out(table);
  std::vector<TensorSplit> splits;
  splits.reserve(spaces.size());
  for (auto y : spaces) splits.emplace_back(grid, y, x);

  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto& sp = splits[i];
    std::vector<Triplet> t;
    for (int k = 0; k < delta_x.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(delta_x, k); it; ++it) {
        for (std::size_t q = 0; q < sp.inner_dim(); ++q) {
          t.emplace_back(static_cast<int>(sp.join(static_cast<std::size_t>(it.row()), q)),
                         static_cast<int>(sp.join(static_cast<std::size_t>(it.col()), q)), it.value());
        }
      }
    }
    SparseMatrix m(static_cast<Eigen::Index>(sp.size()), static_cast<Eigen::Index>(sp.size()));
    m.setFromTriplets(t.begin(), t.end());
    out.add_to_block(i, i, m);
  }
  for (const auto& [key, b] : r.blocks()) {
    const auto& si = splits[key.first];
    const auto& sj = splits[key.second];
    std::vector<Triplet> t;
    for (int k = 0; k < b.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
        for (std::size_t o = 0; o < dx; ++o) {
          t.emplace_back(static_cast<int>(si.join(o, static_cast<std::size_t>(it.row()))),
                         static_cast<int>(sj.join(o, static_cast<std::size_t>(it.col()))), it.value());
        }
      }
    }
    SparseMatrix m(static_cast<Eigen::Index>(si.size()), static_cast<Eigen::Index>(sj.size()));
    m.setFromTriplets(t.begin(), t.end());
    out.add_to_block(key.first, key.second, m);
  }
  out.set_hermitian(r.hermitian());
  return out;
}

}  // namespace mbspec
