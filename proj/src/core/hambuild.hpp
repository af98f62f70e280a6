#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "core/block_operator.hpp"
#include "core/hspace.hpp"
#include "core/semilattice.hpp"

namespace mbspec {

enum class SymbolKind { discrete_laplacian, tabulated };

// Kinetic energy of one sector: K_X = h_X(P) + e_X.
struct KineticSymbol {
  SymbolKind kind = SymbolKind::discrete_laplacian;
  // One weight per global axis; only the axes of X are read. Empty means all 1.
  std::vector<double> weights;
  // Values over the dual grid of X, row-major in global axis order.
  std::vector<double> table;
  double shift = 0.0;

  double weight(std::size_t axis) const { return weights.empty() ? 1.0 : weights.at(axis); }
};

class KineticSpec {
 public:
  void set(SpaceId x, KineticSymbol symbol) { per_space_.insert_or_assign(x, std::move(symbol)); }
  bool contains(SpaceId x) const { return per_space_.contains(x); }
  const KineticSymbol& at(SpaceId x) const;
  const std::map<SpaceId, KineticSymbol>& entries() const noexcept { return per_space_; }

 private:
  std::map<SpaceId, KineticSymbol> per_space_;
};

// h_X(k) on the dual grid, without the shift.
std::vector<double> symbol_values(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol);
// h_X(P) + e_X in the position basis.
SparseMatrix kinetic_block(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol);
// h_X(P), i.e. Delta_X for the lattice Laplacian.
SparseMatrix free_kinetic_block(const GridSpec& grid, SpaceId x, const KineticSymbol& symbol);

// Symbol of the Y/X factor such that h_Y = h_X (x) 1 + 1 (x) h_{Y/X}; carries e_Y.
// Empty when h_Y does not split this way.
std::optional<KineticSymbol> quotient_symbol(const GridSpec& grid, SpaceId y, const KineticSymbol& sym_y,
                                             SpaceId x, const KineticSymbol& sym_x);

enum class BlockKind { potential, creation, annihilation, kernel, raw };
enum class RawPolicy { reject, symmetrize };

const char* to_string(BlockKind kind) noexcept;

// One coefficient I^Z_{XY} of an interaction term.
struct TermBlock {
  SpaceId row;  // X
  SpaceId col;  // Y
  BlockKind kind = BlockKind::kernel;
  bool factorizable = true;
  // I^Z_{XY} : H_{Y/Z} -> H_{X/Z}. Only meaningful when factorizable.
  SparseMatrix reduced;
  // 1_Z (x) I^Z_{XY} : H_Y -> H_X.
  SparseMatrix full;
};

// I(Z) = 1_Z (x) I^Z, supported by H_{>=Z}.
class InteractionTerm {
 public:
  explicit InteractionTerm(SpaceId z) : z_(z) {}

  SpaceId z() const noexcept { return z_; }
  const std::vector<TermBlock>& blocks() const noexcept { return blocks_; }

  // Multiplication by v o pi on H_X, v given over X/Z.
  void add_potential(const GridSpec& grid, SpaceId x, std::span<const double> v);
  // u -> (F u) (x) theta from H_{Y/Z} to H_{X/Z}; F defaults to the identity.
  void add_creation(const GridSpec& grid, SpaceId x, SpaceId y, const Vector& theta,
                    const DenseMatrix* factor = nullptr);
  void add_kernel(const GridSpec& grid, SpaceId x, SpaceId y, const DenseMatrix& kernel,
                  std::size_t max_dense = 4096);
  // A full H_Y -> H_X matrix declared with this Z. Checked for Z-invariance and
  // factored through 1_Z when possible.
  void add_raw(const GridSpec& grid, SpaceId x, SpaceId y, const SparseMatrix& full, RawPolicy policy,
               double tol = 1e-10);

  // Block given directly by its reduced coefficient I^Z_{XY}.
  void add_factored(const GridSpec& grid, SpaceId x, SpaceId y, BlockKind kind, SparseMatrix reduced);

  // Copy with adjoint blocks added for every off-diagonal block without a mirror.
  InteractionTerm hermitian_closure() const;

 private:
  void push(const GridSpec& grid, TermBlock block);

  SpaceId z_;
  std::vector<TermBlock> blocks_;
};

// Everything needed to rebuild H = K + sum_Z I(Z) and its graded pieces.
struct Decomposition {
  GridSpec grid;
  Semilattice lattice;
  KineticSpec kinetic;
  std::vector<InteractionTerm> terms;
};

// Full blocks, in the sector coordinates of H_X and H_Y.
SparseMatrix potential(const GridSpec& grid, SpaceId x, SpaceId z, std::span<const double> v);
SparseMatrix create(const GridSpec& grid, SpaceId x, SpaceId y, const Vector& theta);
SparseMatrix lift(const GridSpec& grid, SpaceId x, SpaceId y, SpaceId z, const SparseMatrix& reduced);

BlockOperator kinetic(const KineticSpec& spec, const Semilattice& s, const GridSpec& grid);
BlockOperator interaction(const InteractionTerm& term, const Semilattice& s, const GridSpec& grid);
BlockOperator assemble(const BlockOperator& k, std::span<const InteractionTerm> terms);
BlockOperator build_hamiltonian(const Decomposition& d);

using ThetaMap = std::map<std::pair<SpaceId, SpaceId>, Vector>;
// K + phi(theta) with phi_{XY} = a*(theta_{XY}) for X > Y and adjoints below.
BlockOperator pauli_fierz(const BlockOperator& k, const ThetaMap& thetas);

// Largest entry of U_a I U_a* - I, with U_a block diagonal over the sectors.
double translation_defect(const BlockOperator& op, std::span<const long> a);

}  // namespace mbspec
