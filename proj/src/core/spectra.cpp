#include "core/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/grading.hpp"
#include "core/pool.hpp"

namespace mbspec {

std::size_t dense_cap_from_env(std::size_t configured) {
  const char* env = std::getenv("MBSPEC_DENSE_CAP");
  if (!env || !*env) return configured;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) {
    fail(ErrorKind::InvalidArgument, std::string("MBSPEC_DENSE_CAP is not a positive integer: ") + env);
  }
  return static_cast<std::size_t>(v);
}

namespace {

void require_square(const SparseMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "operator is not square");
}

DenseMatrix hermitian_part(const DenseMatrix& m) { return 0.5 * (m + m.adjoint()); }

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = cplx{re, im};
  }
  return v;
}

// Krylov basis with its images kept side by side.
struct KrylovBasis {
  DenseMatrix v;
  DenseMatrix av;
  Eigen::Index used = 0;
};

// Orthonormalizes w against the basis (two Gram-Schmidt passes) and appends it.
// Columns that collapse are replaced by random directions.
bool append_column(KrylovBasis& basis, const SparseMatrix& a, Vector w, std::mt19937_64& rng) {
  const Eigen::Index n = basis.v.rows();
  if (basis.used >= n || basis.used >= basis.v.cols()) return false;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double before = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.used > 0) {
        auto q = basis.v.leftCols(basis.used);
        w -= q * (q.adjoint() * w);
      }
    }
    const double after = w.norm();
    if (after > 1e-10 * before && after > std::numeric_limits<double>::min()) {
      basis.v.col(basis.used) = w / after;
      basis.av.col(basis.used) = a * basis.v.col(basis.used);
      ++basis.used;
      return true;
    }
    w = random_vector(rng, n);
  }
  return false;
}

}  // namespace

SpectrumResult eig_dense(const SparseMatrix& a, const SolverOptions& opts) {
  require_square(a);
  const auto n = static_cast<std::size_t>(a.rows());
  if (n > opts.dense_cap) {
    fail(ErrorKind::DimensionCap,
         "dimension " + std::to_string(n) + " exceeds the dense cap " + std::to_string(opts.dense_cap));
  }
  SpectrumResult r;
  r.method = "dense";
  if (n == 0) return r;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(hermitian_part(DenseMatrix(a)), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "dense Hermitian eigensolver failed");
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return r;
}

SpectrumResult eig_dense(const BlockOperator& a, const SolverOptions& opts) {
  return eig_dense(a.to_sparse(), opts);
}

SpectrumResult eig_low(const SparseMatrix& a, std::size_t k, const SolverOptions& opts) {
  require_square(a);
  if (k == 0) fail(ErrorKind::InvalidArgument, "eig_low needs k >= 1");
  const auto n = static_cast<std::size_t>(a.rows());
  SpectrumResult result;
  result.method = "iterative";
  if (n == 0) return result;
  k = std::min(k, n);
  const std::size_t block = k;
  std::size_t m = opts.max_basis ? opts.max_basis : std::max<std::size_t>(4 * k + 20, 60);
  m = std::min(n, std::max(m, k + 2 * block));
  const std::size_t keep = std::min(m - std::min(m, block), 2 * k);

  std::mt19937_64 rng(opts.seed);
  KrylovBasis basis{DenseMatrix(a.rows(), static_cast<Eigen::Index>(m)),
                    DenseMatrix(a.rows(), static_cast<Eigen::Index>(m)), 0};
  DenseMatrix w(a.rows(), static_cast<Eigen::Index>(block));
  for (std::size_t j = 0; j < block; ++j) w.col(static_cast<Eigen::Index>(j)) = random_vector(rng, a.rows());

  const auto kk = static_cast<Eigen::Index>(k);
  double worst = 0.0;
  for (std::size_t cycle = 0; cycle <= opts.max_restarts; ++cycle) {
    while (basis.used < static_cast<Eigen::Index>(m)) {
      const Eigen::Index first = basis.used;
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (!append_column(basis, a, w.col(j), rng)) break;
      }
      if (basis.used == first) break;
      w = basis.av.middleCols(first, basis.used - first);
    }

    const Eigen::Index c = basis.used;
    auto q = basis.v.leftCols(c);
    auto aq = basis.av.leftCols(c);
    DenseMatrix t = hermitian_part(q.adjoint() * aq);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(t);
    if (es.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "Rayleigh-Ritz eigensolver failed");
    const auto& theta = es.eigenvalues();
    const DenseMatrix& y = es.eigenvectors();

    const Eigen::Index want = std::min(kk, c);
    DenseMatrix x = q * y.leftCols(want);
    DenseMatrix ax = aq * y.leftCols(want);
    DenseMatrix res = ax - x * theta.head(want).cast<cplx>().asDiagonal();
    const double scale = std::max(std::abs(theta[0]), std::abs(theta[c - 1]));
    bool done = static_cast<std::size_t>(c) == n;
    worst = 0.0;
    std::vector<double> norms(static_cast<std::size_t>(want));
    for (Eigen::Index i = 0; i < want; ++i) {
      norms[static_cast<std::size_t>(i)] = res.col(i).norm();
      worst = std::max(worst, norms[static_cast<std::size_t>(i)]);
    }
    if (worst <= opts.residual_tol * scale || worst == 0.0) done = true;
    if (done) {
      result.eigenvalues.assign(theta.data(), theta.data() + want);
      result.residuals = std::move(norms);
      return result;
    }

    // Thick restart: keep the lowest Ritz pairs and continue from their residuals.
    const auto p = static_cast<Eigen::Index>(std::min<std::size_t>(keep, static_cast<std::size_t>(c)));
    DenseMatrix nv = q * y.leftCols(p);
    DenseMatrix nav = aq * y.leftCols(p);
    basis.v.leftCols(p) = nv;
    basis.av.leftCols(p) = nav;
    basis.used = p;
    w = res;
  }
  fail(ErrorKind::NoConvergence, "block Lanczos did not converge after " + std::to_string(opts.max_restarts) +
                                     " restarts (worst residual " + std::to_string(worst) + ")");
}

SpectrumResult eig_low(const BlockOperator& a, std::size_t k, const SolverOptions& opts) {
  return eig_low(a.to_sparse(), k, opts);
}

SpectralRange spectral_range(const SparseMatrix& a, const SolverOptions& opts) {
  require_square(a);
  if (a.rows() == 0) fail(ErrorKind::InvalidArgument, "spectral range of an empty operator");
  if (static_cast<std::size_t>(a.rows()) <= opts.dense_cap) {
    auto r = eig_dense(a, opts);
    return {r.eigenvalues.front(), r.eigenvalues.back()};
  }
  const double lo = eig_low(a, 1, opts).eigenvalues.front();
  SparseMatrix neg = -a;
  const double hi = -eig_low(neg, 1, opts).eigenvalues.front();
  return {lo, hi};
}

HvzResult hvz(const BlockOperator& h, const SolverOptions& opts) {
  if (!h.decomposition()) fail(ErrorKind::MissingDecomposition, "hvz needs the term decomposition of H");
  const auto& d = *h.decomposition();
  HvzResult out;
  out.contains_trivial = d.lattice.contains_trivial();
  if (!out.contains_trivial) {
    const SpaceId e = d.lattice.least();
    const auto r = spectral_range(reduced(h, e).to_sparse(), opts);
    const auto sym = symbol_values(d.grid, e, d.kinetic.at(e));
    const auto [lo, hi] = std::minmax_element(sym.begin(), sym.end());
    out.tau = r.inf + *lo;
    out.per_atom.push_back({e, out.tau, r.sup + *hi});
    out.mode = "Sp=Sp_ess";
    return out;
  }
  const auto atoms = d.lattice.atoms();
  out.per_atom.resize(atoms.size());
  run_pool(atoms.size(), opts.workers, [&](std::size_t i) {
    const auto r = spectral_range(project_geq(h, atoms[i]).to_sparse(), opts);
    out.per_atom[i] = {atoms[i], r.inf, r.sup};
  });
  out.tau = std::numeric_limits<double>::infinity();
  for (const auto& a : out.per_atom) out.tau = std::min(out.tau, a.inf);
  out.mode = atoms.empty() ? "Sp_ess=empty" : "Sp_ess=[tau,inf)";
  return out;
}

AssemblyDiagnostics assembly_diagnostics(const BlockOperator& h, const SolverOptions& opts) {
  if (!h.decomposition()) fail(ErrorKind::MissingDecomposition, "diagnostics need the term decomposition of H");
  const auto& d = *h.decomposition();
  AssemblyDiagnostics out;
  const SparseMatrix hm = h.to_sparse();
  const SparseMatrix km = kinetic(d.kinetic, d.lattice, d.grid).to_sparse();
  out.lambda_min = spectral_range(hm, opts).inf;
  const SparseMatrix im = hm - km;
  const auto ir = spectral_range(im, opts);
  const auto kr = spectral_range(km, opts);
  const double inorm = std::max(std::abs(ir.inf), std::abs(ir.sup));
  const double knorm = std::max(std::abs(kr.inf + 1.0), std::abs(kr.sup + 1.0));
  out.interaction_ratio = knorm > 0 ? inorm / knorm : std::numeric_limits<double>::infinity();

  const auto& table = h.sectors();
  SparseMatrix id(hm.rows(), hm.cols());
  id.setIdentity();
  for (const auto& term : d.terms) {
    const SparseMatrix op = interaction(term, d.lattice, d.grid).to_sparse();
    for (std::size_t axis = 0; axis < d.grid.universe().size(); ++axis) {
      if (term.z().has_axis(axis)) continue;
      std::vector<long> k(d.grid.universe().size(), 0);
      k[axis] = 1;
      const SparseMatrix a = op * (modulate_all(table, k) - id);
      const SparseMatrix gram = SparseMatrix(a.adjoint()) * a;
      const double top = spectral_range(gram, opts).sup;
      out.modulation.push_back({term.z(), axis, std::sqrt(std::max(top, 0.0))});
    }
  }
  return out;
}

const char* to_string(ProbeFunction f) noexcept {
  return f == ProbeFunction::resolvent ? "resolvent" : "gaussian";
}

namespace {

const cplx kProbeZ{0.0, 1.0};

// phi(A) applied to vectors, either through a dense eigendecomposition or a sparse LU.
class FunctionalCalculus {
 public:
  FunctionalCalculus(const SparseMatrix& a, ProbeFunction phi, const SolverOptions& opts) : phi_(phi) {
    if (static_cast<std::size_t>(a.rows()) <= opts.dense_cap) {
      dense_ = true;
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(hermitian_part(DenseMatrix(a)));
      if (es.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "dense Hermitian eigensolver failed");
      q_ = es.eigenvectors();
      f_.resize(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < f_.size(); ++i) f_[i] = apply_scalar(es.eigenvalues()[i]);
      return;
    }
    if (phi != ProbeFunction::resolvent) {
      fail(ErrorKind::DimensionCap, "gaussian probe needs dense functional calculus; dimension " +
                                        std::to_string(a.rows()) + " exceeds the cap");
    }
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    shifted_ = a - kProbeZ * id;
    shifted_.makeCompressed();
    lu_.compute(shifted_);
    if (lu_.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "sparse LU of H - z failed");
  }

  Vector operator()(const Vector& v) const {
    if (dense_) return q_ * (f_.asDiagonal() * (q_.adjoint() * v));
    Vector out = lu_.solve(v);
    return out;
  }

 private:
  cplx apply_scalar(double lambda) const {
    if (phi_ == ProbeFunction::resolvent) return 1.0 / (lambda - kProbeZ);
    return {std::exp(-lambda * lambda), 0.0};
  }

  ProbeFunction phi_;
  bool dense_ = false;
  DenseMatrix q_;
  Vector f_;
  SparseMatrix shifted_;
  Eigen::SparseLU<SparseMatrix> lu_;
};

}  // namespace

std::vector<double> localization_profile(const BlockOperator& h, SpaceId x, ProbeFunction phi, const Vector& psi,
                                         std::span<const std::vector<long>> shifts, const SolverOptions& opts) {
  const BlockOperator hx = project_geq(h, x);
  const auto& full = h.sectors();
  const auto& sub = hx.sectors();
  if (static_cast<std::size_t>(psi.size()) != sub.total_dim()) {
    fail(ErrorKind::DimensionMismatch, "probe state must live on the sectors of S_{>=X}");
  }
  const double nrm = psi.norm();
  if (!(nrm > 0)) fail(ErrorKind::InvalidArgument, "probe state is zero");
  const Vector unit = psi / nrm;

  // Pi_{>=X} as an index map from sub sectors into H_S.
  std::vector<Eigen::Index> into(sub.total_dim());
  for (const auto& s : sub.sectors()) {
    const auto& f = full[full.index_of(s.space)];
    for (std::size_t i = 0; i < s.dim; ++i) into[s.offset + i] = static_cast<Eigen::Index>(f.offset + i);
  }

  FunctionalCalculus whole(h.to_sparse(), phi, opts);
  FunctionalCalculus part(hx.to_sparse(), phi, opts);
  std::vector<double> out;
  out.reserve(shifts.size());
  for (const auto& a : shifts) {
    const Vector u = translate_all(sub, a) * unit;
    Vector big = Vector::Zero(static_cast<Eigen::Index>(full.total_dim()));
    for (Eigen::Index i = 0; i < u.size(); ++i) big[into[static_cast<std::size_t>(i)]] = u[i];
    const Vector left_big = whole(big);
    Vector left(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) left[i] = left_big[into[static_cast<std::size_t>(i)]];
    out.push_back((left - part(u)).norm());
  }
  return out;
}

double localization_probe(const BlockOperator& h, SpaceId x, ProbeFunction phi, const Vector& psi,
                          std::span<const long> a, const SolverOptions& opts) {
  std::vector<std::vector<long>> one{std::vector<long>(a.begin(), a.end())};
  return localization_profile(h, x, phi, psi, one, opts).front();
}

}  // namespace mbspec
