#include "core/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <limits>

#include "core/error.hpp"

namespace mbspec {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(ErrorKind::ParseError, "not a number: " + s);
  }
  if (!j.is_number()) fail(ErrorKind::ParseError, "expected a number");
  return j.get<double>();
}

void write_state_csv(std::ostream& os, const StateVector& v) {
  const auto& t = v.table();
  for (const auto& s : t.sectors()) {
    os << "# sector," << space_label(s.space, t.grid().universe()) << ',' << s.offset << ',' << s.dim << '\n';
  }
  for (Eigen::Index i = 0; i < v.coefficients().size(); ++i) {
    os << format_double(v.coefficients()[i].real()) << ',' << format_double(v.coefficients()[i].imag()) << '\n';
  }
}

StateVector read_state_csv(std::istream& is, std::shared_ptr<const SectorTable> table) {
  std::string line;
  std::size_t sector = 0;
  std::vector<cplx> values;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("# sector,", 0) == 0) {
      std::stringstream ss(line.substr(9));
      std::string label, offset, dim;
      std::getline(ss, label, ',');
      std::getline(ss, offset, ',');
      std::getline(ss, dim, ',');
      if (sector >= table->size()) fail(ErrorKind::ParseError, "state file has more sectors than the model");
      const auto& s = (*table)[sector];
      if (label != space_label(s.space, table->grid().universe()) || std::stoull(offset) != s.offset ||
          std::stoull(dim) != s.dim) {
        fail(ErrorKind::SectorMismatch, "state file sector " + label + " does not match the model");
      }
      ++sector;
      continue;
    }
    if (line.front() == '#') continue;
    const auto comma = line.find(',');
    try {
      const double re = std::stod(line.substr(0, comma));
      const double im = comma == std::string::npos ? 0.0 : std::stod(line.substr(comma + 1));
      values.emplace_back(re, im);
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, "state file line " + std::to_string(lineno) + " is not 're,im'");
    }
  }
  if (sector != 0 && sector != table->size()) fail(ErrorKind::SectorMismatch, "state file misses sectors");
  Vector c(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) c[static_cast<Eigen::Index>(i)] = values[i];
  return StateVector(std::move(table), std::move(c));
}

void write_operator_coo(std::ostream& os, const BlockOperator& a) {
  SparseMatrix m = a.to_sparse();
  SparseMatrix::StorageIndex nnz = 0;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, cplx>> entries;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      entries.emplace_back(it.row(), it.col(), it.value());
      ++nnz;
    }
  }
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
  });
  os << "# dim " << m.rows() << " nnz " << nnz << '\n';
  for (const auto& [r, c, v] : entries) {
    os << r << ' ' << c << ' ' << format_double(v.real()) << ' ' << format_double(v.imag()) << '\n';
  }
}

void write_operator_dense_csv(std::ostream& os, const BlockOperator& a, std::size_t cap) {
  if (a.dimension() > cap) fail(ErrorKind::DimensionCap, "dense dump exceeds the dense cap");
  DenseMatrix m = a.to_dense();
  for (int part = 0; part < 2; ++part) {
    os << (part == 0 ? "# real\n" : "# imag\n");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) os << ',';
        os << format_double(part == 0 ? m(i, j).real() : m(i, j).imag());
      }
      os << '\n';
    }
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
  os << "index,eigenvalue,residual\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    os << i << ',' << format_double(r.eigenvalues[i]) << ',';
    if (i < r.residuals.size()) os << format_double(r.residuals[i]);
    os << '\n';
  }
}

json to_json(const SpectrumResult& r) {
  json j;
  j["method"] = r.method;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  return j;
}

json to_json(const HvzResult& r, const AxisUniverse& universe) {
  json j;
  j["tau"] = number(r.tau);
  j["mode"] = r.mode;
  j["contains_trivial"] = r.contains_trivial;
  json atoms = json::array();
  for (const auto& a : r.per_atom) {
    atoms.push_back({{"space", space_label(a.atom, universe)}, {"inf", number(a.inf)}, {"sup", number(a.sup)}});
  }
  j["per_atom"] = std::move(atoms);
  return j;
}

json to_json(const ThresholdData& t, const AxisUniverse& universe) {
  json j;
  json per = json::array();
  for (const auto& [x, ev] : t.per_space) {
    per.push_back({{"space", space_label(x, universe)}, {"eigenvalues", ev.points()}});
  }
  j["per_space"] = std::move(per);
  j["tau"] = t.tau.points();
  j["mu"] = t.mu.points();
  j["flagged_thresholds"] = t.flagged;
  j["spectrum_computed"] = t.spectrum_computed;
  j["rho_hat_breakpoints"] = t.tau.points();
  return j;
}

}  // namespace mbspec
