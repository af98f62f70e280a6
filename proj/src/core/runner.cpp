#include "core/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/grading.hpp"

#ifndef MBSPEC_VERSION
#define MBSPEC_VERSION "0.0.0"
#endif

namespace mbspec {

Session::Session(ModelSpec spec) : spec_(std::move(spec)), solver_(spec_.solver.options) {}

const BlockOperator& Session::hamiltonian() {
  if (!h_) h_.emplace(build_hamiltonian(spec_.model));
  return *h_;
}

const ThresholdData& Session::threshold_data() {
  if (!thresholds_) thresholds_.emplace(thresholds(hamiltonian(), solver_, spec_.solver.mu_tol, spec_.solver.dedup_tol));
  return *thresholds_;
}

const HvzResult& Session::hvz_result() {
  if (!hvz_) hvz_.emplace(hvz(hamiltonian(), solver_));
  return *hvz_;
}

RecursiveRhoHat Session::recursion() { return rho_hat_recursive(spec_.model.lattice, threshold_data()); }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "spectrum", "hvz", "thresholds", "rho", "probe", "report"};
  return names;
}

bool is_command(const std::string& name) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

json header(const Session& s, const std::string& command) {
  return {{"tool", "mbspec"}, {"version", MBSPEC_VERSION}, {"command", command},
          {"config_hash", s.spec().config_hash}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string hash_line(const Session& s) { return "# config_hash=" + s.spec().config_hash + "\n"; }

std::string format_of(const Session& s, const RunOptions& opts) {
  const std::string f = opts.format.value_or(s.spec().outputs.format);
  if (f != "json" && f != "csv") fail(ErrorKind::InvalidArgument, "format must be json or csv");
  return f;
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') out += c;
    else if (c == ',') out += '_';
  }
  return out.empty() ? "O" : out;
}

std::vector<double> lambda_points(Session& s, const RunOptions& opts) {
  if (opts.lambda_grid) return LambdaGrid::parse(*opts.lambda_grid).points();
  if (s.spec().outputs.lambda_grid) return s.spec().outputs.lambda_grid->points();
  const auto& td = s.threshold_data();
  std::vector<double> all = td.tau.points();
  all.insert(all.end(), td.mu.points().begin(), td.mu.points().end());
  double lo = -1.0, hi = 5.0;
  if (!all.empty()) {
    lo = std::floor(*std::min_element(all.begin(), all.end())) - 1.0;
    hi = std::ceil(*std::max_element(all.begin(), all.end())) + 1.0;
  }
  return LambdaGrid{lo, hi, 0.01}.points();
}

void cmd_validate(Session& s, const RunOptions& opts) {
  const auto& spec = s.spec();
  const auto& d = spec.model;
  const auto& u = s.universe();
  json j = header(s, "validate");
  j["valid"] = true;
  const auto& h = s.hamiltonian();
  j["dimension"] = h.dimension();

  json lat;
  json members = json::array();
  for (auto x : d.lattice.members()) members.push_back(space_label(x, u));
  lat["members"] = std::move(members);
  lat["contains_trivial"] = d.lattice.contains_trivial();
  lat["least"] = space_label(d.lattice.least(), u);
  json atoms = json::array();
  for (auto x : d.lattice.atoms()) atoms.push_back(space_label(x, u));
  lat["atoms"] = std::move(atoms);
  lat["depth"] = d.lattice.depth();
  j["semilattice"] = std::move(lat);

  json sectors = json::array();
  for (const auto& sec : h.sectors().sectors()) {
    sectors.push_back({{"space", space_label(sec.space, u)}, {"offset", sec.offset}, {"dim", sec.dim}});
  }
  j["sectors"] = std::move(sectors);

  json terms = json::array();
  for (const auto& t : d.terms) {
    json tj;
    tj["Z"] = space_label(t.z(), u);
    json blocks = json::array();
    for (const auto& b : t.blocks()) {
      blocks.push_back({{"X", space_label(b.row, u)},
                        {"Y", space_label(b.col, u)},
                        {"kind", to_string(b.kind)},
                        {"factorizable", b.factorizable}});
    }
    tj["blocks"] = std::move(blocks);
    const BlockOperator op = interaction(t, d.lattice, d.grid);
    double defect = 0.0;
    for (auto axis : t.z().axes()) {
      std::vector<long> a(u.size(), 0);
      a[axis] = 1;
      defect = std::max(defect, translation_defect(op, a));
    }
    tj["translation_defect"] = defect;
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  j["hermiticity_defect"] = hermiticity_defect(h);

  if (h.dimension() <= s.solver().dense_cap) {
    const auto diag = assembly_diagnostics(h, s.solver());
    json dj;
    dj["lambda_min"] = diag.lambda_min;
    dj["interaction_ratio"] = number(diag.interaction_ratio);
    json mods = json::array();
    for (const auto& m : diag.modulation) {
      mods.push_back({{"Z", space_label(m.z, u)}, {"axis", u.label(m.axis)}, {"defect", m.defect}});
    }
    dj["modulation"] = std::move(mods);
    j["diagnostics"] = std::move(dj);
  } else {
    j["diagnostics"] = {{"skipped", "dimension exceeds the dense cap"}};
  }
  write_json(opts.out_dir / "validate.json", j);
}

void cmd_spectrum(Session& s, const RunOptions& opts) {
  const auto& d = s.spec().model;
  const auto& u = s.universe();
  const bool csv = format_of(s, opts) == "csv";
  json j = header(s, "spectrum");
  json ops = json::array();
  auto emit = [&](const std::string& name, const std::string& stem, const BlockOperator& op) {
    SpectrumResult r = op.dimension() <= s.solver().dense_cap
                           ? eig_dense(op, s.solver())
                           : eig_low(op, s.spec().solver.lanczos_k, s.solver());
    json oj = to_json(r);
    oj["name"] = name;
    oj["dimension"] = op.dimension();
    if (csv) {
      std::ostringstream os;
      os << hash_line(s);
      write_spectrum_csv(os, r);
      const std::string file = "spectrum_" + stem + ".csv";
      write_text(opts.out_dir / file, os.str());
      oj["csv"] = file;
    }
    ops.push_back(std::move(oj));
  };
  emit("H", "H", s.hamiltonian());
  for (auto x : d.lattice.members()) {
    if (x.is_trivial()) continue;
    const std::string label = space_label(x, u);
    emit("H_S/" + label, "S_over_" + file_stem(label), reduced(s.hamiltonian(), x));
  }
  j["operators"] = std::move(ops);
  if (s.spec().outputs.dump_operators) {
    std::ostringstream os;
    os << hash_line(s);
    write_operator_coo(os, s.hamiltonian());
    write_text(opts.out_dir / "H.coo", os.str());
    j["operator_dump"] = "H.coo";
  }
  write_json(opts.out_dir / "spectrum.json", j);
}

void cmd_hvz(Session& s, const RunOptions& opts) {
  const auto& r = s.hvz_result();
  json j = header(s, "hvz");
  j.update(to_json(r, s.universe()));
  if (r.per_atom.empty()) {
    j["essential_spectrum"] = json::array();
  } else {
    j["essential_spectrum"] = json::array({number(r.tau), "+inf"});
  }
  write_json(opts.out_dir / "hvz.json", j);
  if (format_of(s, opts) == "csv") {
    std::ostringstream os;
    os << hash_line(s) << "atom,inf,sup\n";
    for (const auto& a : r.per_atom) {
      os << space_label(a.atom, s.universe()) << ',' << format_double(a.inf) << ',' << format_double(a.sup) << '\n';
    }
    write_text(opts.out_dir / "hvz.csv", os.str());
  }
}

void write_rho_hat_tsv(Session& s, const RunOptions& opts, const std::vector<double>& grid) {
  const auto& td = s.threshold_data();
  std::ostringstream os;
  os << hash_line(s) << "lambda\trho_hat\n";
  for (double l : grid) os << format_double(l) << '\t' << format_double(rho_hat(td.tau, l)) << '\n';
  write_text(opts.out_dir / "rho_hat.tsv", os.str());
}

void cmd_thresholds(Session& s, const RunOptions& opts) {
  const auto& td = s.threshold_data();
  json j = header(s, "thresholds");
  j.update(to_json(td, s.universe()));
  j["mode"] = s.spec().model.lattice.contains_trivial() ? "tau=union ev(H_S/X), X!=O" : "tau=union ev(H_S/X), X in S";
  write_json(opts.out_dir / "thresholds.json", j);
  write_rho_hat_tsv(s, opts, lambda_points(s, opts));
}

void cmd_rho(Session& s, const RunOptions& opts) {
  cmd_thresholds(s, opts);
  const auto& td = s.threshold_data();
  const auto grid = lambda_points(s, opts);
  const RecursiveRhoHat rec = s.recursion();
  std::ostringstream os;
  os << hash_line(s) << "lambda\trho_hat\trho\n";
  double worst = 0.0;
  for (double l : grid) {
    const double closed = rho_hat(td.tau, l);
    const double recursive = rec(l);
    if (std::isinf(closed) || std::isinf(recursive)) {
      if (closed != recursive) worst = std::numeric_limits<double>::infinity();
    } else {
      worst = std::max(worst, std::abs(closed - recursive));
    }
    os << format_double(l) << '\t' << format_double(closed) << '\t' << format_double(rho(td.tau, td.mu, l)) << '\n';
  }
  write_text(opts.out_dir / "rho.tsv", os.str());

  // {rho_hat <= 0} must be tau: check the points of tau and the midpoints between them.
  bool zero_set_ok = true;
  const auto& pts = td.tau.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (rho_hat(td.tau, pts[i]) > 0) zero_set_ok = false;
    if (i + 1 < pts.size() && rho_hat(td.tau, 0.5 * (pts[i] + pts[i + 1])) <= 0) zero_set_ok = false;
  }
  json j = header(s, "rho");
  j["grid_points"] = grid.size();
  j["grid_start"] = grid.empty() ? 0.0 : grid.front();
  j["grid_stop"] = grid.empty() ? 0.0 : grid.back();
  j["recursion_max_abs_diff"] = number(worst);
  j["nonpositive_set_is_tau"] = zero_set_ok;
  write_json(opts.out_dir / "rho.json", j);
}

void cmd_probe(Session& s, const RunOptions& opts) {
  const auto& probe = s.spec().probe;
  if (!probe) fail(ErrorKind::ValidationError, "/probe: config has no probe section");
  const auto& u = s.universe();
  const auto residuals =
      localization_profile(s.hamiltonian(), probe->atom, probe->phi, probe->psi, probe->shifts, s.solver());
  std::ostringstream os;
  os << hash_line(s) << "shift_norm";
  for (std::size_t a = 0; a < u.size(); ++a) os << "\ta_" << u.label(a);
  os << "\tresidual\n";
  json shifts = json::array();
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const auto& a = probe->shifts[i];
    double norm = 0.0;
    for (long c : a) norm += static_cast<double>(c * c);
    norm = std::sqrt(norm);
    os << format_double(norm);
    for (long c : a) os << '\t' << c;
    os << '\t' << format_double(residuals[i]) << '\n';
    shifts.push_back(a);
  }
  write_text(opts.out_dir / "probe.tsv", os.str());
  json j = header(s, "probe");
  j["atom"] = space_label(probe->atom, u);
  j["phi"] = to_string(probe->phi);
  j["shifts"] = std::move(shifts);
  j["residuals"] = residuals;
  if (!residuals.empty() && residuals.front() > 0) j["ratio_last_first"] = residuals.back() / residuals.front();
  write_json(opts.out_dir / "probe.json", j);
}

void dispatch(Session& s, const std::string& command, const RunOptions& opts);

void cmd_report(Session& s, const RunOptions& opts) {
  std::vector<std::string> parts{"validate", "spectrum", "hvz", "thresholds", "rho"};
  if (s.spec().probe) parts.push_back("probe");
  json j = header(s, "report");
  j["provenance"] = {{"config_hash", s.spec().config_hash}, {"version", MBSPEC_VERSION}, {"seed", s.solver().seed}};
  json artifacts = json::object();
  json timings = json::object();
  for (const auto& part : parts) {
    const auto path = opts.out_dir / (part + ".json");
    if (!std::filesystem::exists(path)) {
      const auto t0 = std::chrono::steady_clock::now();
      dispatch(s, part, opts);
      const auto t1 = std::chrono::steady_clock::now();
      timings[part] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot read '" + path.string() + "'");
    json a;
    try {
      a = json::parse(in);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    if (!a.contains("config_hash") || a["config_hash"] != s.spec().config_hash) {
      fail(ErrorKind::StaleArtifact, path.string() + " was produced from a different config (hash " +
                                         a.value("config_hash", std::string("?")) + ", expected " +
                                         s.spec().config_hash + ")");
    }
    artifacts[part] = std::move(a);
  }
  j["artifacts"] = std::move(artifacts);
  if (opts.timings) j["timings_ms"] = std::move(timings);
  write_json(opts.out_dir / "report.json", j);
}

void dispatch(Session& s, const std::string& command, const RunOptions& opts) {
  if (command == "validate") return cmd_validate(s, opts);
  if (command == "spectrum") return cmd_spectrum(s, opts);
  if (command == "hvz") return cmd_hvz(s, opts);
  if (command == "thresholds") return cmd_thresholds(s, opts);
  if (command == "rho") return cmd_rho(s, opts);
  if (command == "probe") return cmd_probe(s, opts);
  if (command == "report") return cmd_report(s, opts);
  fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
}

}  // namespace

void run_command(Session& session, const std::string& command, const RunOptions& opts) {
  if (!is_command(command)) fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
  if (opts.seed) session.override_seed(*opts.seed);
  if (opts.workers) session.override_workers(*opts.workers);
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create '" + opts.out_dir.string() + "': " + ec.message());
  dispatch(session, command, opts);
}

}  // namespace mbspec
