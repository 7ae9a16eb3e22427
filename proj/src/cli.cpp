#include "mmbarrier/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mmbarrier/barrier.hpp"
#include "mmbarrier/error.hpp"
#include "mmbarrier/rank_registry.hpp"
#include "mmbarrier/report.hpp"
#include "mmbarrier/symmetry.hpp"
#include "mmbarrier/tensor_io.hpp"

namespace mmbarrier {
namespace {

// Flags shared by the barrier and oracle verbs.
struct RunConfig {
  std::vector<std::string> tensors;
  std::string p_text;
  std::string p_range;
  double kappa = 0.0;
  double rank = 0.0;
  bool rank_given = false;
  std::string rank_mode;
  std::string symmetry = "auto";
  double theta_step = 0.005;
  double tol = 1e-9;
  bool full_simplex = false;
  std::string format;
  std::string out_path;
  std::string config_path;

  std::string q_range = "1..14";
  std::vector<std::string> factors;

  std::string theta_text;
  double grid_step = 0.01;
  double max_diff = 1e-2;
};

double parse_number(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw InvalidArgument(field + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

struct PRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

PRange parse_p_range(const std::string& text, const std::string& field) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument(field + ": expected a:b:step, got '" + text + "'");
  PRange r{parse_number(parts[0], field), parse_number(parts[1], field), parse_number(parts[2], field)};
  if (r.lo < 0.0 || r.hi < r.lo || !(r.step > 0.0)) {
    throw InvalidArgument(field + ": need 0 <= a <= b and step > 0");
  }
  return r;
}

std::vector<std::size_t> parse_q_list(const std::string& text) {
  std::vector<std::size_t> qs;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    auto to_q = [&](const std::string& s) {
      const double v = parse_number(s, "--q");
      if (v < 1.0 || v != std::floor(v)) throw InvalidArgument("--q: entries must be positive integers");
      return static_cast<std::size_t>(v);
    };
    if (dots == std::string::npos) {
      qs.push_back(to_q(item));
    } else {
      const std::size_t a = to_q(item.substr(0, dots));
      const std::size_t b = to_q(item.substr(dots + 2));
      if (b < a) throw InvalidArgument("--q: empty range '" + item + "'");
      for (std::size_t q = a; q <= b; ++q) qs.push_back(q);
    }
  }
  return qs;
}

std::optional<OrbitPartition> resolve_symmetry(const std::string& mode, const std::string& id, const Tensor& tensor) {
  const TensorSupport& s = tensor.support();
  auto cw_orbits = [&]() -> std::optional<OrbitPartition> {
    if (id.starts_with("cw:")) return orbits(s, cw_standard_action(s.dim(0) - 2));
    if (id.starts_with("cwsmall:")) return orbits(s, cw_standard_action(s.dim(0) - 1, s.dim(0)));
    return std::nullopt;
  };
  if (mode == "none") return std::nullopt;
  if (mode == "auto") return cw_orbits();
  if (mode == "cw") {
    auto part = cw_orbits();
    if (!part) throw InvalidArgument("--symmetry cw needs a cw:q or cwsmall:q tensor, got '" + id + "'");
    return part;
  }
  if (mode.starts_with("file:")) return orbits(s, read_action_file(mode.substr(5)));
  throw InvalidArgument("--symmetry: expected auto, none, cw or file:<path>, got '" + mode + "'");
}

SearchConfig search_config(const RunConfig& cfg) {
  if (!(cfg.theta_step > 0.0 && cfg.theta_step <= 0.5)) throw InvalidArgument("--theta-step must lie in (0, 0.5]");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (cfg.kappa < 0.0) throw InvalidArgument("--kappa must be nonnegative");
  SearchConfig sc;
  sc.theta_step = cfg.theta_step;
  sc.solver.tol_bits = cfg.tol;
  sc.domain = cfg.full_simplex ? ThetaDomain::kFullSimplex : ThetaDomain::kAuto;
  return sc;
}

BarrierQuery build_query(const RunConfig& cfg, const std::string& id) {
  const Tensor tensor = resolve_tensor(id);
  double rank = 0.0;
  RankMode mode = RankMode::kUser;
  if (cfg.rank_given) {
    rank = cfg.rank;
  } else if (const auto entry = RankRegistry{}.lookup(id)) {
    rank = entry->asymptotic_rank;
    mode = RankMode::kRegistry;
  } else {
    throw InvalidArgument("--rank: no asymptotic rank known for '" + id + "'");
  }
  if (!cfg.rank_mode.empty() && cfg.rank_mode != to_string(mode)) {
    throw InvalidArgument("--rank-mode " + cfg.rank_mode + " does not match how the rank was given (" +
                          to_string(mode) + ")");
  }
  BarrierQuery q = make_query(id, tensor.support(), rank, resolve_symmetry(cfg.symmetry, id, tensor));
  q.rank_mode = mode;
  q.kappa = cfg.kappa;
  return q;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path);
  if (!file) throw InvalidArgument("--out: cannot write '" + cfg.out_path + "'");
  file << text;
}

std::string render_rows(const RunConfig& cfg, const std::vector<ReportRow>& rows, const std::string& fallback,
                        const std::string& id_header = "id") {
  const std::string format = cfg.format.empty() ? fallback : cfg.format;
  if (format == "csv") return to_csv(rows);
  if (format == "json") return to_json(rows);
  if (format == "table") return to_table(rows, id_header);
  if (format == "svg") throw InvalidArgument("--format svg is only available for 'barrier curve'");
  throw InvalidArgument("--format: expected csv, json, table or svg, got '" + format + "'");
}

bool report_status(const std::vector<ReportRow>& rows, std::ostream& err) {
  bool failed = false;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      err << "error: " << r.id << ": " << r.error << '\n';
      failed = true;
    } else if (r.clamped) {
      err << "warning: " << r.id << ": functional bound exceeded the asymptotic rank; ratio clamped to 1\n";
    }
  }
  return !failed;
}

int finish_rows(const RunConfig& cfg, const std::vector<ReportRow>& rows, std::ostream& out, std::ostream& err,
                const std::string& fallback, const std::string& id_header = "id") {
  const bool ok = report_status(rows, err);
  emit(cfg, render_rows(cfg, rows, fallback, id_header), out);
  return ok ? 0 : 1;
}

std::optional<double> single_p(const RunConfig& cfg) {
  if (cfg.p_text.empty()) return std::nullopt;
  if (cfg.p_text.find(':') != std::string::npos) throw InvalidArgument("--p: a range is only valid for 'barrier curve'");
  const double p = parse_number(cfg.p_text, "--p");
  if (p < 0.0) throw InvalidArgument("--p must be nonnegative");
  return p;
}

std::vector<std::string> require_tensors(const RunConfig& cfg) {
  if (cfg.tensors.empty()) throw InvalidArgument("--tensor is required");
  return cfg.tensors;
}

int cmd_tensor_show(const std::string& spec, const std::string& symmetry, bool serialize, std::ostream& out) {
  const Tensor tensor = resolve_tensor(spec);
  const auto part = resolve_symmetry(symmetry, spec, tensor);
  const Dims& d = tensor.dims();
  if (serialize) {
    out << serialize_tensor(tensor);
    return 0;
  }
  out << "tensor: " << spec << '\n';
  out << "dims: " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
  out << "support: " << tensor.support().size() << '\n';
  out << "symmetry: " << (part ? symmetry : std::string("none")) << '\n';
  out << "orbits: " << (part ? part->size() : tensor.support().size()) << '\n';
  if (d[1] == d[2]) out << "axis-swap symmetric: " << (axis_swap_symmetric(tensor.support()) ? "yes" : "no") << '\n';
  if (const auto entry = RankRegistry{}.lookup(spec)) {
    out << "asymptotic rank: " << format_fixed(entry->asymptotic_rank, 0) << " (" << entry->provenance << ")\n";
  }
  return 0;
}

int cmd_omega(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto p = single_p(cfg);
  if (!p) throw InvalidArgument("--p is required");
  const SearchConfig sc = search_config(cfg);
  std::vector<ReportRow> rows;
  for (const auto& id : require_tensors(cfg)) {
    try {
      BarrierQuery q = build_query(cfg, id);
      q.p = *p;
      rows.push_back(make_row(id, *p, cfg.kappa, barrier_omega(q, sc)));
    } catch (const SolverError& e) {
      rows.push_back(make_error_row(id, *p, cfg.kappa, e.what()));
    }
  }
  return finish_rows(cfg, rows, out, err, "csv");
}

int cmd_alpha(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SearchConfig sc = search_config(cfg);
  std::vector<ReportRow> rows;
  for (const auto& id : require_tensors(cfg)) {
    try {
      rows.push_back(make_row(id, std::nullopt, 0.0, barrier_alpha(build_query(cfg, id), sc)));
    } catch (const SolverError& e) {
      rows.push_back(make_error_row(id, std::nullopt, 0.0, e.what()));
    }
  }
  return finish_rows(cfg, rows, out, err, "csv");
}

int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  PRange range;
  if (!cfg.p_range.empty()) {
    range = parse_p_range(cfg.p_range, "--p-range");
  } else if (cfg.p_text.find(':') != std::string::npos) {
    range = parse_p_range(cfg.p_text, "--p");
  } else {
    throw InvalidArgument("--p-range is required (a:b:step)");
  }
  const auto ids = require_tensors(cfg);
  if (ids.size() != 1) throw InvalidArgument("--tensor: 'barrier curve' takes exactly one tensor");
  const SearchConfig sc = search_config(cfg);
  const BarrierQuery q = build_query(cfg, ids.front());

  std::vector<ReportRow> rows;
  std::vector<std::pair<double, double>> points;
  for (const auto& [p, result] : barrier_curve(q, range.lo, range.hi, range.step, sc)) {
    rows.push_back(make_row(ids.front(), p, cfg.kappa, result));
    points.emplace_back(p, result.value);
  }
  if (cfg.format == "svg") {
    emit(cfg, to_svg(points, "Barrier for omega(p) via " + ids.front(), "p", "barrier"), out);
    return report_status(rows, err) ? 0 : 1;
  }
  return finish_rows(cfg, rows, out, err, "csv");
}

int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double p = single_p(cfg).value_or(2.0);
  if (cfg.rank_given) throw InvalidArgument("--rank: 'barrier table1' uses R(CW_q) = q+2 for every row");
  const SearchConfig sc = search_config(cfg);
  std::vector<ReportRow> rows;
  for (std::size_t q : parse_q_list(cfg.q_range)) {
    const std::string id = "cw:" + std::to_string(q);
    try {
      BarrierQuery query = build_query(cfg, id);
      query.p = p;
      ReportRow row = make_row(id, p, cfg.kappa, barrier_omega(query, sc));
      if (cfg.format.empty() || cfg.format == "table") row.id = std::to_string(q);
      rows.push_back(std::move(row));
    } catch (const SolverError& e) {
      rows.push_back(make_error_row(std::to_string(q), p, cfg.kappa, e.what()));
    }
  }
  return finish_rows(cfg, rows, out, err, "table", "q");
}

MixedFactor parse_factor(const std::string& text, const RunConfig& cfg) {
  const auto parts = split(text, '@');
  if (parts.size() < 2 || parts.size() > 3) {
    throw InvalidArgument("--factor: expected ID@WEIGHT[@RANK], got '" + text + "'");
  }
  const Tensor tensor = resolve_tensor(parts[0]);
  double rank = 0.0;
  if (parts.size() == 3) {
    rank = parse_number(parts[2], "--factor rank");
  } else if (const auto entry = RankRegistry{}.lookup(parts[0])) {
    rank = entry->asymptotic_rank;
  }
  return MixedFactor{parts[0],
                     Presentation{parts[0], tensor.support(), resolve_symmetry(cfg.symmetry, parts[0], tensor)},
                     parse_number(parts[1], "--factor weight"), rank};
}

int cmd_mixed(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.factors.empty()) throw InvalidArgument("--factor is required (ID@WEIGHT[@RANK], repeatable)");
  const auto p = single_p(cfg);
  if (!p) throw InvalidArgument("--p is required");
  MixedSequence seq;
  std::string label;
  for (const auto& text : cfg.factors) {
    seq.factors.push_back(parse_factor(text, cfg));
    label += (label.empty() ? "" : "*") + text;
  }
  const std::string mode = cfg.rank_mode.empty() ? "heuristic" : cfg.rank_mode;
  if (mode == "heuristic") {
    seq.rank_mode = RankMode::kHeuristic;
    if (cfg.rank_given) throw InvalidArgument("--rank is only used with --rank-mode user");
  } else if (mode == "user") {
    seq.rank_mode = RankMode::kUser;
    if (!cfg.rank_given) throw InvalidArgument("--rank is required with --rank-mode user");
    seq.asymptotic_rank = cfg.rank;
  } else {
    throw InvalidArgument("--rank-mode: expected heuristic or user for mixed sequences");
  }
  std::vector<ReportRow> rows;
  try {
    rows.push_back(make_row(label, *p, cfg.kappa, barrier_mixed(seq, *p, cfg.kappa, search_config(cfg))));
  } catch (const SolverError& e) {
    rows.push_back(make_error_row(label, *p, cfg.kappa, e.what()));
  }
  if (seq.rank_mode == RankMode::kHeuristic) {
    err << "note: heuristic rank mode uses prod_j R(S_j)^{w_j}, an upper bound on the sequence rank; "
           "the barrier may be inflated\n";
  }
  return finish_rows(cfg, rows, out, err, "csv");
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto ids = require_tensors(cfg);
  if (ids.size() != 1) throw InvalidArgument("--tensor: 'oracle check' takes exactly one tensor");
  const std::string& id = ids.front();
  const Tensor tensor = resolve_tensor(id);
  const auto part = resolve_symmetry(cfg.symmetry, id, tensor);

  Theta theta(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  if (!cfg.theta_text.empty()) {
    const auto parts = split(cfg.theta_text, ',');
    if (parts.size() != 3) throw InvalidArgument("--theta: expected t1,t2,t3");
    const double t1 = parse_number(parts[0], "--theta");
    const double t2 = parse_number(parts[1], "--theta");
    const double t3 = parse_number(parts[2], "--theta");
    const double sum = t1 + t2 + t3;
    if (std::abs(sum - 1.0) > 1e-6) throw InvalidArgument("--theta must sum to 1");
    theta = Theta(t1 / sum, t2 / sum, 1.0 - t1 / sum - t2 / sum);
  }
  SolverOptions opts;
  opts.tol_bits = cfg.tol;
  const double solver = maximize_entropy(tensor.support(), theta, part, opts).value_bits;
  const double oracle = brute_force_max(tensor.support(), theta, cfg.grid_step, part);
  const double diff = solver - oracle;
  bool ok = std::abs(diff) <= cfg.max_diff && solver >= oracle - 1e-10;

  out << "tensor: " << id << '\n';
  out << "theta: " << format_fixed(theta[0], 6) << ' ' << format_fixed(theta[1], 6) << ' '
      << format_fixed(theta[2], 6) << '\n';
  out << "variables: " << (part ? part->size() : tensor.support().size()) << '\n';
  out << "solver: " << format_fixed(solver, 10) << '\n';
  out << "oracle: " << format_fixed(oracle, 10) << " (grid step " << cfg.grid_step << ")\n";
  out << "difference: " << format_fixed(diff, 10) << '\n';
  if (id.starts_with("mm:")) {
    const auto sizes = split(id.substr(3), ',');
    const double closed = zeta_matmul_closed(static_cast<std::size_t>(parse_number(sizes[0], "mm")),
                                             static_cast<std::size_t>(parse_number(sizes[1], "mm")),
                                             static_cast<std::size_t>(parse_number(sizes[2], "mm")), theta)
                              .log2_value;
    out << "closed form: " << format_fixed(closed, 10) << '\n';
    ok = ok && std::abs(solver - closed) <= 1e-6;
  }
  out << "status: " << (ok ? "ok" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_p) {
  sub->add_option("--tensor", cfg.tensors, "Tensor id (diag:n, mm:l,m,n, cw:q, cwsmall:q) or file; repeatable");
  if (with_p) sub->add_option("--p", cfg.p_text, "Rectangularity exponent p (or a:b:step for curves)");
  sub->add_option("--kappa", cfg.kappa, "Catalyticity kappa >= 0");
  sub->add_option("--rank", cfg.rank, "Asymptotic rank of the intermediate tensor");
  sub->add_option("--rank-mode", cfg.rank_mode, "registry|user|heuristic");
  sub->add_option("--symmetry", cfg.symmetry, "auto|none|cw|file:<path>");
  sub->add_option("--theta-step", cfg.theta_step, "Theta grid step");
  sub->add_option("--tol", cfg.tol, "Inner solver tolerance in bits");
  sub->add_flag("--full-simplex", cfg.full_simplex, "Search the whole theta simplex");
  sub->add_option("--format", cfg.format, "csv|json|table|svg");
  sub->add_option("--out", cfg.out_path, "Write output to a file");
  sub->add_option("--config", cfg.config_path, "key = value file; flags override it");
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> result;
  std::string path;
  std::set<std::string> given;
  for (std::size_t n = 0; n < args.size(); ++n) {
    const std::string& a = args[n];
    if (a == "--config" && n + 1 < args.size()) {
      path = args[++n];
      continue;
    }
    if (a.starts_with("--config=")) {
      path = a.substr(9);
      continue;
    }
    if (a.starts_with("--")) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    result.push_back(a);
  }
  if (path.empty()) return result;

  std::ifstream file(path);
  if (!file) throw InvalidArgument("--config: cannot open '" + path + "'");
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(file, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "config", "expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\"");
      const auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "config", "empty key");
    if (given.count(key) > 0) continue;
    if (value == "true") {
      result.push_back("--" + key);
    } else if (value != "false") {
      result.push_back("--" + key);
      result.push_back(value);
    }
  }
  return result;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Barriers for matrix multiplication exponents via support functionals"};
  app.name("mmbarrier");
  app.require_subcommand(1);

  std::string show_tensor;
  std::string show_symmetry = "auto";
  bool show_serialize = false;
  auto* tensor = app.add_subcommand("tensor", "Inspect tensors");
  tensor->require_subcommand(1);
  auto* show = tensor->add_subcommand("show", "Print dims, support size and orbit count");
  show->add_option("tensor", show_tensor, "Tensor id or file")->required();
  show->add_option("--symmetry", show_symmetry, "auto|none|cw|file:<path>");
  show->add_flag("--serialize", show_serialize, "Print the tensor document instead");

  RunConfig cfg;
  auto* barrier = app.add_subcommand("barrier", "Compute barriers");
  barrier->require_subcommand(1);
  auto* omega = barrier->add_subcommand("omega", "Barrier on upper bounds for omega(p)");
  add_common(omega, cfg, true);
  auto* alpha = barrier->add_subcommand("alpha", "Barrier on lower bounds for alpha");
  add_common(alpha, cfg, false);
  auto* curve = barrier->add_subcommand("curve", "omega(p) barrier over a range of p");
  add_common(curve, cfg, true);
  curve->add_option("--p-range", cfg.p_range, "a:b:step");
  auto* table1 = barrier->add_subcommand("table1", "omega(2) barriers for CW_q");
  add_common(table1, cfg, true);
  table1->add_option("--q", cfg.q_range, "q values, e.g. 1..14 or 1,6,14");
  auto* mixed = barrier->add_subcommand("mixed", "Barrier for a mixed Kronecker sequence");
  add_common(mixed, cfg, true);
  mixed->add_option("--factor", cfg.factors, "ID@WEIGHT[@RANK], repeatable");

  auto* oracle = app.add_subcommand("oracle", "Cross-check the entropy solver");
  oracle->require_subcommand(1);
  auto* check = oracle->add_subcommand("check", "Compare the solver with an exhaustive grid");
  add_common(check, cfg, false);
  check->add_option("--theta", cfg.theta_text, "t1,t2,t3 (default uniform)");
  check->add_option("--grid-step", cfg.grid_step, "Oracle grid step 1/K");
  check->add_option("--max-diff", cfg.max_diff, "Allowed |solver - oracle|");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  for (CLI::App* leaf : {omega, alpha, curve, table1, mixed, check}) {
    if (*leaf) cfg.rank_given = leaf->count("--rank") > 0;
  }

  try {
    if (*show) return cmd_tensor_show(show_tensor, show_symmetry, show_serialize, out);
    if (*omega) return cmd_omega(cfg, out, err);
    if (*alpha) return cmd_alpha(cfg, out, err);
    if (*curve) return cmd_curve(cfg, out, err);
    if (*table1) return cmd_table1(cfg, out, err);
    if (*mixed) return cmd_mixed(cfg, out, err);
    if (*check) return cmd_oracle(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mmbarrier
