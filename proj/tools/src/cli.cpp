#include "spectralgap/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectralgap/errors.hpp"
#include "spectralgap/gapbound.hpp"
#include "spectralgap/modelfun.hpp"
#include "spectralgap/spaces.hpp"
#include "spectralgap/tridiag_eigen.hpp"

namespace spectralgap::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Empty cells are written as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::string, bool, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        if constexpr (std::is_same_v<T, std::string>) return v;
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
      },
      c);
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        }
        if constexpr (!std::is_same_v<T, double> && !std::is_same_v<T, std::monostate>) return v;
      },
      c);
}

void write_csv(const Table& t, std::ostream& os) {
  os << "# schema=1\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  for (const auto& [k, v] : t.summary) os << "# " << k << '=' << cell_text(v) << '\n';
}

void write_json(const Table& t, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [k, v] : t.summary) doc[k] = cell_json(v);
  os << doc.dump(2) << '\n';
}

void write_text_table(const Table& t, std::ostream& os) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  std::vector<std::vector<std::string>> text;
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string s = row[i].index() == 1 ? [&] {
        std::ostringstream o;
        o << std::setprecision(10) << std::get<double>(row[i]);
        return o.str();
      }()
                                          : cell_text(row[i]);
      if (s.empty()) s = "-";
      width[i] = std::max(width[i], s.size());
      line.push_back(std::move(s));
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
    }
    os << '\n';
  };
  emit(t.columns);
  for (const auto& line : text) emit(line);
  for (const auto& [k, v] : t.summary) os << k << ": " << cell_text(v) << '\n';
}

enum class Format { Csv, Json, Text };

void write_table(const Table& t, Format f, std::ostream& os) {
  switch (f) {
    case Format::Csv: write_csv(t, os); break;
    case Format::Json: write_json(t, os); break;
    case Format::Text: write_text_table(t, os); break;
  }
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

// Maps a library exception to the exit-code contract.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const DomainError*>(&e)) return kExitPrecondition;
  return kExitNumerical;
}

// Runs job(i) for i in [0, n) on up to `jobs` threads. Each job writes only
// its own slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& job) {
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(jobs, static_cast<int>(n))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
}

struct Common {
  double tol = 1e-9;
  std::string format = "csv";
  std::string out_path;
  int jobs = 1;
};

void add_common(CLI::App* sub, Common& c, double default_tol) {
  c.tol = default_tol;
  sub->add_option("--tol", c.tol, "Target accuracy, in [1e-13, 1e-3]")->capture_default_str();
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  sub->add_option("--out", c.out_path, "Write the table to this file instead of stdout");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "table") return Format::Text;
  return Format::Csv;
}

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-3)) throw PreconditionError("--tol must lie in [1e-13, 1e-3]");
}

// ---------------------------------------------------------------- bound

Table bound_table(double K, double N, double d, double tol, Method method) {
  const CurvatureDimension cd(K, N);
  const auto r = hat_lambda(cd, d, tol, method);
  Table t;
  t.columns = {"K", "N", "d", "lambda_hat", "method", "achieved_tol", "shooting", "discretization", "agreement"};
  t.rows.push_back({K, N, d, r.lambda, to_string(r.method), r.achieved_tol, opt_cell(r.diagnostics.shooting_value),
                    opt_cell(r.diagnostics.discretization_value), opt_cell(r.diagnostics.agreement)});
  return t;
}

// ---------------------------------------------------------------- sweep

struct SweepRow {
  double K = 0.0, N = 0.0, d = 0.0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double achieved = std::numeric_limits<double>::quiet_NaN();
  std::string method = "error";
  std::string error;
  int code = kExitOk;
};

// Counts adjacent d-pairs (per (K, N), ascending d) where lambda_hat fails
// to decrease by more than the noise margin 10 tol.
long long monotonicity_violations(const std::vector<SweepRow>& rows, double tol) {
  std::map<std::pair<double, double>, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    if (r.code == kExitOk) groups[{r.K, r.N}].push_back(&r);
  }
  long long count = 0;
  for (auto& [key, g] : groups) {
    std::stable_sort(g.begin(), g.end(), [](const SweepRow* a, const SweepRow* b) { return a->d < b->d; });
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (g[i]->d == g[i - 1]->d) continue;
      if (g[i]->lambda > g[i - 1]->lambda + 10.0 * tol * std::max(1.0, g[i - 1]->lambda)) ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------- verify

struct VerifyRow {
  BoundReport bound;
  std::optional<GradientReport> gradient;
  std::optional<MaxReport> max;
  std::string note;
  bool bound_done = false;
  bool failed_with_error = false;
  bool pass = false;
};

// Radial or flat 1D spaces the comparison checkers apply to, with the
// dimension used for the model (flat intervals borrow N = 3).
std::optional<std::pair<WeightedInterval, std::optional<double>>> comparison_space(const ModelSpace& s) {
  if (const auto* w = std::get_if<WeightedInterval>(&s.kind)) {
    if (w->p == 0.0) return std::make_pair(*w, std::optional<double>(3.0));
    return std::make_pair(*w, std::optional<double>());
  }
  if (const auto* f = std::get_if<FlatInterval>(&s.kind)) {
    return std::make_pair(WeightedInterval{0.0, f->d, 0.0, WeightFamily::Cos}, std::optional<double>(3.0));
  }
  return std::nullopt;
}

VerifyRow verify_one(const ModelSpace& s, double tol) {
  VerifyRow row;
  row.bound.space = s.name;
  row.bound.K = s.declared_K;
  row.bound.N = s.declared_N;
  row.bound.diameter = s.diameter;
  try {
    row.bound = verify_bound(s, tol);
    row.bound_done = true;
  } catch (const std::exception& e) {
    row.failed_with_error = true;
    row.note = std::string("bound: ") + e.what();
    return row;
  }
  bool ok = row.bound.pass;
  if (const auto cs = comparison_space(s)) {
    const auto& [w, n_override] = *cs;
    try {
      row.gradient = gradient_comparison(w, 1024, 1e-4, n_override);
      ok = ok && row.gradient->pass;
    } catch (const std::exception& e) {
      row.failed_with_error = true;
      row.note = std::string("gradient: ") + e.what();
      ok = false;
    }
    try {
      row.max = check_max_comparison(w, 1e-4, 2048, n_override);
      ok = ok && row.max->pass;
    } catch (const NumericalError& e) {
      // m_{K,N} exists only when the one-sided model has a critical point;
      // an overdamped model (small lambda, K < 0) leaves it undefined.
      if (row.note.empty()) row.note = std::string("max: not applicable (") + e.what() + ")";
    }
  }
  row.pass = ok && !row.failed_with_error;
  return row;
}

Table verify_table(const std::vector<VerifyRow>& rows) {
  Table t;
  t.columns = {"space",          "K",          "N",         "diameter",      "lambda1", "lambda_hat",
               "margin",         "pass",       "bound_pass", "gradient_violation", "gradient_pass", "max_f",
               "m_KN",           "max_pass",   "note"};
  long long failures = 0;
  for (const auto& r : rows) {
    const auto& b = r.bound;
    std::vector<Cell> row{b.space, b.K, b.N, b.diameter};
    if (r.bound_done) {
      row.insert(row.end(), {b.lambda1, b.lambda_hat, b.margin, r.pass, b.pass});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, false, false});
    }
    row.push_back(r.gradient ? Cell{r.gradient->max_violation} : Cell{});
    row.push_back(r.gradient ? Cell{r.gradient->pass} : Cell{});
    row.push_back(r.max ? Cell{r.max->max_f} : Cell{});
    row.push_back(r.max ? Cell{r.max->m_KN} : Cell{});
    row.push_back(r.max ? Cell{r.max->pass} : Cell{});
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    row.push_back(note);
    t.rows.push_back(std::move(row));
    if (!r.pass) ++failures;
  }
  t.summary = {{"spaces", static_cast<long long>(rows.size())}, {"failures", failures}};
  return t;
}

// ---------------------------------------------------------------- selftest

struct Check {
  std::string name;
  std::function<double()> value;
  double expected;
  double tol;
};

Table selftest_table(bool& all_pass) {
  const std::vector<Check> checks{
      {"flat closed form lambda_hat(0,3,pi)", [] { return hat_lambda({0, 3}, kPi).lambda; }, 1.0, 1e-12},
      {"Obata endpoint lambda_hat(2,3,pi)", [] { return hat_lambda({2, 3}, kPi).lambda; }, 3.0, 1e-8},
      {"shooting lambda_hat(-3,2,1.7)", [] { return hat_lambda({-3, 2}, 1.7).lambda; }, 2.35479807510639651, 1e-8},
      {"discretization lambda_hat(-1,2.5,1)",
       [] { return hat_lambda({-1, 2.5}, 1.0, 1e-7, Method::Discretization).lambda; }, 9.38801814456600718, 1e-7},
      {"power profile b(0,3,1)", [] { return model_profile(0, 3, 1).b; }, 4.4934094579090641753, 1e-8},
      {"power profile m(0,3,1)", [] { return model_profile(0, 3, 1).m; }, 0.21723362821122165741, 1e-8},
      {"trig profile m(2,3,3)", [] { return model_profile(2, 3, 3).m; }, 1.0, 1e-8},
      {"Bishop-Gromov ratio (2,3,pi/4,pi/2)", [] { return bg_ratio_lower_bound({2, 3}, kPi / 4, kPi / 2); },
       0.18169011381620932846, 1e-10},
      {"discrete cosine n=4 k=1",
       [] { return eigenvalue_k(assemble_neumann([](double) { return 1.0; }, 0.0, kPi, 4), 1); },
       0.94964120355178363474, 1e-12},
  };
  Table t;
  t.columns = {"check", "value", "expected", "error", "pass"};
  all_pass = true;
  for (const auto& c : checks) {
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = c.value();
    } catch (const std::exception&) {
    }
    const double e = std::abs(v - c.expected);
    const bool ok = e <= c.tol;
    all_pass = all_pass && ok;
    t.rows.push_back({c.name, v, c.expected, e, ok});
  }
  return t;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp spectral-gap lower bounds for spaces with Ricci curvature >= K and dimension <= N"};
  app.name("spectralgap");
  app.require_subcommand(1);

  double K = 0.0, N = 2.0, d = 1.0, R = 0.0, l = 2.0, lambda = 1.0;
  std::string method_name = "shooting";
  std::string Kgrid, Ngrid, dgrid, filter;
  bool trajectory = false;

  Common bound_opts, sweep_opts, model_opts, verify_opts, self_opts;

  auto* bound = app.add_subcommand("bound", "Compute lambda_hat(K, N, d)");
  bound->add_option("--K", K, "Curvature lower bound")->required();
  bound->add_option("--N", N, "Dimension upper bound, >= 1")->required();
  bound->add_option("--d", d, "Diameter bound")->required();
  bound->add_option("--method", method_name, "shooting | discretization | closed-form | both")->capture_default_str();
  add_common(bound, bound_opts, 1e-9);

  auto* sweep = app.add_subcommand("sweep", "Tabulate lambda_hat over a (K, N, d) grid");
  sweep->add_option("--K", Kgrid, "Grid: v | v1,v2,... | lo:hi:count")->required();
  sweep->add_option("--N", Ngrid, "Grid: v | v1,v2,... | lo:hi:count")->required();
  sweep->add_option("--d", dgrid, "Grid: v | v1,v2,... | lo:hi:count")->required();
  sweep->add_option("--method", method_name, "shooting | discretization | closed-form | both")->capture_default_str();
  add_common(sweep, sweep_opts, 1e-9);

  auto* model = app.add_subcommand("model", "One-sided model profile v_{R,l}");
  model->add_option("--R", R, "Curvature parameter")->required();
  model->add_option("--l", l, "Dimension parameter, > 1")->required();
  model->add_option("--lambda", lambda, "Eigenvalue, > 0")->required();
  model->add_flag("--trajectory", trajectory, "Emit the sampled profile as s,v,dv,rho");
  add_common(model, model_opts, 1e-9);

  auto* verify = app.add_subcommand("verify", "Check the bound and the comparison theorems on model spaces");
  verify->add_option("--filter", filter,
                     "Comma-separated name fragments, 'equality', 'all' (default) or 'none'");
  add_common(verify, verify_opts, 1e-5);

  auto* self = app.add_subcommand("selftest", "Run built-in reference checks");
  add_common(self, self_opts, 1e-9);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  const Common& common = bound->parsed()    ? bound_opts
                         : sweep->parsed()  ? sweep_opts
                         : model->parsed()  ? model_opts
                         : verify->parsed() ? verify_opts
                                            : self_opts;
  const Format format = parse_format(common.format);

  Table table;
  int code = kExitOk;
  try {
    check_tol(common.tol);
    if (bound->parsed()) {
      table = bound_table(K, N, d, common.tol, method_from_string(method_name));
    } else if (sweep->parsed()) {
      const Method method = method_from_string(method_name);
      const auto Ks = parse_grid(Kgrid);
      const auto Ns = parse_grid(Ngrid);
      const auto ds = parse_grid(dgrid);
      std::vector<SweepRow> rows;
      rows.reserve(Ks.size() * Ns.size() * ds.size());
      for (double k : Ks) {
        for (double n : Ns) {
          for (double dd : ds) rows.push_back(SweepRow{k, n, dd});
        }
      }
      parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
        auto& r = rows[i];
        try {
          const auto res = hat_lambda(CurvatureDimension(r.K, r.N), r.d, common.tol, method);
          r.lambda = res.lambda;
          r.achieved = res.achieved_tol;
          r.method = to_string(res.method);
        } catch (const std::exception& e) {
          r.error = e.what();
          r.code = exit_code_for(e);
        }
      });
      table.columns = {"K", "N", "d", "lambda_hat", "method", "achieved_tol"};
      for (const auto& r : rows) {
        table.rows.push_back({r.K, r.N, r.d, r.lambda, r.method, r.achieved});
        if (r.code != kExitOk) {
          err << "error at K=" << format_double(r.K) << " N=" << format_double(r.N) << " d=" << format_double(r.d)
              << ": " << r.error << '\n';
          code = std::max(code, r.code);
        }
      }
      table.summary = {{"monotonicity_violations", monotonicity_violations(rows, common.tol)}};
    } else if (model->parsed()) {
      const auto prof = model_profile(R, l, lambda);
      const double flux = weighted_flux_residual(prof);
      if (trajectory) {
        table.columns = {"s", "v", "dv", "rho"};
        for (const auto& s : prof.trajectory.samples) {
          table.rows.push_back({s.x, s.v, s.dv, one_sided_density(prof.model, s.x)});
        }
        table.summary = {{"a", prof.a}, {"b", prof.b}, {"m", prof.m}, {"flux_residual", flux}};
      } else {
        table.columns = {"R", "l", "lambda", "a", "b", "m", "b_at_singular_end", "flux_residual"};
        table.rows.push_back({R, l, lambda, prof.a, prof.b, prof.m, prof.b_at_singular_end, flux});
      }
    } else if (verify->parsed()) {
      const auto spaces = filter_catalog(filter);
      std::vector<VerifyRow> rows(spaces.size());
      parallel_for(spaces.size(), common.jobs, [&](std::size_t i) { rows[i] = verify_one(spaces[i], common.tol); });
      table = verify_table(rows);
      for (const auto& r : rows) {
        if (!r.pass) code = kExitNumerical;
      }
    } else {
      bool all = false;
      table = selftest_table(all);
      if (!all) code = kExitNumerical;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  std::ostringstream buf;
  write_table(table, format, buf);
  if (common.out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << common.out_path << '\n';
      return kExitPrecondition;
    }
    file << buf.str();
  }
  return code;
}

}  // namespace spectralgap::cli
