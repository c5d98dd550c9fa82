// Command-line front end for the nwidth shared library.  Talks to the
// library exclusively through the C interface in nwidth.h; file handling and
// formatting live here.
//
// Exit codes: 0 success, 2 validation failure, 3 I/O or parse failure,
// 4 internal failure.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nwidth.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_of(nw_status status) {
  switch (status) {
    case NW_OK: return 0;
    case NW_ERR_PARSE: return kExitIo;
    case NW_ERR_VALIDATION: return kExitValidation;
    case NW_ERR_CAPACITY: return kExitValidation;
    case NW_ERR_RETRY_EXHAUSTED: return kExitInternal;
    case NW_ERR_INVALID_ARGUMENT: return kExitInternal;
    case NW_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void require_ok(nw_status status) {
  if (status != NW_OK) throw CliError{exit_code_of(status), nw_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitIo, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitIo, "cannot write " + path};
  out << content;
  if (!out) throw CliError{kExitIo, "failed writing " + path};
}

using ProblemHandle = std::unique_ptr<nw_problem, decltype(&nw_problem_free)>;
using ResultHandle = std::unique_ptr<nw_result, decltype(&nw_result_free)>;

ProblemHandle load_problem(const std::string& path) {
  const std::string text = read_file(path);
  nw_problem* raw = nullptr;
  require_ok(nw_problem_parse(text.c_str(), &raw));
  return ProblemHandle(raw, nw_problem_free);
}

std::string take_string(char* raw) {
  std::string out = raw ? raw : "";
  nw_string_free(raw);
  return out;
}

std::string fmt(double v, int digits = 12) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

const char* z_kind_label(nw_z_kind kind) {
  switch (kind) {
    case NW_Z_Q_FACE: return "q_face";
    case NW_Z_HALF_FACE: return "half_face";
    case NW_Z_OMEGA_EQUALIZER: return "omega_equalizer";
  }
  return "unknown";
}

// parses "a:b" or "a..b" into an inclusive integer range
std::vector<int64_t> parse_range(const std::string& text) {
  std::size_t sep = text.find(':');
  std::size_t skip = 1;
  if (sep == std::string::npos) {
    sep = text.find("..");
    skip = 2;
  }
  if (sep == std::string::npos) throw CliError{kExitValidation, "bad range: " + text};
  try {
    const int64_t lo = std::stoll(text.substr(0, sep));
    const int64_t hi = std::stoll(text.substr(sep + skip));
    std::vector<int64_t> values;  // an empty range yields a header-only CSV
    for (int64_t n = lo; n <= hi; ++n) values.push_back(n);
    return values;
  } catch (const std::exception&) {
    throw CliError{kExitValidation, "bad range: " + text};
  }
}

void print_certificate(std::ostream& os, const nw_result* result, int dim) {
  const int m = nw_result_m(result);
  os << "log_value = " << fmt(nw_result_log_value(result)) << "\n";
  os << "value     = " << fmt(nw_result_value(result)) << "\n";
  os << "m         = " << m << "\n";
  std::vector<int> balls(m);
  require_ok(nw_result_ball_indices(result, balls.data(), balls.size()));
  os << "balls     =";
  for (int b : balls) os << ' ' << b;
  os << "\n";
  os << "Z kind    = " << z_kind_label(nw_result_z_kind(result)) << "\n";
  const int icount = nw_result_z_index_count(result);
  std::vector<int> I(std::max(icount, 1));
  if (icount > 0) require_ok(nw_result_z_indices(result, I.data(), I.size()));
  os << "Z index   =";
  for (int i = 0; i < icount; ++i) os << ' ' << I[i];
  if (icount == 0) os << " (full space)";
  os << "\n";
  std::vector<double> lambda(m);
  require_ok(nw_result_lambda(result, lambda.data(), lambda.size()));
  os << "lambda    =";
  for (double l : lambda) os << ' ' << fmt(l);
  os << "\n";
  std::vector<double> reciprocal(dim);
  require_ok(nw_result_theta_reciprocal(result, reciprocal.data(), reciprocal.size()));
  os << "theta     =";
  for (double x : reciprocal) {
    if (x == 0.0) {
      os << " inf";
    } else {
      os << ' ' << fmt(1.0 / x);
    }
  }
  os << "\n";
  os << "candidates = " << nw_result_candidate_count(result) << "\n";
}

struct CommonOpts {
  std::string input;
  std::string output;
  std::string format = "human";
  double tol = 0.0;
  int threads = 0;
  std::uint64_t seed = 1;
};

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
  } else {
    write_file(opts.output, text);
  }
}

int run_estimate(const CommonOpts& opts, int64_t n_override) {
  ProblemHandle problem = load_problem(opts.input);
  if (n_override > 0) {
    nw_problem* raw = nullptr;
    require_ok(nw_problem_with_n(problem.get(), n_override, &raw));
    problem = ProblemHandle(raw, nw_problem_free);
  }
  nw_result* raw = nullptr;
  require_ok(nw_estimate(problem.get(), opts.tol, opts.threads, &raw));
  ResultHandle result(raw, nw_result_free);

  if (opts.format == "json") {
    char* json = nullptr;
    require_ok(nw_result_to_json(result.get(), &json));
    emit(opts, take_string(json) + "\n");
  } else if (opts.format == "csv") {
    const int64_t n = nw_problem_width_index(problem.get());
    char* csv = nullptr;
    require_ok(nw_sweep_csv(problem.get(), &n, 1, opts.tol, opts.threads, &csv));
    emit(opts, take_string(csv));
  } else {
    std::ostringstream os;
    print_certificate(os, result.get(), nw_problem_dim(problem.get()));
    emit(opts, os.str());
    char* json = nullptr;
    require_ok(nw_result_to_json(result.get(), &json));
    const nlohmann::json full = nlohmann::json::parse(take_string(json));
    const auto& rejected = full.at("rejected");
    if (!rejected.empty()) {
      std::cerr << "diagnostics: " << rejected.size() << " candidate(s) rejected:";
      std::map<std::string, int> by_reason;
      for (const auto& r : rejected) ++by_reason[r.at("reason").get<std::string>()];
      for (const auto& [reason, count] : by_reason) {
        std::cerr << ' ' << reason << " x" << count;
      }
      std::cerr << "\n";
    }
  }
  return 0;
}

int run_sweep(const CommonOpts& opts, const std::string& range, const std::string& list) {
  ProblemHandle problem = load_problem(opts.input);
  std::vector<int64_t> values;
  if (!range.empty()) {
    values = parse_range(range);
  } else if (!list.empty()) {
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
      try {
        values.push_back(std::stoll(token));
      } catch (const std::exception&) {
        throw CliError{kExitValidation, "bad n value: " + token};
      }
    }
  } else {
    throw CliError{kExitValidation, "sweep needs --n-range or --n"};
  }

  char* csv = nullptr;
  require_ok(nw_sweep_csv(problem.get(), values.data(), values.size(), opts.tol, opts.threads,
                          &csv));
  const std::string text = take_string(csv);

  // flagged rows keep only the n cell; warn about them on the error stream
  std::stringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  std::size_t row = 0;
  while (std::getline(lines, line)) {
    if (line.find(",,,,,,,") != std::string::npos) {
      std::cerr << "warning: n = " << values[row] << " skipped: not admissible\n";
    }
    ++row;
  }
  emit(opts, text);
  return 0;
}

int run_oracle(const CommonOpts& opts, int grid_r, int64_t max_points) {
  ProblemHandle problem = load_problem(opts.input);
  nw_result* raw = nullptr;
  require_ok(nw_estimate(problem.get(), opts.tol, opts.threads, &raw));
  ResultHandle result(raw, nw_result_free);
  const double est = nw_result_log_value(result.get());

  char* json = nullptr;
  require_ok(nw_grid_min_json(problem.get(), grid_r, max_points, &json));
  const nlohmann::json grid = nlohmann::json::parse(take_string(json));
  const double raw_min = grid.at("log_min").get<double>();
  const double error_bound = grid.at("error_bound").get<double>();
  const double lower = grid.at("certified_lower_bound").get<double>();

  const bool pass = lower <= est + 1e-9 && est <= raw_min + 1e-9;
  if (opts.format == "json") {
    nlohmann::json out = grid;
    out["estimate_log"] = est;
    out["pass"] = pass;
    emit(opts, out.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "estimate_log    = " << fmt(est) << "\n";
    os << "grid_min_log    = " << fmt(raw_min) << "\n";
    os << "error_bound     = " << fmt(error_bound) << "\n";
    os << "certified_lower = " << fmt(lower) << "\n";
    os << "grid_points     = " << grid.at("points").get<int64_t>() << "\n";
    os << (pass ? "PASS" : "FAIL") << "\n";
    emit(opts, os.str());
  }
  return 0;
}

int run_genpos(const CommonOpts& opts, const std::string& scope) {
  ProblemHandle problem = load_problem(opts.input);
  const nw_genpos_scope s = scope == "full" ? NW_SCOPE_FULL : NW_SCOPE_SAMPLED;
  char* json = nullptr;
  require_ok(nw_genpos_json(problem.get(), opts.tol, s, opts.seed, &json));
  const std::string text = take_string(json);
  if (opts.format == "json") {
    emit(opts, text + "\n");
    return 0;
  }
  const nlohmann::json report = nlohmann::json::parse(text);
  std::ostringstream os;
  os << "general_position = "
     << (report.at("is_general_position").get<bool>() ? "true" : "false") << "\n";
  for (const char* key :
       {"predicate1_violations", "predicate2_violations", "predicate3_violations"}) {
    const auto& violations = report.at(key);
    os << key << " = " << violations.size() << "\n";
    for (const auto& v : violations) {
      os << "  - " << v.at("detail").get<std::string>() << "\n";
    }
  }
  os << "predicate3_exhaustive = "
     << (report.at("predicate3_exhaustive").get<bool>() ? "true" : "false") << "\n";
  emit(opts, os.str());
  return 0;
}

int run_perturb(const CommonOpts& opts, double epsilon, const std::string& scope) {
  ProblemHandle problem = load_problem(opts.input);
  if (opts.output.empty()) throw CliError{kExitValidation, "perturb needs --output"};
  const nw_genpos_scope s = scope == "full" ? NW_SCOPE_FULL : NW_SCOPE_SAMPLED;
  nw_problem* raw = nullptr;
  require_ok(nw_perturb(problem.get(), epsilon, opts.seed, s, &raw));
  ProblemHandle moved(raw, nw_problem_free);
  char* json = nullptr;
  require_ok(nw_problem_to_json(moved.get(), &json));
  write_file(opts.output, take_string(json));
  return 0;
}

int run_witness(const CommonOpts& opts, int ball) {
  ProblemHandle problem = load_problem(opts.input);
  char* json = nullptr;
  require_ok(nw_witness_json(problem.get(), ball, opts.tol, &json));
  const std::string text = take_string(json);
  if (opts.format == "json") {
    emit(opts, text + "\n");
    return 0;
  }
  const nlohmann::json w = nlohmann::json::parse(text);
  std::ostringstream os;
  os << "ball          = " << w.at("ball").get<int>() << "\n";
  os << "s             =";
  for (const auto& v : w.at("s")) os << ' ' << fmt(v.get<double>());
  os << "\n";
  os << "u             =";
  for (const auto& v : w.at("u")) os << ' ' << v.get<int64_t>();
  os << "\n";
  os << "scale_log     = " << fmt(w.at("scale_log").get<double>()) << "\n";
  os << "octahedron_bound = " << fmt(w.at("octahedron_bound_log").get<double>()) << "\n";
  os << "witness_log   = " << fmt(w.at("witness_log_value").get<double>()) << "\n";
  os << "inclusion     = "
     << (w.at("inclusion").at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
  for (const auto& row : w.at("inclusion").at("rows")) {
    os << "  ball " << row.at("ball").get<int>() << ": margin "
       << fmt(row.at("margin").get<double>()) << (row.at("pass").get<bool>() ? "" : "  VIOLATED")
       << "\n";
  }
  emit(opts, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"order estimates for n-widths of intersections of anisotropic balls"};
  app.require_subcommand(1);

  CommonOpts opts;
  int64_t n_override = 0;
  std::string n_range;
  std::string n_list;
  int grid_r = 400;
  int64_t max_points = 0;
  std::string scope = "sampled";
  double epsilon = 1e-3;
  int ball = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_output) {
    cmd->add_option("--input", opts.input, "problem file (JSON)")->required();
    if (needs_output) {
      cmd->add_option("--output", opts.output, "output file")->required();
    } else {
      cmd->add_option("--output", opts.output, "output file (default: stdout)");
    }
    cmd->add_option("--tol", opts.tol, "tolerance override");
    cmd->add_option("--threads", opts.threads, "worker threads for candidate evaluation");
    cmd->add_option("--format", opts.format, "human | csv | json")
        ->check(CLI::IsMember({"human", "csv", "json"}));
    cmd->add_option("--seed", opts.seed, "random seed");
  };

  CLI::App* cmd_estimate = app.add_subcommand("estimate", "value and minimizing certificate");
  add_common(cmd_estimate, false);
  cmd_estimate->add_option("--n", n_override, "override the width index");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "CSV of estimates over a range of n");
  add_common(cmd_sweep, false);
  cmd_sweep->add_option("--n-range", n_range, "inclusive range a:b");
  cmd_sweep->add_option("--n", n_list, "comma-separated width indices");

  CLI::App* cmd_oracle = app.add_subcommand("oracle", "grid reference minimum and equivalence");
  add_common(cmd_oracle, false);
  cmd_oracle->add_option("--grid", grid_r, "simplex grid resolution r (step 1/r)")
      ->check(CLI::PositiveNumber);
  cmd_oracle->add_option("--max-points", max_points, "grid enumeration cap");

  CLI::App* cmd_genpos = app.add_subcommand("genpos", "general-position report");
  add_common(cmd_genpos, false);
  cmd_genpos->add_option("--scope", scope, "sampled | full")
      ->check(CLI::IsMember({"sampled", "full"}));

  CLI::App* cmd_perturb = app.add_subcommand("perturb", "nudge into general position");
  add_common(cmd_perturb, true);
  cmd_perturb->add_option("--epsilon", epsilon, "max displacement per coordinate")
      ->check(CLI::PositiveNumber);
  cmd_perturb->add_option("--scope", scope, "sampled | full")
      ->check(CLI::IsMember({"sampled", "full"}));

  CLI::App* cmd_witness = app.add_subcommand("witness", "single-ball lower-bound witness");
  add_common(cmd_witness, false);
  cmd_witness->add_option("--ball", ball, "1-based ball index (default: the m=1 winner)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_estimate->parsed()) return run_estimate(opts, n_override);
    if (cmd_sweep->parsed()) return run_sweep(opts, n_range, n_list);
    if (cmd_oracle->parsed()) return run_oracle(opts, grid_r, max_points);
    if (cmd_genpos->parsed()) return run_genpos(opts, scope);
    if (cmd_perturb->parsed()) return run_perturb(opts, epsilon, scope);
    if (cmd_witness->parsed()) return run_witness(opts, ball);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
