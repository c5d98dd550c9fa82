#include "nwidth.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "nwidth/estimator.hpp"
#include "nwidth/genpos.hpp"
#include "nwidth/oracle.hpp"
#include "nwidth/problem.hpp"
#include "nwidth/witness.hpp"

struct nw_problem {
  nwidth::ProblemSpec spec;
};

struct nw_result {
  nwidth::EstimateResult result;
};

namespace {

thread_local std::string g_last_error;

nw_status status_of(const nwidth::Error& e) {
  switch (e.code()) {
    case nwidth::ErrorCode::ParseError: return NW_ERR_PARSE;
    case nwidth::ErrorCode::DimensionMismatch:
    case nwidth::ErrorCode::RangeError:
    case nwidth::ErrorCode::IndexError: return NW_ERR_VALIDATION;
    case nwidth::ErrorCode::CapacityError: return NW_ERR_CAPACITY;
    case nwidth::ErrorCode::RetryExhausted: return NW_ERR_RETRY_EXHAUSTED;
    case nwidth::ErrorCode::InternalError: return NW_ERR_INTERNAL;
  }
  return NW_ERR_INTERNAL;
}

template <typename Fn>
nw_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nwidth::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NW_ERR_INTERNAL;
  }
}

nw_status fail_arg(const char* msg) {
  g_last_error = msg;
  return NW_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nwidth::EstimateOptions make_options(double tol, int threads) {
  nwidth::EstimateOptions options;
  if (tol > 0.0) options.tol = tol;
  options.threads = threads > 0 ? threads : 1;
  return options;
}

}  // namespace

extern "C" {

const char* nw_version(void) { return "1.0.0"; }

const char* nw_last_error(void) { return g_last_error.c_str(); }

void nw_string_free(char* str) { std::free(str); }

nw_status nw_problem_parse(const char* json, nw_problem** out) {
  if (!json || !out) return fail_arg("null argument");
  return guarded([&] {
    *out = new nw_problem{nwidth::parse_problem_json(json)};
    return NW_OK;
  });
}

nw_status nw_problem_to_json(const nw_problem* problem, char** json_out) {
  if (!problem || !json_out) return fail_arg("null argument");
  return guarded([&] {
    *json_out = copy_string(nwidth::problem_to_json(problem->spec));
    return NW_OK;
  });
}

void nw_problem_free(nw_problem* problem) { delete problem; }

int nw_problem_dim(const nw_problem* problem) { return problem ? (int)problem->spec.dim() : 0; }

int nw_problem_ball_count(const nw_problem* problem) {
  return problem ? (int)problem->spec.balls.size() : 0;
}

int64_t nw_problem_width_index(const nw_problem* problem) {
  return problem ? problem->spec.n : 0;
}

int64_t nw_problem_max_width_index(const nw_problem* problem) {
  return problem ? nwidth::max_width_index(problem->spec.k) : 0;
}

nw_status nw_problem_with_n(const nw_problem* problem, int64_t n, nw_problem** out) {
  if (!problem || !out) return fail_arg("null argument");
  return guarded([&] {
    nwidth::ProblemSpec spec = problem->spec;
    spec.n = n;
    *out = new nw_problem{nwidth::validate(spec)};
    return NW_OK;
  });
}

nw_status nw_estimate(const nw_problem* problem, double tol, int threads, nw_result** out) {
  if (!problem || !out) return fail_arg("null argument");
  return guarded([&] {
    *out = new nw_result{nwidth::estimate(problem->spec, make_options(tol, threads))};
    return NW_OK;
  });
}

void nw_result_free(nw_result* result) { delete result; }

double nw_result_log_value(const nw_result* result) {
  return result ? result->result.log_value.log_value : 0.0;
}

double nw_result_value(const nw_result* result) {
  return result ? result->result.log_value.value() : 0.0;
}

int nw_result_m(const nw_result* result) { return result ? (int)result->result.winner.m : 0; }

nw_status nw_result_ball_indices(const nw_result* result, int* buf, size_t buflen) {
  if (!result || !buf) return fail_arg("null argument");
  const auto& indices = result->result.winner.ball_indices;
  if (buflen < indices.size()) return fail_arg("buffer too small");
  for (size_t i = 0; i < indices.size(); ++i) buf[i] = (int)indices[i] + 1;
  return NW_OK;
}

nw_z_kind nw_result_z_kind(const nw_result* result) {
  if (!result) return NW_Z_Q_FACE;
  switch (result->result.winner.Z.kind) {
    case nwidth::ZKind::QFace: return NW_Z_Q_FACE;
    case nwidth::ZKind::HalfFace: return NW_Z_HALF_FACE;
    case nwidth::ZKind::OmegaEqualizer: return NW_Z_OMEGA_EQUALIZER;
  }
  return NW_Z_Q_FACE;
}

int nw_result_z_index_count(const nw_result* result) {
  return result ? (int)result->result.winner.Z.I.size() : 0;
}

nw_status nw_result_z_indices(const nw_result* result, int* buf, size_t buflen) {
  if (!result || !buf) return fail_arg("null argument");
  const auto& I = result->result.winner.Z.I;
  if (buflen < I.size()) return fail_arg("buffer too small");
  for (size_t i = 0; i < I.size(); ++i) buf[i] = (int)I[i] + 1;
  return NW_OK;
}

nw_status nw_result_lambda(const nw_result* result, double* buf, size_t buflen) {
  if (!result || !buf) return fail_arg("null argument");
  const auto& lambda = result->result.winner.weights.lambda;
  if (buflen < lambda.size()) return fail_arg("buffer too small");
  for (size_t i = 0; i < lambda.size(); ++i) buf[i] = lambda[i];
  return NW_OK;
}

nw_status nw_result_theta_reciprocal(const nw_result* result, double* buf, size_t buflen) {
  if (!result || !buf) return fail_arg("null argument");
  const auto& coords = result->result.winner.weights.theta_hat.coords();
  if (buflen < coords.size()) return fail_arg("buffer too small");
  for (size_t i = 0; i < coords.size(); ++i) buf[i] = coords[i];
  return NW_OK;
}

int64_t nw_result_candidate_count(const nw_result* result) {
  return result ? (int64_t)result->result.candidate_count : 0;
}

nw_status nw_result_to_json(const nw_result* result, char** json_out) {
  if (!result || !json_out) return fail_arg("null argument");
  return guarded([&] {
    *json_out = copy_string(nwidth::estimate_result_to_json(result->result));
    return NW_OK;
  });
}

nw_status nw_sweep_csv(const nw_problem* problem, const int64_t* n_values, size_t count,
                       double tol, int threads, char** csv_out) {
  if (!problem || !csv_out || (count > 0 && !n_values)) return fail_arg("null argument");
  return guarded([&] {
    std::vector<long long> ns(n_values, n_values + count);
    const auto entries = nwidth::sweep_n(problem->spec, ns, make_options(tol, threads));
    *csv_out = copy_string(nwidth::sweep_to_csv(entries));
    return NW_OK;
  });
}

nw_status nw_grid_min_json(const nw_problem* problem, int grid_r, int64_t max_points,
                           char** json_out) {
  if (!problem || !json_out) return fail_arg("null argument");
  return guarded([&] {
    nwidth::GridSpec grid;
    grid.r = grid_r;
    if (max_points > 0) grid.max_points = max_points;
    const nwidth::GridMinResult res = nwidth::grid_min(problem->spec, grid);
    nlohmann::json j;
    j["grid_r"] = grid.r;
    j["points"] = res.points;
    j["log_min"] = res.log_min.log_value;
    j["min"] = res.log_min.value();
    j["weights"] = res.weights;
    j["error_bound"] = res.error_bound;
    j["certified_lower_bound"] = res.certified_lower_bound();
    *json_out = copy_string(j.dump(2));
    return NW_OK;
  });
}

nw_status nw_phi_check_json(int samples, int max_dim, uint64_t seed, char** json_out) {
  if (!json_out || samples < 0 || max_dim < 1) return fail_arg("bad arguments");
  return guarded([&] {
    const auto report = nwidth::exhaustive_phi_check(samples, max_dim, seed);
    *json_out = copy_string(nwidth::phi_check_report_to_json(report));
    return NW_OK;
  });
}

nw_status nw_genpos_json(const nw_problem* problem, double tol, nw_genpos_scope scope,
                         uint64_t seed, char** json_out) {
  if (!problem || !json_out) return fail_arg("null argument");
  return guarded([&] {
    nwidth::GenPosOptions options;
    if (tol > 0.0) options.tol = tol;
    options.scope =
        scope == NW_SCOPE_FULL ? nwidth::GenPosScope::Full : nwidth::GenPosScope::Sampled;
    options.seed = seed;
    const auto report = nwidth::check_general_position(problem->spec, options);
    *json_out = copy_string(nwidth::genpos_report_to_json(report));
    return NW_OK;
  });
}

nw_status nw_perturb(const nw_problem* problem, double epsilon, uint64_t seed,
                     nw_genpos_scope scope, nw_problem** out) {
  if (!problem || !out) return fail_arg("null argument");
  return guarded([&] {
    nwidth::PerturbOptions options;
    options.epsilon = epsilon;
    options.seed = seed;
    options.check.scope =
        scope == NW_SCOPE_FULL ? nwidth::GenPosScope::Full : nwidth::GenPosScope::Sampled;
    options.check.seed = seed;
    *out = new nw_problem{nwidth::perturb(problem->spec, options)};
    return NW_OK;
  });
}

nw_status nw_witness_json(const nw_problem* problem, int ball_one_based, double slack,
                          char** json_out) {
  if (!problem || !json_out) return fail_arg("null argument");
  return guarded([&] {
    std::size_t alpha;
    if (ball_one_based > 0) {
      alpha = (std::size_t)ball_one_based - 1;
    } else {
      const nwidth::EstimateResult res = nwidth::estimate(problem->spec);
      if (res.winner.m != 1) {
        throw nwidth::Error(nwidth::ErrorCode::IndexError,
                            "the minimizing certificate has m = " + std::to_string(res.winner.m) +
                                "; pass an explicit ball index for the witness");
      }
      alpha = res.winner.ball_indices[0];
    }
    const nwidth::WitnessSet witness = nwidth::build_witness_m1(problem->spec, alpha);
    const nwidth::InclusionReport inclusion = nwidth::inclusion_check(
        problem->spec, witness, slack > 0.0 ? slack : nwidth::kDefaultTol);
    *json_out = copy_string(nwidth::witness_to_json(witness, inclusion));
    return NW_OK;
  });
}

}  // extern "C"
