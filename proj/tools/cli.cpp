#include "cli.hpp"

#include "proxsplit/io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace proxsplit::cli {

namespace {

using nlohmann::json;

template <typename Enum>
struct NamedValue {
  const char* name;
  Enum value;
};

constexpr NamedValue<ParamMode> kParamModes[] = {
    {"identity", ParamMode::identity},
    {"scalar-opt", ParamMode::scalar_opt},
    {"diag-opt", ParamMode::diag_opt},
    {"sdp-separate-alpha", ParamMode::sdp_separate_alpha},
    {"sdp-separate-beta", ParamMode::sdp_separate_beta},
    {"sdp-joint-opt", ParamMode::sdp_joint_opt},
    {"estimate", ParamMode::estimate},
    {"manual", ParamMode::manual},
};

constexpr NamedValue<Algo> kAlgos[] = {
    {"drs", Algo::drs}, {"admm", Algo::admm}, {"pd", Algo::pd}, {"pdf", Algo::pdf}};

template <typename Enum, std::size_t Size>
std::string name_of(const NamedValue<Enum> (&table)[Size], Enum value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename Enum, std::size_t Size>
Enum value_of(const NamedValue<Enum> (&table)[Size], const std::string& name, const char* what) {
  for (const auto& entry : table) {
    if (name == entry.name) return entry.value;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

AnyInstance load_or_generate(const ExperimentConfig& c) {
  if (!c.instance_path.empty()) {
    AnyInstance inst = instance_from_json(read_json_file(c.instance_path));
    const bool is_bqp = std::holds_alternative<BqpInstance>(inst);
    if (is_bqp != (c.app == "bqp")) {
      throw ConfigError("instance file holds a different app than --app " + c.app);
    }
    return inst;
  }
  if (c.app == "bqp") {
    return gen_bqp(c.n > 0 ? c.n : 40, c.k > 0 ? c.k : 50, c.sigma_a, c.sigma_b, c.seed);
  }
  return gen_sr(c.n > 0 ? c.n : 50, c.k > 0 ? c.k : 10, c.sigma, c.obs_frac, c.seed);
}

OperatorParam estimate_param(const BqpInstance& inst, const ExperimentConfig& c) {
  const BqpEstimates est = bqp_estimates(inst.A, inst.G, inst.N(), c.regime);
  switch (c.estimate_mode) {
    case SrEstimateMode::joint:
      return bqp_estimate(inst.A, inst.G, inst.N(), c.regime);
    case SrEstimateMode::alpha:
      return OperatorParam::sdp_hadamard(est.alpha_tilde, 1.0, inst.shape);
    case SrEstimateMode::beta:
      if (est.regime == BqpRegime::large) {
        throw ConfigError("the beta estimate is defined only in the small regime (||G|| < N)");
      }
      return OperatorParam::sdp_hadamard(1.0, est.beta_tilde, inst.shape);
  }
  throw ConfigError("unhandled estimate mode");
}

OperatorParam estimate_param(const SrInstance& inst, const ExperimentConfig& c) {
  return sr_estimate(inst.N, inst.K, inst.sigma, c.estimate_mode);
}

OperatorParam reference_param(const BqpInstance& inst, const ExperimentConfig& c) {
  return bqp_estimate(inst.A, inst.G, inst.N(), c.regime);
}

OperatorParam reference_param(const SrInstance& inst, const ExperimentConfig&) {
  return sr_estimate(inst.N, inst.K, inst.sigma, SrEstimateMode::joint);
}

/// Everything a subcommand needs once the instance and reference exist.
template <typename Scalar>
struct Problem {
  json instance_json;
  ProxPair<Scalar> pair;
  BlockShape shape;
  OperatorParam estimate = OperatorParam::identity();
  OperatorParam ref_param = OperatorParam::identity();
  ReferenceSolution<Scalar> reference;
  bool reference_loaded = false;
};

template <typename Instance>
auto make_problem(const Instance& inst, const ExperimentConfig& c) {
  using Scalar = typename decltype(build_prox_pair(inst))::ScalarType;
  Problem<Scalar> p;
  p.instance_json = to_json(inst);
  p.pair = build_prox_pair(inst);
  if constexpr (std::is_same_v<Instance, BqpInstance>) {
    p.shape = inst.shape;
  } else {
    p.shape = inst.shape();
  }
  if (c.mode == ParamMode::estimate) p.estimate = estimate_param(inst, c);
  p.ref_param = reference_param(inst, c);
  if (!c.reference_path.empty()) {
    p.reference = reference_from_json<Scalar>(read_json_file(c.reference_path));
    if (p.reference.X.dim() != p.pair.dim) {
      throw ConfigError("reference dimension does not match the instance");
    }
    p.reference_loaded = true;
  } else {
    p.reference = reference_solve(p.pair, p.ref_param, c.ref_tol, c.ref_max_iters);
  }
  return p;
}

template <typename Scalar>
SdpSolutionPair<Scalar> solution_pair(const Problem<Scalar>& p) {
  return {p.reference.X, p.reference.Lambda, DenseHermitian<Scalar>::zero(p.pair.dim), p.shape};
}

template <typename Scalar>
OperatorParam resolve_param(const Problem<Scalar>& p, const ExperimentConfig& c) {
  switch (c.mode) {
    case ParamMode::identity:
      return OperatorParam::identity();
    case ParamMode::manual:
      return OperatorParam::sdp_hadamard(c.alpha, c.beta, p.shape);
    case ParamMode::scalar_opt:
      return OperatorParam::scalar(optimal_scalar(solution_pair(p)));
    case ParamMode::diag_opt:
      throw ConfigError("diag-opt applies to vector problems; use an sdp-* mode for " +
                        std::string("the matrix applications"));
    case ParamMode::sdp_separate_alpha:
      return OperatorParam::sdp_hadamard(sdp_separate_choices(solution_pair(p)).alpha_tilde, 1.0, p.shape);
    case ParamMode::sdp_separate_beta:
      return OperatorParam::sdp_hadamard(1.0, sdp_separate_choices(solution_pair(p)).beta_tilde, p.shape);
    case ParamMode::sdp_joint_opt: {
      const JointChoice choice = sdp_joint_search(solution_pair(p), c.joint_grid);
      return OperatorParam::sdp_hadamard(choice.alpha, choice.beta, p.shape);
    }
    case ParamMode::estimate:
      return p.estimate;
  }
  throw ConfigError("unhandled parameter mode");
}

template <typename Scalar>
SplitResult<Scalar> solve(const Problem<Scalar>& p, const OperatorParam& s, const ExperimentConfig& c,
                          const PsiObserver<Scalar>& observer = {}) {
  StopRule<Scalar> stop;
  stop.criterion = StopCriterion::mse;
  stop.reference = &p.reference.X;
  stop.mse_eps = c.mse_eps;
  stop.max_iters = c.max_iters;
  stop.record_timing = c.timing;
  const auto psi0 = DenseHermitian<Scalar>::zero(p.pair.dim);
  switch (c.algo) {
    case Algo::drs:
      return run_drs(p.pair, s, psi0, stop, observer);
    case Algo::admm: {
      const auto init = matched_init(p.pair, s, psi0);
      return run_admm(p.pair, s, init.z0, init.lambda0, stop, observer);
    }
    case Algo::pd: {
      const auto init = matched_init(p.pair, s, psi0);
      return run_pd(p.pair, s, init.x0, init.lambda_prev, init.lambda0, stop, observer);
    }
    case Algo::pdf: {
      const auto init = matched_init(p.pair, s, psi0);
      return run_pdf(p.pair, s, psi0, init.lambda0, stop, observer);
    }
  }
  throw ConfigError("unhandled algorithm");
}

int exit_code(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return kExitReached;
    case StopReason::max_iters: return kExitMaxIters;
    case StopReason::diverged: return kExitFailed;
  }
  return kExitFailed;
}

std::filesystem::path prepare_out(const ExperimentConfig& c) {
  std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename Scalar>
json reference_meta(const Problem<Scalar>& p) {
  json j;
  j["iterations"] = p.reference.iterations;
  j["opt_residual"] = p.reference.opt_residual;
  j["converged"] = p.reference.converged;
  j["loaded"] = p.reference_loaded;
  if (!p.reference_loaded) j["param"] = to_json(p.ref_param);
  return j;
}

template <typename Scalar>
void write_common_artifacts(const std::filesystem::path& dir, const Problem<Scalar>& p) {
  write_json_file(dir / "instance.json", p.instance_json);
  write_json_file(dir / "reference.json", to_json(p.reference));
}

template <typename Scalar>
int cmd_run(const Problem<Scalar>& p, const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const OperatorParam s = resolve_param(p, c);
  const SplitResult<Scalar> result = solve(p, s, c);
  const GainReport gain = acceleration_gain(s, solution_pair(p));

  json summary;
  summary["app"] = c.app;
  summary["seed"] = c.seed;
  summary["algo"] = to_string(c.algo);
  summary["param_mode"] = to_string(c.mode);
  summary["param"] = to_json(s);
  summary["iterations"] = result.state.k;
  summary["reason"] = to_string(result.trace.reason);
  summary["mse_eps"] = c.mse_eps;
  summary["final_mse"] = result.trace.mse.empty() ? 0.0 : result.trace.mse.back();
  summary["final_opt_residual"] = result.trace.opt_residual.empty() ? 0.0 : result.trace.opt_residual.back();
  summary["xi"] = gain.xi;
  summary["xi_numerator"] = gain.numerator;
  summary["xi_denominator"] = gain.denominator;
  summary["reference"] = reference_meta(p);
  if (!result.trace.diagnostic.empty()) summary["diagnostic"] = result.trace.diagnostic;

  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    write_common_artifacts(dir, p);
    std::ofstream trace(dir / "trace.csv");
    write_trace_csv(trace, result.trace);
    write_json_file(dir / "summary.json", summary);
  }
  if (!p.reference.converged) {
    err << "warning: reference stopped at optimality residual " << p.reference.opt_residual << "\n";
  }
  out << c.app << " " << to_string(c.algo) << " " << s.describe() << ": " << result.state.k
      << " iterations, " << to_string(result.trace.reason) << ", final mse "
      << short_fmt(summary["final_mse"].get<double>()) << ", xi " << short_fmt(gain.xi) << "\n";
  if (!result.trace.diagnostic.empty()) err << result.trace.diagnostic << "\n";
  return exit_code(result.trace.reason);
}

struct SweepCell {
  double alpha = 1.0;
  double beta = 1.0;
  long iterations = 0;
  double final_mse = 0.0;
  StopReason reason = StopReason::max_iters;
};

template <typename Scalar>
int cmd_sweep(const Problem<Scalar>& p, const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const std::vector<double> alphas = c.alpha_grid.empty() ? std::vector<double>{c.alpha} : c.alpha_grid;
  const std::vector<double> betas = c.beta_grid.empty() ? std::vector<double>{c.beta} : c.beta_grid;
  std::vector<SweepCell> cells;
  for (double a : alphas) {
    for (double b : betas) cells.push_back({a, b});
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        SweepCell& cell = cells[i];
        const auto s = OperatorParam::sdp_hadamard(cell.alpha, cell.beta, p.shape);
        const auto result = solve(p, s, c);
        cell.iterations = result.state.k;
        cell.final_mse = result.trace.mse.empty() ? 0.0 : result.trace.mse.back();
        cell.reason = result.trace.reason;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(c.jobs, static_cast<int>(cells.size())));
  {
    std::vector<std::jthread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream table;
  table << "# proxsplit-sweep v1\nalpha,beta,iterations,final_mse,reason\n";
  for (const auto& cell : cells) {
    table << fmt(cell.alpha) << ',' << fmt(cell.beta) << ',' << cell.iterations << ','
          << fmt(cell.final_mse) << ',' << to_string(cell.reason) << '\n';
  }
  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    write_common_artifacts(dir, p);
    std::ofstream(dir / "sweep.csv") << table.str();
  }
  out << table.str();
  const bool all_reached = std::all_of(cells.begin(), cells.end(),
                                       [](const SweepCell& cell) { return cell.reason == StopReason::converged; });
  return all_reached ? kExitReached : kExitMaxIters;
}

json violation_json(long count, const std::optional<long>& first) {
  json j;
  j["count"] = count;
  j["first_k"] = first ? json(*first) : json(nullptr);
  return j;
}

template <typename Scalar>
int cmd_ratecheck(const Problem<Scalar>& p, const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const OperatorParam s = resolve_param(p, c);
  CocoercivityEstimator estimator;
  std::optional<DenseHermitian<Scalar>> prev_k, prev_k1;
  PsiObserver<Scalar> observer = [&](const DenseHermitian<Scalar>& psi_k, const DenseHermitian<Scalar>& psi_k1) {
    if (prev_k) estimator.add(*prev_k, *prev_k1, psi_k, psi_k1);
    prev_k = psi_k;
    prev_k1 = psi_k1;
  };
  const SplitResult<Scalar> result = solve(p, s, c, observer);
  const double l_hat = estimator.estimate();
  const RateReport report = rate_check(result.trace, RateBound{l_hat});

  json j;
  j["app"] = c.app;
  j["param"] = to_json(s);
  j["iterations"] = result.state.k;
  j["reason"] = to_string(result.trace.reason);
  j["L_hat"] = l_hat;
  j["pairs_used"] = estimator.pairs_used();
  j["basic"] = violation_json(report.basic_violations, report.first_basic_violation);
  j["sharp"] = violation_json(report.sharp_violations, report.first_sharp_violation);
  j["monotone"] = violation_json(report.monotone_violations, report.first_monotone_violation);
  j["anchor_sq"] = report.anchor_sq;
  j["psi_star_proxied"] = report.psi_star_proxied;
  json calibration = json::array();
  for (long k : {20L, 100L}) {
    calibration.push_back({{"L", 0.99}, {"k", k}, {"sharp", sharp_rate_factor(0.99, k)},
                           {"basic", 1.0 / static_cast<double>(k + 1)}});
  }
  j["calibration"] = calibration;

  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    write_common_artifacts(dir, p);
    std::ofstream trace(dir / "trace.csv");
    write_trace_csv(trace, result.trace);
    write_json_file(dir / "ratecheck.json", j);
  }
  out << "iterations " << result.state.k << " (" << to_string(result.trace.reason) << ")\n"
      << "L_hat " << short_fmt(l_hat) << " from " << estimator.pairs_used() << " pairs\n"
      << "basic bound violations " << report.basic_violations << "\n"
      << "sharp bound violations (L_hat) " << report.sharp_violations << "\n"
      << "monotonicity violations " << report.monotone_violations << "\n"
      << "fixed point proxied by the final iterate\n";
  for (const auto& row : calibration) {
    out << "L=0.99 k=" << row["k"].get<long>() << ": sharp " << short_fmt(row["sharp"].get<double>())
        << " basic " << short_fmt(row["basic"].get<double>()) << "\n";
  }
  return report.ok() ? kExitReached : kExitFailed;
}

int cmd_gen(const ExperimentConfig& c, std::ostream& out) {
  const AnyInstance inst = load_or_generate(c);
  const json j = std::visit([](const auto& i) { return to_json(i); }, inst);
  if (c.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(prepare_out(c) / "instance.json", j);
  }
  return kExitReached;
}

enum class Command { run, sweep, ratecheck, gen };

int dispatch(Command command, const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  if (command == Command::gen) return cmd_gen(c, out);
  const AnyInstance inst = load_or_generate(c);
  return std::visit(
      [&](const auto& instance) {
        const auto problem = make_problem(instance, c);
        switch (command) {
          case Command::run: return cmd_run(problem, c, out, err);
          case Command::sweep: return cmd_sweep(problem, c, out, err);
          case Command::ratecheck: return cmd_ratecheck(problem, c, out, err);
          case Command::gen: break;
        }
        return kExitInvalid;
      },
      inst);
}

}  // namespace

std::string to_string(ParamMode mode) { return name_of(kParamModes, mode); }
ParamMode param_mode_from_string(const std::string& name) { return value_of(kParamModes, name, "parameter mode"); }
std::string to_string(Algo algo) { return name_of(kAlgos, algo); }
Algo algo_from_string(const std::string& name) { return value_of(kAlgos, name, "algorithm"); }

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  auto number = [&](const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw ConfigError("bad number '" + token + "' in grid '" + text + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("grid '" + text + "' must be lo:hi:n");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double count = number(parts[2]);
    if (!(lo > 0.0) || !(hi >= lo) || count < 1 || count != std::floor(count)) {
      throw ConfigError("grid '" + text + "' needs 0 < lo <= hi and an integer n >= 1");
    }
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      values.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
    values.front() = lo;
    values.back() = hi;
    return values;
  }
  std::stringstream ss(text);
  for (std::string token; std::getline(ss, token, ',');) values.push_back(number(token));
  if (values.empty()) throw ConfigError("grid is empty");
  return values;
}

void validate(const ExperimentConfig& c) {
  if (c.app != "bqp" && c.app != "sr") throw ConfigError("--app must be bqp or sr");
  if (c.n < 0 || c.k < 0) throw ConfigError("N and K must be positive");
  if (!(c.mse_eps > 0.0)) throw ConfigError("--mse-eps must be positive");
  if (c.max_iters < 1) throw ConfigError("--max-iters must be >= 1");
  if (c.jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (c.mode == ParamMode::manual && (!(c.alpha > 0.0) || !(c.beta > 0.0))) {
    throw ConfigError("manual mode needs --alpha > 0 and --beta > 0");
  }
  if (c.mode == ParamMode::diag_opt) {
    throw ConfigError("diag-opt applies to vector problems; the matrix applications need an sdp-* mode");
  }
  for (double v : c.alpha_grid) {
    if (!(v > 0.0)) throw ConfigError("alpha grid values must be positive");
  }
  for (double v : c.beta_grid) {
    if (!(v > 0.0)) throw ConfigError("beta grid values must be positive");
  }
  if (c.joint_grid.points < 2 || !(c.joint_grid.lo > 0.0) || !(c.joint_grid.hi > c.joint_grid.lo)) {
    throw ConfigError("joint search grid needs 0 < lo < hi and at least 2 points");
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameterized Douglas-Rachford splitting for block SDPs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file; keys are long option names")->check(CLI::ExistingFile);
  app.get_formatter()->column_width(36);

  ExperimentConfig c;
  std::string mode = "identity";
  std::string algo = "drs";
  std::string estimate_mode = "joint";
  std::string regime = "auto";
  std::string alpha_grid, beta_grid;

  app.add_option("--app", c.app, "Application")->check(CLI::IsMember({"bqp", "sr"}))->capture_default_str();
  app.add_option("-N,--N", c.n, "Problem size N (0: 40 for bqp, 50 for sr)")->capture_default_str();
  app.add_option("-K,--K", c.k, "Rows of A (bqp) or spike count (sr); 0: 50 for bqp, 10 for sr")
      ->capture_default_str();
  app.add_option("--sigma-a", c.sigma_a, "bqp: std of A")->capture_default_str();
  app.add_option("--sigma-b", c.sigma_b, "bqp: std of b")->capture_default_str();
  app.add_option("--sigma", c.sigma, "sr: std of spike amplitudes")->capture_default_str();
  app.add_option("--obs-frac", c.obs_frac, "sr: observed fraction of measurements")->capture_default_str();
  app.add_option("--seed", c.seed, "Instance seed")->envname("PROXSPLIT_SEED")->capture_default_str();
  app.add_option("--instance", c.instance_path, "Load the instance from JSON instead of generating");
  app.add_option("--reference", c.reference_path, "Load the reference solution from JSON instead of solving");
  app.add_option("--param-mode", mode, "Parameter selection")
      ->check(CLI::IsMember({"identity", "scalar-opt", "diag-opt", "sdp-separate-alpha", "sdp-separate-beta",
                             "sdp-joint-opt", "estimate", "manual"}))
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "manual mode alpha; sweep alpha when no grid is given")->capture_default_str();
  app.add_option("--beta", c.beta, "manual mode beta; sweep beta when no grid is given")->capture_default_str();
  app.add_option("--estimate-mode", estimate_mode, "Which a-priori estimate to use")
      ->check(CLI::IsMember({"joint", "alpha", "beta"}))
      ->capture_default_str();
  app.add_option("--bqp-regime", regime, "bqp: force the estimate regime")
      ->check(CLI::IsMember({"auto", "small", "large"}))
      ->capture_default_str();
  app.add_option("--joint-grid-lo", c.joint_grid.lo, "sdp-joint-opt: grid lower bound")->capture_default_str();
  app.add_option("--joint-grid-hi", c.joint_grid.hi, "sdp-joint-opt: grid upper bound")->capture_default_str();
  app.add_option("--joint-grid-points", c.joint_grid.points, "sdp-joint-opt: points per axis")
      ->capture_default_str();
  app.add_option("--algo", algo, "Splitting form")->check(CLI::IsMember({"drs", "admm", "pd", "pdf"}))
      ->capture_default_str();
  app.add_option("--mse-eps", c.mse_eps, "Stop when the MSE against the reference falls below this")
      ->capture_default_str();
  app.add_option("--max-iters", c.max_iters, "Iteration cap")->capture_default_str();
  app.add_flag("--timing", c.timing, "Record wall-clock time per iteration (breaks byte-identical traces)");
  app.add_option("--ref-tol", c.ref_tol, "Reference solve optimality tolerance")->capture_default_str();
  app.add_option("--ref-max-iters", c.ref_max_iters, "Reference solve iteration cap")->capture_default_str();
  app.add_option("--alpha-grid", alpha_grid, "sweep: lo:hi:n (log-spaced) or a comma list");
  app.add_option("--beta-grid", beta_grid, "sweep: lo:hi:n (log-spaced) or a comma list");
  app.add_option("--jobs", c.jobs, "sweep: concurrent cells")->capture_default_str();
  app.add_option("--out", c.out, "Output directory (stdout summary only when empty)");

  Command command = Command::run;
  app.add_subcommand("run", "Solve once and report iterations to the MSE threshold")->fallthrough()->callback(
      [&] { command = Command::run; });
  app.add_subcommand("sweep", "Iterations over an (alpha, beta) grid")->fallthrough()->callback(
      [&] { command = Command::sweep; });
  app.add_subcommand("ratecheck", "Check the worst-case rate bounds along a run")->fallthrough()->callback(
      [&] { command = Command::ratecheck; });
  app.add_subcommand("gen", "Generate an instance only")->fallthrough()->callback(
      [&] { command = Command::gen; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    c.mode = param_mode_from_string(mode);
    c.algo = algo_from_string(algo);
    c.estimate_mode = sr_estimate_mode_from_string(estimate_mode);
    if (regime == "small") c.regime = BqpRegime::small;
    if (regime == "large") c.regime = BqpRegime::large;
    if (!alpha_grid.empty()) c.alpha_grid = parse_grid(alpha_grid);
    if (!beta_grid.empty()) c.beta_grid = parse_grid(beta_grid);
    validate(c);
    return dispatch(command, c, out, err);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("proxsplit");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace proxsplit::cli
