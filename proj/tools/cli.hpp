#pragma once

// Experiment runner: builds an instance, computes a high-precision reference,
// selects the operator parameter, runs one of the four splitting forms and
// writes traces and summaries.

#include "proxsplit/apps.hpp"
#include "proxsplit/tuning.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxsplit::cli {

/// Exit codes.
inline constexpr int kExitReached = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitMaxIters = 2;
/// Run diverged, or ratecheck found a violated bound.
inline constexpr int kExitFailed = 3;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ParamMode {
  identity,
  scalar_opt,
  diag_opt,
  sdp_separate_alpha,
  sdp_separate_beta,
  sdp_joint_opt,
  estimate,
  manual,
};
std::string to_string(ParamMode mode);
ParamMode param_mode_from_string(const std::string& name);

enum class Algo { drs, admm, pd, pdf };
std::string to_string(Algo algo);
Algo algo_from_string(const std::string& name);

struct ExperimentConfig {
  std::string app = "bqp";
  /// 0 selects the application default (bqp: N=40, K=50; sr: N=50, K=10).
  Index n = 0;
  Index k = 0;
  double sigma_a = 0.05;
  double sigma_b = 1.0;
  double sigma = 2.0;
  double obs_frac = 0.8;
  std::uint64_t seed = 1;
  std::string instance_path;   // load instead of generating
  std::string reference_path;  // load instead of solving

  ParamMode mode = ParamMode::identity;
  double alpha = 1.0;
  double beta = 1.0;
  SrEstimateMode estimate_mode = SrEstimateMode::joint;
  std::optional<BqpRegime> regime;
  GridSpec joint_grid;

  Algo algo = Algo::drs;
  double mse_eps = 1e-6;
  long max_iters = 100000;
  bool timing = false;
  double ref_tol = 1e-10;
  long ref_max_iters = 200000;

  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  int jobs = 1;

  std::string out;
};

/// "lo:hi:n" for n log-spaced points, or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

/// Throws ConfigError on inconsistent settings.
void validate(const ExperimentConfig& config);

/// Full command line (argv[0] included). Writes human-readable output to out
/// and diagnostics to err; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxsplit::cli
