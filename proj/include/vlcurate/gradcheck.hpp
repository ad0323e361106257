#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vlcurate/hnnce.hpp"

namespace vlcurate {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kGradTolerance = 1e-5;
// Denominator floor for the elementwise relative error, so entries that are
// numerically zero are judged on absolute error instead.
inline constexpr double kRelErrorFloor = 1e-4;

double relative_error(double analytic, double numeric);

// Largest elementwise relative error between `analytic` and central
// differences of `f` around `x`.
double max_fd_error(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> x, std::span<const double> analytic,
                    double step = kFdStep);

struct GradCheckOptions {
  Eigen::Index n = 6;
  Eigen::Index d = 5;
  double tau = 0.5;
  std::uint64_t seed = 7;
  double step = kFdStep;
  double tolerance = kGradTolerance;
  std::vector<double> alphas = {1.0, 0.999, 0.9};
  std::vector<double> betas = {0.0, 0.25, 0.5};
  bool include_full_gradient = true;
  // Negates the analytic gradients; the harness must then fail.
  bool inject_sign_flip = false;
};

struct GradCheckEntry {
  std::string block;  // images, texts, tau, ce_logits, objective
  std::optional<double> alpha;
  std::optional<double> beta;
  WeightGradient mode = WeightGradient::kStop;
  double max_rel_error = 0.0;
  bool pass = false;
};

// HN-NCE blocks for every (alpha, beta) cell in both weight-gradient modes,
// the pseudo-label cross-entropy, and the combined objective.
std::vector<GradCheckEntry> run_gradcheck(const GradCheckOptions& options);

bool all_passed(const std::vector<GradCheckEntry>& entries);

// Tab-separated: block, alpha, beta, weights, max_rel_err, status.
void write_gradcheck_report(std::ostream& out, const std::vector<GradCheckEntry>& entries);

}  // namespace vlcurate
