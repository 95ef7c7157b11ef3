#include "l0recov/solver_config.hpp"

#include <cmath>
#include <stdexcept>

namespace l0recov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("SolverConfig: mu must be > 0");
  if (!(tol >= 0.0)) throw std::invalid_argument("SolverConfig: tol must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (spectral_norm_sq && !(*spectral_norm_sq > 0.0)) {
    throw std::invalid_argument("SolverConfig: spectral_norm_sq must be > 0");
  }
  std::visit(overloaded{
                 [](const PaperAdaptiveStep& s) {
                   if (!(s.tau_min > 0.0))
                     throw std::invalid_argument("SolverConfig: tau_min must be > 0");
                 },
                 [](const FixedStep& s) {
                   if (!(s.tau > 0.0) || !std::isfinite(s.tau))
                     throw std::invalid_argument("SolverConfig: fixed tau must be > 0");
                 },
                 [](const SafeBoundStep& s) {
                   if (!(s.delta >= 0.0) || !(s.delta_fraction >= 0.0) || !std::isfinite(s.delta) ||
                       !std::isfinite(s.delta_fraction) || !(s.delta + s.delta_fraction > 0.0))
                     throw std::invalid_argument("SolverConfig: safe-bound margin must be > 0");
                 },
             },
             step_rule);
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Diverged: return "diverged";
  }
  return "unknown";
}

std::string_view to_string(InitMode mode) {
  return mode == InitMode::Zero ? "zero" : "adjoint";
}

}  // namespace l0recov
