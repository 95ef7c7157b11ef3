#include "l0recov/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "l0recov/objective.hpp"
#include "l0recov/operators.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/thresholding.hpp"

namespace l0recov {

namespace {

struct Tracker {
  CheckResult result;

  explicit Tracker(std::string_view name) {
    result.name = std::string(name);
    result.margin = std::numeric_limits<double>::infinity();
  }

  void observe(double margin, bool ok, std::size_t k, const std::string& why = {}) {
    result.margin = std::min(result.margin, margin);
    if (!ok && result.status != CheckStatus::Fail) {
      result.status = CheckStatus::Fail;
      result.failing_iteration = k;
      result.detail = why;
    }
  }

  CheckResult finish() && {
    if (result.margin == std::numeric_limits<double>::infinity()) result.margin = 0.0;
    return std::move(result);
  }
};

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotApplicable: return "n/a";
  }
  return "unknown";
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerificationReport verify_theorems(const DenseMatrix& a, std::span<const double> y,
                                   const SolverConfig& config, const VerifyOptions& options) {
  config.validate();
  VerificationReport report;
  SolverConfig run_config = config;
  report.spectral_norm_sq =
      config.spectral_norm_sq ? *config.spectral_norm_sq : spectral_norm_sq(a).value;
  run_config.spectral_norm_sq = report.spectral_norm_sq;

  const bool adaptive = std::holds_alternative<PaperAdaptiveStep>(config.step_rule);
  if (const auto* fixed = std::get_if<FixedStep>(&config.step_rule)) {
    report.tau = fixed->tau;
    report.delta = 1.0 / fixed->tau - report.spectral_norm_sq;
  } else if (const auto* safe = std::get_if<SafeBoundStep>(&config.step_rule)) {
    report.delta = safe->margin(report.spectral_norm_sq);
    report.tau = 1.0 / (report.spectral_norm_sq + report.delta);
  }

  const double mu = config.mu;
  const double slack = options.relative_slack;
  Tracker surrogate(kCheckSurrogateDescent);
  Tracker descent(kCheckObjectiveDescent);
  Tracker identity(kCheckSurrogateIdentity);
  Tracker survivors(kCheckSurvivorsUnchanged);

  const auto observer = [&](const IterationView& it) {
    const double l1_prev = objective_l1(it.x_prev, y, a, mu);
    const double l1_next = objective_l1(it.x_next, y, a, mu);
    const double l2_next = surrogate_l2(it.x_next, it.x_prev, y, a, mu, it.tau);
    const double scale = std::max(std::abs(l1_prev), 1.0);

    // L2(x_k; x_k) = L1(x_k).
    surrogate.observe(l1_prev - l2_next, l2_next <= l1_prev + slack * scale, it.k,
                      fmt("L2(x_next) = %.17g exceeds L1(x_k) = %.17g", l2_next, l1_prev));

    const Vector d = subtract(it.x_next, it.x_prev);
    const double eps = norm2_sq(d);
    const double ad_sq = norm2_sq(l0recov::apply(a, d));
    const double lhs = l2_next - l1_next;
    const double rhs = 0.5 * mu * (eps / it.tau - ad_sq);
    const double id_scale = std::max({std::abs(l2_next), std::abs(l1_next), 1e-300});
    const double id_err = std::abs(lhs - rhs) / id_scale;
    identity.observe(options.identity_tolerance - id_err, id_err <= options.identity_tolerance, it.k,
                     fmt("L2 - L1 = %.17g but correction term = %.17g", lhs, rhs));

    if (!adaptive && eps > 0.0) {
      const double guaranteed = 0.5 * mu * report.delta * eps;
      const bool strict = l1_next < l1_prev;
      const bool below_resolution =
          guaranteed <= slack * scale && l1_next <= l1_prev + slack * scale;
      descent.observe(l1_prev - l1_next, strict || below_resolution, it.k,
                      fmt("L1 rose from %.17g to %.17g", l1_prev, l1_next));
    }

    const double t = std::sqrt(2.0 * it.tau / mu);
    bool ok = true;
    for (std::size_t j = 0; j < it.x_next.size() && ok; ++j) {
      const double v = it.x_next[j];
      ok = (v == 0.0 && std::abs(it.x_tilde[j]) < t) || (v == it.x_tilde[j] && std::abs(v) >= t);
    }
    survivors.observe(0.0, ok, it.k, "an entry differs from its hard-thresholded x_tilde value");
  };

  const SolveResult run = iiht_solve(a, y, run_config, {}, observer);
  report.iterations = run.iterations;
  report.stop_reason = run.stop_reason;

  report.checks.push_back(std::move(surrogate).finish());

  if (adaptive) {
    for (auto name : {kCheckObjectiveDescent, kCheckStepSummability, kCheckStepDecay}) {
      report.checks.push_back(CheckResult{.name = std::string(name),
                                          .status = CheckStatus::NotApplicable,
                                          .margin = 0.0,
                                          .failing_iteration = std::nullopt,
                                          .detail = "adaptive step may exceed 1/||A||^2"});
    }
  } else {
    report.checks.push_back(std::move(descent).finish());

    Tracker summable(kCheckStepSummability);
    if (!(report.delta > 0.0)) {
      summable.observe(report.delta, false, 0,
                       fmt("step %.17g is not below 1/||A||^2 = %.17g", report.tau,
                           1.0 / report.spectral_norm_sq));
    } else {
      const double bound = 2.0 * run.trace.front().objective_l1 / (mu * report.delta);
      for (const TraceRecord& rec : run.trace) {
        summable.observe(bound - rec.cum_step_sum, rec.cum_step_sum <= bound * (1.0 + slack), rec.k,
                         fmt("cumulative step sum %.17g exceeds bound %.17g", rec.cum_step_sum, bound));
      }
    }
    report.checks.push_back(std::move(summable).finish());

    Tracker decay(kCheckStepDecay);
    if (run.stop_reason == StopReason::Diverged) {
      decay.observe(-1.0, false, run.iterations, "iteration diverged");
    } else if (run.stop_reason != StopReason::Tolerance && run.trace.size() > 1) {
      const double first = run.trace[1].step_norm_sq;
      const double last = run.trace.back().step_norm_sq;
      const double limit = options.decay_ratio * first;
      decay.observe(limit - last, last < limit || first == 0.0, run.trace.back().k,
                    fmt("final step %.17g not below %.17g", last, limit));
    } else {
      decay.observe(0.0, true, run.iterations);
    }
    report.checks.push_back(std::move(decay).finish());
  }

  report.checks.push_back(std::move(identity).finish());

  Tracker cost(kCheckCostContract);
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    const TraceRecord& rec = run.trace[i];
    cost.observe(0.0, rec.applies == 1 && rec.adjoints == 1, rec.k,
                 fmt("iteration used %u applies and %u adjoints", static_cast<unsigned>(rec.applies), static_cast<unsigned>(rec.adjoints)));
  }
  report.checks.push_back(std::move(cost).finish());
  report.checks.push_back(std::move(survivors).finish());
  return report;
}

void print_report(std::ostream& out, const VerificationReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "  iterations=%zu stop=%s ||A||^2=%.6g tau=%.6g delta=%.6g\n",
                report.iterations, std::string(to_string(report.stop_reason)).c_str(),
                report.spectral_norm_sq, report.tau, report.delta);
  out << line;
  for (const CheckResult& c : report.checks) {
    std::snprintf(line, sizeof line, "  %-20s %-4s margin=%.6g", c.name.c_str(),
                  std::string(to_string(c.status)).c_str(), c.margin);
    out << line;
    if (c.failing_iteration) out << " at k=" << *c.failing_iteration;
    if (c.status == CheckStatus::Fail && !c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
  }
}

}  // namespace l0recov
