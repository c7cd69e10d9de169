// Acceptance suite: every release-blocking check as one pass/fail line.
// Exact-identity criteria pin relative tolerances; Monte Carlo criteria pin
// sample sizes, significance levels and the 2-of-3-seeds rule; three
// criteria additionally pin wall-clock budgets.  Exit status 0 iff all pass.

#include "alcove/cartan.hpp"
#include "alcove/experiments.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

using namespace alcove;

namespace {

struct Criterion {
  std::string label;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

ExperimentReport run(const GroupModel& g, const std::string& name) {
  ExperimentParams p;
  p.seed = 7;
  p.threads = 1;
  return run_experiment(g, name, p);
}

std::string stat_vs(const ExperimentReport& r) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "stat=%.3e bound=%.1e", r.statistic, r.threshold);
  return buf;
}

}  // namespace

int main() {
  GroupModel su2 = build_su_model(2);
  GroupModel su3 = build_su_model(3);
  std::vector<Criterion> results;

  auto add = [&](const std::string& label, bool passed, const std::string& detail,
                 double seconds) {
    results.push_back({label, passed, detail, seconds});
    std::printf("[%2zu/12] %-44s %s  %s  (%.1fs)\n", results.size(), label.c_str(),
                passed ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
  };

  try {
    // 1. Constant ratio of the spectral and reflection kernels on the pinned
    //    (t, x, y) grid, within 1e-8 relative and under five seconds.
    {
      ExperimentReport r = run(su2, "poisson-identity");
      bool ok = r.passed && r.wall_time < 5.0;
      add("poisson summation constant ratio (su2)", ok,
          stat_vs(r) + (r.wall_time < 5.0 ? "" : " [over 5s budget]"), r.wall_time);
    }

    // 2. Conditioned kernel rows integrate to one: 1e-8 for the segment
    //    alcove, 1e-4 for the triangle quadrature; both under ten seconds.
    {
      ExperimentReport a = run(su2, "qdoob-stochastic");
      ExperimentReport b = run(su3, "qdoob-stochastic");
      double secs = a.wall_time + b.wall_time;
      bool ok = a.passed && b.passed && secs < 10.0;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "su2=%.3e su3=%.3e bounds=1e-08/1e-04",
                    a.statistic, b.statistic);
      add("conditioned kernel rows sum to one", ok,
          std::string(buf) + (secs < 10.0 ? "" : " [over 10s budget]"), secs);
    }

    // 3. Entrance law at inverted time equals the conditioned kernel on the
    //    pinned gamma/t/x grid, 1e-8 relative.
    {
      ExperimentReport r = run(su2, "lemma1");
      add("entrance law at inverted time (su2)", r.passed, stat_vs(r), r.wall_time);
    }

    // 4. Change-of-variables identity linking the two space-time killed
    //    kernels, 1e-8 relative on the pinned (r,t) grid.
    {
      ExperimentReport r = run(su2, "lemma2");
      add("space-time kernel identity (su2)", r.passed, stat_vs(r), r.wall_time);
    }

    // 5. Theta-image representation of the harmonic function: grid ratio
    //    constant to 1e-8 relative.
    {
      ExperimentReport r = run(su2, "psi2-ratio");
      add("harmonic function image-sum ratio (su2)", r.passed, stat_vs(r), r.wall_time);
    }

    // 6. Space-time harmonicity: FD residual < 1e-5 relative at 20 interior
    //    points, nonnegative values, boundary vanishing to 1e-10.
    {
      ExperimentReport r = run(su2, "harmonicity");
      add("space-time harmonicity residuals (su2)", r.passed,
          "worst normalized part=" + std::to_string(r.statistic), r.wall_time);
    }

    // 7. Endpoint of the drifted group Brownian motion vs the conditioned
    //    kernel: KS at 1%, N=30000, ds=5e-4, 2 of 3 seeds, under 2 minutes.
    {
      ExperimentReport r = run(su2, "statement1");
      bool ok = r.passed && r.wall_time < 120.0;
      add("group endpoint law matches doob kernel", ok,
          stat_vs(r) + (r.wall_time < 120.0 ? "" : " [over 2min budget]"), r.wall_time);
    }

    // 8. Radial sheet marginals follow the entrance law: scalar KS for the
    //    segment (both drifts, 2/3 seeds), chi-square smoke for the triangle.
    {
      ExperimentReport a = run(su2, "main-theorem");
      ExperimentReport b = run(su3, "main-theorem");
      char buf[128];
      std::snprintf(buf, sizeof(buf), "su2 D/crit=%.2f su3 chi2/crit=%.2f",
                    a.statistic, b.statistic);
      add("radial sheet law is the entrance law", a.passed && b.passed, buf,
          a.wall_time + b.wall_time);
    }

    // 9. Time inversion: closed-form samples at level 1/2 scaled by t=2 and
    //    simulated endpoints at t=2 both pass one-sample KS at 1%.
    {
      ExperimentReport r = run(su2, "time-inversion");
      add("time inversion of the conditioned process", r.passed, stat_vs(r),
          r.wall_time);
    }

    // 10. Group increment marginals: KS against the drift-free law at the
    //     increment horizon plus decorrelation |corr| < 3/sqrt(N), N=20000.
    {
      ExperimentReport r = run(su2, "increments");
      add("group increments: law and independence", r.passed, stat_vs(r), r.wall_time);
    }

    // 11. Radial part is a class function of the driving path: smooth-loop
    //     gauge shifts < 5 ds, constant-loop shifts < 1e-10.
    {
      ExperimentReport a = run(su2, "gauge-invariance");
      ExperimentReport b = run(su3, "gauge-invariance");
      char buf[128];
      std::snprintf(buf, sizeof(buf), "su2=%.3f su3=%.3f (normalized)", a.statistic,
                    b.statistic);
      add("gauge invariance of the radial part", a.passed && b.passed, buf,
          a.wall_time + b.wall_time);
    }

    // 12. Sheet covariance min(s,s')min(t,t')(a|b) over the 4x4 probe set,
    //     within 3/sqrt(N) at N=100000.
    {
      ExperimentReport r = run(su2, "covariance-sheet");
      add("brownian sheet covariance probes", r.passed, stat_vs(r), r.wall_time);
    }
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  double total = 0.0;
  for (const Criterion& c : results) {
    failed += c.passed ? 0 : 1;
    total += c.seconds;
  }
  std::printf("acceptance: %zu/12 passed (%.0fs total)\n", results.size() - failed,
              total);
  return failed == 0 ? 0 : 1;
}
