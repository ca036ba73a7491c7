#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonpos/diff.hpp"
#include "photonpos/frames.hpp"
#include "photonpos/wavefields.hpp"

namespace photonpos {

// One verified identity.  `pass` iff `residual <= tol`; negative controls
// store how far the observed violation fell short of the required size, so
// the same rule applies.
struct CheckReport {
  std::string id;
  std::string anchor;  // identity being checked, in plain math notation
  double residual = 0.0;
  double tol = 0.0;
  int samples = 0;
  bool pass = false;
  std::string mode;  // analytic | fd | richardson
};

struct VerifyConfig {
  GridSpec grid{64, 48, 56, 3.0};  // quadrature checks only
  DiffEngine engine = DiffEngine::analytic();
  Measure measure = Measure::BB;
  std::uint64_t seed = 1;
  int packets = 20;            // random Gaussian packets per operator check
  int points_per_packet = 5;   // pointwise residual samples per packet
  int algebra_points = 1000;   // sample count for pointwise matrix identities

  // Tolerance tiers: exact matrix algebra, operator identities evaluated
  // with analytic derivatives, and quadrature-based identities.
  double tol_algebraic = 1e-12;
  double tol_operator = 1e-9;
  double tol_quadrature = 1e-6;

  // Operator-identity tolerance adjusted for the differentiation mode.
  double operator_tol() const {
    if (!engine.numeric()) return tol_operator;
    return std::max(1e-8, 10.0 * engine.h * engine.h);
  }

  // Checks that nest two numeric applications divide by the step twice, so
  // rounding noise scales like eps/h^2; truncation like h^2.
  double nested_tol(double analytic_tol) const {
    if (!engine.numeric()) return analytic_tol;
    const double noise =
        (engine.mode == DiffEngine::Mode::Richardson) ? 2e-4 : 5e-5;
    return std::max(noise, 50.0 * engine.h * engine.h);
  }
  std::string mode_name() const;
};

// Full identity suite for the canonical position operator on one chart.
// Deterministic given (seed, grid, mode); exceptions inside a check are
// converted into a failed report, never propagated.
std::vector<CheckReport> run_axiom_suite(const FrameField& ff,
                                         const VerifyConfig& cfg);

// Gauge-freedom suite: gauged operator axioms, the projector term on
// transversal fields, frame-rotation equivalence, and the winding of the
// transition 1-form around the excluded axis.
std::vector<CheckReport> run_gauge_suite(const FrameField& ff,
                                         const VerifyConfig& cfg);

nlohmann::json report_json(const std::vector<CheckReport>& reports);
bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace photonpos
