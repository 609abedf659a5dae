#ifndef LVDELAY_REPORT_HPP
#define LVDELAY_REPORT_HPP

#include <json.hpp>
#include <string>

#include "lvdelay/attractivity.hpp"
#include "lvdelay/simulator.hpp"

namespace lvd {

using ordered_json = nlohmann::ordered_json;

/// Static analysis bundle: matrix classifications, the equilibrium
/// enumeration, and the attractivity verdict.
struct AnalysisResult {
  StructureMatrices matrices;
  MatrixVerdict cls_M;         // P-matrix test of the controlled matrix
  MatrixVerdict cls_M0_minus;  // boundedness matrix
  MatrixVerdict cls_M0_hat;
  MatrixVerdict cls_M_hat;
  std::vector<EquilibriumCandidate> equilibria;
  SaturatedResult saturated;
  AttractivityVerdict verdict;
  /// A principal minor landed inside the zero tolerance band somewhere.
  bool indeterminate = false;
};

AnalysisResult analyze(const SystemSpec& spec);

/// Deterministic machine-readable report; serialize with dump(2).
ordered_json report_json(const SystemSpec& spec, const AnalysisResult& r);

/// Simulation summary section, appended under "simulation" by callers.
ordered_json simulation_json(const Trajectory& traj, const ConvergenceReport& conv,
                             const BoundednessReport& bounds);

/// Human-readable rendering of a report document.
std::string report_text(const ordered_json& doc);

/// The numeric tolerances baked into the analysis, echoed in reports.
ordered_json tolerance_json();

extern const char* const kVersion;

}  // namespace lvd

#endif
