#pragma once

#include <string>

#include <json.hpp>

#include "rmot/analysis.hpp"
#include "rmot/cost.hpp"
#include "rmot/coupling.hpp"
#include "rmot/dual.hpp"
#include "rmot/maps.hpp"
#include "rmot/measure.hpp"
#include "rmot/primal.hpp"

/// JSON / CSV (de)serialization for every public object.  All writers are
/// deterministic: objects use ordered keys, arrays follow index order, and
/// numbers are printed with round-trip-exact precision, so identical inputs
/// yield byte-identical files.  No timing or host information is embedded.
namespace rmot::io {

using json = nlohmann::ordered_json;

// -- core objects -----------------------------------------------------------

json measure_to_json(const DiscreteMeasure& mu);
/// Accepts {"points": [[..],..] or [x1,x2,..] for 1D, "weights": [..]?}
/// (weights omitted means uniform).  Throws validation_error on malformed
/// or invariant-violating input.
DiscreteMeasure measure_from_json(const json& j);

json cost_to_json(const CostModel& f);
/// {"family": "log"} | {"family":"riesz","s":..} |
/// {"family":"wire","epsilon0":..,"s0":..} |
/// {"family":"tabulated","t":[..],"f":[..]}
CostModel cost_from_json(const json& j);

json mode_to_json(const CostMode& mode);
/// {"kind":"exact"} | {"kind":"below","R":..} | {"kind":"above","level":..}
CostMode mode_from_json(const json& j);

json budget_to_json(const SolveBudget& b);
SolveBudget budget_from_json(const json& j, SolveBudget defaults = {});

json coupling_to_json(const Coupling& c);
/// Requires the reference weights the plan must match.
Coupling coupling_from_json(const json& j,
                            const std::vector<double>& reference_weights);

// -- reports ----------------------------------------------------------------

json solution_to_json(const PrimalSolution& sol, const DiscreteMeasure& mu);
json dual_report_to_json(const DualReport& rep);
json lipschitz_to_json(const LipschitzReport& rep);
json certificate_to_json(const DiagonalCertificate& cert);
json sweep_to_json(const SweepResult& sweep);
json continuity_to_json(const ContinuityResult& cont);
json cyclic_map_to_json(const CyclicMap1D& map, const DiscreteMeasure& mu);
json recovery_to_json(const MapRecovery& rec, const DiscreteMeasure& mu);

// -- files ------------------------------------------------------------------

/// Reads and parses a JSON document; throws validation_error with a
/// position-bearing message on parse failure.
json load_json(const std::string& path);
/// Writes the document with 2-space indentation and a trailing newline.
void save_json(const std::string& path, const json& j);

// CSV emitters (plot-ready, with documented header rows)
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
void write_map_csv(const std::string& path, const DiscreteMeasure& mu,
                   const CyclicMap1D& map);
void write_recovery_csv(const std::string& path, const DiscreteMeasure& mu,
                        const MapRecovery& rec);
void write_continuity_csv(const std::string& path, const ContinuityResult& c);
void write_support_csv(const std::string& path, const DiscreteMeasure& mu,
                       const Coupling& coupling);

} // namespace rmot::io
