#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vags/config.hpp"
#include "vags/diagnostics.hpp"
#include "vags/editor.hpp"
#include "vags/sampler.hpp"

namespace vags {

struct RunFailure {
    std::string scheduler;
    std::uint64_t seed = 0;
    std::string message;
};

struct MatchedMeanControl {
    std::string source;  ///< adaptive scheduler whose traces set the scale
    std::string name;
    double lambda = 0.0;
};

struct RunReport {
    std::vector<TrajectoryTrace> traces;  ///< completed runs, scheduler-major, seed order
    std::vector<MatchedMeanControl> controls;
    std::vector<RunFailure> failures;

    bool ok() const { return failures.empty(); }
};

/// Runs one config end to end and writes its artifacts:
///   <out>/<mode>/<scheduler>/<seed>.csv   per-step trace
///   <out>/<mode>/<scheduler>/<seed>.json  final state (generate / edit)
///   <out>/summary.json                    per-scheduler aggregates
///   <out>/failures.json                   only when a run diverged
/// Divergent runs are recorded in the report instead of aborting the batch.
RunReport run(const RunConfig& config);

RunReport run_generate(const RunConfig& config);
RunReport run_edit(const RunConfig& config);
/// Every scheduler over the same seeds, plus a matched-mean Fixed control for
/// each VAGS entry.
RunReport run_ablate(const RunConfig& config);

GenRunSpec make_gen_spec(const RunConfig& config, const NamedScheduler& scheduler, std::uint64_t seed);
EditRunSpec make_edit_spec(const RunConfig& config, const NamedScheduler& scheduler, std::uint64_t seed);

} // namespace vags
