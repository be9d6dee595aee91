#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vags/guidance.hpp"
#include "vags/vecmath.hpp"

namespace vags {

struct TraceRow {
    int step = 0;
    double t = 0.0;
    double sigma = 1.0;
    double alignment = 0.0;  ///< 0 for schedulers that compute no cosine
    double effective_scale = 0.0;
    double state_norm = 0.0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Per-step record of one sampler run. Rows are appended in loop order, so
/// step indices strictly decrease.
class TrajectoryTrace {
public:
    TrajectoryTrace() = default;
    TrajectoryTrace(std::string run_id, std::string scheduler, std::uint64_t seed)
        : run_id_(std::move(run_id)), scheduler_(std::move(scheduler)), seed_(seed) {}

    void append(const TraceRow& row);

    const std::vector<TraceRow>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }
    std::size_t size() const { return rows_.size(); }

    const std::string& run_id() const { return run_id_; }
    const std::string& scheduler() const { return scheduler_; }
    std::uint64_t seed() const { return seed_; }

    const LatentVector& endpoint() const { return endpoint_; }
    void set_endpoint(LatentVector endpoint) { endpoint_ = std::move(endpoint); }
    void set_scheduler(std::string scheduler) { scheduler_ = std::move(scheduler); }

private:
    std::string run_id_;
    std::string scheduler_;
    std::uint64_t seed_ = 0;
    std::vector<TraceRow> rows_;
    LatentVector endpoint_;
};

/// Arithmetic mean computed as x0 + mean(x - x0); exact for constant input.
double stable_mean(std::span<const double> values);

double mean_scale(const TrajectoryTrace& trace);

/// Fixed-kind control whose constant scale equals the mean scale of `trace`.
SchedulerParams matched_mean_params(const TrajectoryTrace& trace, const SchedulerParams& base);

inline constexpr const char* kTraceCsvHeader = "step,t,sigma,alignment,lambda_eff,state_norm";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string trace_to_csv(const TrajectoryTrace& trace);
void export_csv(const TrajectoryTrace& trace, const std::filesystem::path& path);
/// Parses a file written by export_csv back into rows.
std::vector<TraceRow> read_csv(const std::filesystem::path& path);

struct SchedulerSummary {
    std::string scheduler;
    std::size_t n_runs = 0;
    double lambda_mean = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double alignment_mean = 0.0;
    LatentVector endpoint_mean;
    double endpoint_norm_mean = 0.0;
    double endpoint_norm_std = 0.0;
};

/// One entry per scheduler label, in order of first appearance.
std::vector<SchedulerSummary> summarize(std::span<const TrajectoryTrace> traces);
nlohmann::json to_json(const SchedulerSummary& summary);
void export_summary_json(std::span<const TrajectoryTrace> traces, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace vags
