#include "vags/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "vags/errors.hpp"

namespace vags {

void TrajectoryTrace::append(const TraceRow& row) {
    if (!rows_.empty() && row.step >= rows_.back().step)
        throw ContractError("trace step indices must strictly decrease");
    rows_.push_back(row);
}

double stable_mean(std::span<const double> values) {
    if (values.empty()) throw ContractError("mean of empty sequence");
    const double anchor = values.front();
    double offset = 0.0;
    for (double v : values) offset += v - anchor;
    return anchor + offset / static_cast<double>(values.size());
}

double mean_scale(const TrajectoryTrace& trace) {
    if (trace.empty()) throw ContractError("mean_scale of an empty trace");
    std::vector<double> scales;
    scales.reserve(trace.size());
    for (const auto& row : trace.rows()) scales.push_back(row.effective_scale);
    return stable_mean(scales);
}

SchedulerParams matched_mean_params(const TrajectoryTrace& trace, const SchedulerParams& base) {
    SchedulerParams out = base;
    out.kind = SchedulerKind::Fixed;
    out.lambda = mean_scale(trace);
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw ContractError("failed to format double");
    return std::string(buf, end);
}

std::string trace_to_csv(const TrajectoryTrace& trace) {
    std::string out = kTraceCsvHeader;
    out += '\n';
    for (const auto& r : trace.rows()) {
        out += std::to_string(r.step);
        for (double v : {r.t, r.sigma, r.alignment, r.effective_scale, r.state_norm}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", path.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed", path.string());
}

void export_csv(const TrajectoryTrace& trace, const std::filesystem::path& path) {
    write_text_file(path, trace_to_csv(trace));
}

std::vector<TraceRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading", path.string());
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader)
        throw IoError("unexpected trace header", path.string());

    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 5> values{};
        TraceRow row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto res = std::from_chars(p, end, row.step);
        for (double& v : values) {
            if (res.ec != std::errc{} || res.ptr == end || *res.ptr != ',')
                throw IoError("malformed trace row", path.string());
            res = std::from_chars(res.ptr + 1, end, v);
        }
        if (res.ec != std::errc{} || res.ptr != end) throw IoError("malformed trace row", path.string());
        row.t = values[0];
        row.sigma = values[1];
        row.alignment = values[2];
        row.effective_scale = values[3];
        row.state_norm = values[4];
        rows.push_back(row);
    }
    return rows;
}

std::vector<SchedulerSummary> summarize(std::span<const TrajectoryTrace> traces) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const TrajectoryTrace*>> groups;
    for (const auto& trace : traces) {
        auto [it, inserted] = groups.try_emplace(trace.scheduler());
        if (inserted) order.push_back(trace.scheduler());
        it->second.push_back(&trace);
    }

    std::vector<SchedulerSummary> out;
    for (const auto& name : order) {
        const auto& group = groups[name];
        SchedulerSummary s;
        s.scheduler = name;
        s.n_runs = group.size();

        std::vector<double> scales, alignments, norms;
        for (const auto* trace : group)
            for (const auto& row : trace->rows()) {
                scales.push_back(row.effective_scale);
                alignments.push_back(row.alignment);
            }
        if (!scales.empty()) {
            s.lambda_mean = stable_mean(scales);
            s.alignment_mean = stable_mean(alignments);
            auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
            s.lambda_min = *lo;
            s.lambda_max = *hi;
        }

        const Eigen::Index d = group.front()->endpoint().size();
        if (d > 0) {
            s.endpoint_mean = LatentVector::Zero(d);
            std::vector<double> coord;
            for (Eigen::Index k = 0; k < d; ++k) {
                coord.clear();
                for (const auto* trace : group) coord.push_back(trace->endpoint()[k]);
                s.endpoint_mean[k] = stable_mean(coord);
            }
            for (const auto* trace : group) norms.push_back(trace->endpoint().norm());
            s.endpoint_norm_mean = stable_mean(norms);
            std::vector<double> sq;
            for (double n : norms) sq.push_back((n - s.endpoint_norm_mean) * (n - s.endpoint_norm_mean));
            s.endpoint_norm_std = std::sqrt(stable_mean(sq));
        }
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json to_json(const SchedulerSummary& s) {
    std::vector<double> mean(s.endpoint_mean.data(), s.endpoint_mean.data() + s.endpoint_mean.size());
    return {
        {"scheduler", s.scheduler},
        {"n_runs", s.n_runs},
        {"lambda_mean", s.lambda_mean},
        {"lambda_min", s.lambda_min},
        {"lambda_max", s.lambda_max},
        {"alignment_mean", s.alignment_mean},
        {"endpoint_stats",
         {{"mean", mean}, {"norm_mean", s.endpoint_norm_mean}, {"norm_std", s.endpoint_norm_std}}},
    };
}

void export_summary_json(std::span<const TrajectoryTrace> traces, const std::filesystem::path& path) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& s : summarize(traces)) entries.push_back(to_json(s));
    write_text_file(path, nlohmann::json{{"schedulers", entries}}.dump(2) + "\n");
}

} // namespace vags
