#include "vags/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace vags {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory", dir.string());
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, count == 0 ? 1 : count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
}

json state_json(const TrajectoryTrace& trace) {
    const auto& z = trace.endpoint();
    return {{"run_id", trace.run_id()},
            {"scheduler", trace.scheduler()},
            {"seed", trace.seed()},
            {"final_state", std::vector<double>(z.data(), z.data() + z.size())}};
}

// Runs one scheduler over every seed of the config, writing per-seed files
// into `dir`. Completed traces and failures are appended in seed order.
void run_scheduler(const RunConfig& config, Mode task, const NamedScheduler& scheduler, const fs::path& dir,
                   bool write_state, RunReport& report) {
    make_dirs(dir);
    const std::size_t count = config.seeds.size();
    std::vector<std::optional<TrajectoryTrace>> traces(count);
    std::vector<std::optional<RunFailure>> failures(count);

    parallel_for(count, [&](std::size_t k) {
        const std::uint64_t seed = config.seeds[k];
        try {
            TrajectoryTrace trace = task == Mode::Generate
                                        ? generate(make_gen_spec(config, scheduler, seed)).trace
                                        : edit(make_edit_spec(config, scheduler, seed)).trace;
            const std::string stem = std::to_string(seed);
            export_csv(trace, dir / (stem + ".csv"));
            if (write_state) write_text_file(dir / (stem + ".json"), state_json(trace).dump(2) + "\n");
            traces[k] = std::move(trace);
        } catch (const DivergenceError& e) {
            failures[k] = RunFailure{scheduler.name, seed, e.what()};
        }
    });

    for (auto& t : traces)
        if (t) report.traces.push_back(std::move(*t));
    for (auto& f : failures)
        if (f) report.failures.push_back(std::move(*f));
}

void write_outputs(const RunConfig& config, const RunReport& report) {
    json entries = json::array();
    for (const auto& s : summarize(report.traces)) {
        json entry = to_json(s);
        // Monotone, Interval and ZeroInit are declared stand-in forms of the ablation baselines.
        for (const auto& named : config.schedulers) {
            if (named.name != s.scheduler) continue;
            const auto kind = named.params.kind;
            entry["kind"] = to_string(kind);
            entry["form"] = (kind == SchedulerKind::Fixed || kind == SchedulerKind::Vags) ? "reference" : "stand-in";
        }
        for (const auto& c : report.controls) {
            if (c.name != s.scheduler) continue;
            entry["kind"] = to_string(SchedulerKind::Fixed);
            entry["form"] = "matched-mean control";
        }
        entries.push_back(std::move(entry));
    }
    json controls = json::array();
    for (const auto& c : report.controls)
        controls.push_back({{"source", c.source}, {"scheduler", c.name}, {"lambda", c.lambda}});

    json summary{{"mode", to_string(config.mode)},
                 {"schedulers", entries},
                 {"matched_mean_controls", controls},
                 {"n_failures", report.failures.size()}};
    write_text_file(config.output_dir / "summary.json", summary.dump(2) + "\n");

    const fs::path manifest = config.output_dir / "failures.json";
    if (report.failures.empty()) {
        std::error_code ec;
        fs::remove(manifest, ec);
        return;
    }
    json list = json::array();
    for (const auto& f : report.failures)
        list.push_back({{"scheduler", f.scheduler}, {"seed", f.seed}, {"error", f.message}});
    write_text_file(manifest, json{{"failures", list}}.dump(2) + "\n");
}

std::shared_ptr<const ConditionedVelocityField> make_field(const RunConfig& config) {
    return std::make_shared<const GaussianMixtureField>(config.components);
}

} // namespace

GenRunSpec make_gen_spec(const RunConfig& config, const NamedScheduler& scheduler, std::uint64_t seed) {
    GenRunSpec spec;
    spec.field = make_field(config);
    spec.condition = config.condition;
    spec.scheduler = scheduler.params;
    spec.grid = uniform_grid(config.n);
    spec.seed = seed;
    spec.label = scheduler.name;
    return spec;
}

EditRunSpec make_edit_spec(const RunConfig& config, const NamedScheduler& scheduler, std::uint64_t seed) {
    if (!config.edit) throw ConfigError("edit: missing");
    const auto& e = *config.edit;
    EditRunSpec spec;
    spec.field = make_field(config);
    spec.x_src = e.x_src;
    spec.c_src = e.c_src;
    spec.c_tar = e.c_tar;
    spec.lambda_src = e.lambda_src;
    spec.target = scheduler.params;
    spec.grid = uniform_grid(e.n);
    spec.n_max = e.n_max;
    spec.seed = seed;
    spec.label = scheduler.name;
    return spec;
}

RunReport run_generate(const RunConfig& config) {
    config.validate();
    RunReport report;
    const auto& s = config.schedulers.front();
    run_scheduler(config, Mode::Generate, s, config.output_dir / "generate" / s.name, true, report);
    write_outputs(config, report);
    return report;
}

RunReport run_edit(const RunConfig& config) {
    config.validate();
    RunReport report;
    const auto& s = config.schedulers.front();
    run_scheduler(config, Mode::Edit, s, config.output_dir / "edit" / s.name, true, report);
    write_outputs(config, report);
    return report;
}

RunReport run_ablate(const RunConfig& config) {
    config.validate();
    if (config.mode != Mode::Ablate) throw ConfigError("mode: run_ablate needs mode ablate");
    RunReport report;
    const fs::path root = config.output_dir / "ablate";
    for (const auto& s : config.schedulers) run_scheduler(config, config.task, s, root / s.name, false, report);

    std::vector<NamedScheduler> controls;
    for (const auto& s : config.schedulers) {
        if (s.params.kind != SchedulerKind::Vags) continue;
        std::vector<double> scales;
        for (const auto& trace : report.traces)
            if (trace.scheduler() == s.name)
                for (const auto& row : trace.rows()) scales.push_back(row.effective_scale);
        if (scales.empty()) continue;
        NamedScheduler control{s.name + "_matched_mean", s.params};
        control.params.kind = SchedulerKind::Fixed;
        control.params.lambda = stable_mean(scales);
        report.controls.push_back({s.name, control.name, control.params.lambda});
        controls.push_back(control);
    }
    for (const auto& c : controls) run_scheduler(config, config.task, c, root / c.name, false, report);

    write_outputs(config, report);
    return report;
}

RunReport run(const RunConfig& config) {
    switch (config.mode) {
    case Mode::Generate: return run_generate(config);
    case Mode::Edit: return run_edit(config);
    case Mode::Ablate: return run_ablate(config);
    }
    throw ConfigError("mode: unhandled");
}

} // namespace vags
