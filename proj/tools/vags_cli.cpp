#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vags/config.hpp"
#include "vags/runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kDivergence = 2, kIo = 3 };

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

vags::RunConfig load(const std::string& mode, const Options& opts) {
    std::ifstream in(opts.config, std::ios::binary);
    if (!in) throw vags::IoError("cannot open config", opts.config);
    std::ostringstream buf;
    buf << in.rdbuf();

    // Parse once to reconcile the subcommand with the document's mode.
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error&) {
        return vags::parse_config_text(buf.str());  // rethrows with line/column
    }
    if (!document.is_object()) throw vags::ConfigError("config: expected an object");
    if (!document.contains("mode")) document["mode"] = mode;
    else if (document["mode"] != mode)
        throw vags::ConfigError("mode: config says '" + document["mode"].dump() + "' but subcommand is '" + mode + "'");

    vags::RunConfig cfg = vags::parse_config(document);
    if (opts.seed) cfg.seeds = {*opts.seed};
    if (opts.out) cfg.output_dir = *opts.out;
    cfg.validate();
    return cfg;
}

int execute(const std::string& mode, const Options& opts) {
    try {
        const vags::RunConfig cfg = load(mode, opts);
        const vags::RunReport report = vags::run(cfg);
        for (const auto& f : report.failures)
            std::cerr << "run failed: scheduler=" << f.scheduler << " seed=" << f.seed << ": " << f.message << "\n";
        std::cout << "wrote " << report.traces.size() << " trace(s) to " << cfg.output_dir.string() << "\n";
        return report.ok() ? kOk : kDivergence;
    } catch (const vags::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const vags::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDivergence;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flow-matching sampler with velocity-adaptive guidance scale"};
    app.require_subcommand(1);

    Options opts;
    std::string chosen;
    for (const char* name : {"generate", "edit", "ablate"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " mode from a JSON config");
        sub->add_option("--config", opts.config, "path to the run config")->required();
        sub->add_option("--seed", opts.seed, "run a single seed instead of the configured set");
        sub->add_option("--out", opts.out, "output directory override");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kValidation;
    }
    return execute(chosen, opts);
}
