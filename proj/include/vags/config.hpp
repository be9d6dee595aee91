#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vags/guidance.hpp"
#include "vags/velocity.hpp"

namespace vags {

enum class Mode { Generate, Edit, Ablate };

std::string_view to_string(Mode mode);

struct NamedScheduler {
    std::string name;
    SchedulerParams params;
};

struct EditSettings {
    LatentVector x_src;
    ConditionLabel c_src = ConditionLabel::component(0);
    ConditionLabel c_tar = ConditionLabel::component(0);
    double lambda_src = 3.5;
    double lambda_tar = 13.5;
    double kappa_tar = 0.9;
    SchedulerKind target_kind = SchedulerKind::Vags;
    int n = 50;
    int n_max = 33;
};

/// Validated experiment description. See README for the JSON schema.
struct RunConfig {
    Mode mode = Mode::Generate;
    Mode task = Mode::Generate;  ///< what an ablation runs: Generate or Edit
    std::vector<GaussianComponent> components;
    int n = 25;
    ConditionLabel condition = ConditionLabel::component(0);
    /// One entry for generate/edit, two or more for ablate. For editing the
    /// entries describe the target-scale rule.
    std::vector<NamedScheduler> schedulers;
    std::optional<EditSettings> edit;
    std::vector<std::uint64_t> seeds{0};
    std::filesystem::path output_dir = "out";

    void validate() const;
};

/// Parses and validates a RunConfig document. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

} // namespace vags
