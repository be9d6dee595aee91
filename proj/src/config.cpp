#include "vags/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace vags {

using nlohmann::json;

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::Generate: return "generate";
    case Mode::Edit: return "edit";
    case Mode::Ablate: return "ablate";
    }
    return "unknown";
}

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError((path.empty() ? std::string("config") : path) + ": expected an object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& path) {
    check_object(j, path);
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(join(path, key) + ": unknown key");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<int>();
}

std::uint64_t unsigned64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError(path + ": expected a non-negative integer");
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

LatentVector vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a nonempty array of numbers");
    std::vector<double> values;
    for (std::size_t k = 0; k < j.size(); ++k) values.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
    try {
        return make_latent(values);
    } catch (const DomainError&) {
        throw ConfigError(path + ": non-finite value");
    }
}

ConditionLabel condition(const json& j, const std::string& path) {
    if (j.is_string() && (j == "uncond" || j == "unconditional")) return ConditionLabel::unconditional();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return ConditionLabel::component(static_cast<std::size_t>(j.get<std::int64_t>()));
    throw ConfigError(path + ": expected a component index or \"uncond\"");
}

std::vector<GaussianComponent> parse_field(const json& j, const std::string& path) {
    reject_unknown(j, {"components"}, path);
    if (!j.contains("components")) throw ConfigError(join(path, "components") + ": missing");
    const json& list = j["components"];
    const std::string list_path = join(path, "components");
    if (!list.is_array() || list.empty()) throw ConfigError(list_path + ": expected a nonempty array");

    std::vector<GaussianComponent> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string p = list_path + "[" + std::to_string(k) + "]";
        reject_unknown(list[k], {"mean", "variance", "weight"}, p);
        for (const char* key : {"mean", "variance", "weight"})
            if (!list[k].contains(key)) throw ConfigError(join(p, key) + ": missing");
        out.push_back({vector(list[k]["mean"], join(p, "mean")), number(list[k]["variance"], join(p, "variance")),
                       number(list[k]["weight"], join(p, "weight"))});
    }
    try {
        validate_mixture(out);
    } catch (const ConfigError& e) {
        throw ConfigError(join(path, std::string(e.what())));
    }
    return out;
}

NamedScheduler parse_scheduler(const json& j, const std::string& path) {
    reject_unknown(j, {"kind", "lambda", "kappa", "interval", "zero_steps", "name"}, path);
    if (!j.contains("kind")) throw ConfigError(join(path, "kind") + ": missing");
    NamedScheduler out;
    try {
        out.params.kind = parse_scheduler_kind(string(j["kind"], join(path, "kind")));
    } catch (const ConfigError& e) {
        throw ConfigError(join(path, "kind") + ": " + e.what());
    }
    if (j.contains("lambda")) out.params.lambda = number(j["lambda"], join(path, "lambda"));
    if (j.contains("kappa")) out.params.kappa = number(j["kappa"], join(path, "kappa"));
    if (j.contains("interval")) {
        const auto& w = j["interval"];
        if (!w.is_array() || w.size() != 2) throw ConfigError(join(path, "interval") + ": expected [t_lo, t_hi]");
        out.params.interval_lo = number(w[0], join(path, "interval[0]"));
        out.params.interval_hi = number(w[1], join(path, "interval[1]"));
    }
    if (j.contains("zero_steps")) out.params.zero_steps = integer(j["zero_steps"], join(path, "zero_steps"));
    out.name = j.contains("name") ? string(j["name"], join(path, "name")) : std::string(to_string(out.params.kind));
    try {
        out.params.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(join(path, e.what()));
    }
    return out;
}

EditSettings parse_edit(const json& j, const std::string& path, std::optional<std::uint64_t>& seed) {
    reject_unknown(j, {"x_src", "c_src", "c_tar", "lambda_src", "lambda_tar", "kappa_tar", "target_kind", "n",
                       "n_max", "seed"},
                   path);
    EditSettings out;
    if (!j.contains("x_src")) throw ConfigError(join(path, "x_src") + ": missing");
    out.x_src = vector(j["x_src"], join(path, "x_src"));
    if (j.contains("c_src")) out.c_src = condition(j["c_src"], join(path, "c_src"));
    if (j.contains("c_tar")) out.c_tar = condition(j["c_tar"], join(path, "c_tar"));
    if (j.contains("lambda_src")) out.lambda_src = number(j["lambda_src"], join(path, "lambda_src"));
    if (j.contains("lambda_tar")) out.lambda_tar = number(j["lambda_tar"], join(path, "lambda_tar"));
    if (j.contains("kappa_tar")) out.kappa_tar = number(j["kappa_tar"], join(path, "kappa_tar"));
    if (j.contains("target_kind")) {
        try {
            out.target_kind = parse_scheduler_kind(string(j["target_kind"], join(path, "target_kind")));
        } catch (const ConfigError& e) {
            throw ConfigError(join(path, "target_kind") + ": " + e.what());
        }
    }
    if (j.contains("n")) out.n = integer(j["n"], join(path, "n"));
    if (j.contains("n_max")) out.n_max = integer(j["n_max"], join(path, "n_max"));
    if (j.contains("seed")) seed = unsigned64(j["seed"], join(path, "seed"));
    return out;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
    std::vector<std::uint64_t> out;
    if (j.is_array()) {
        if (j.empty()) throw ConfigError("seeds: expected at least one seed");
        for (std::size_t k = 0; k < j.size(); ++k) out.push_back(unsigned64(j[k], "seeds[" + std::to_string(k) + "]"));
        return out;
    }
    if (j.is_object()) {
        reject_unknown(j, {"base", "count"}, "seeds");
        if (!j.contains("base") || !j.contains("count")) throw ConfigError("seeds: need base and count");
        const std::uint64_t base = unsigned64(j["base"], "seeds.base");
        const int count = integer(j["count"], "seeds.count");
        if (count < 1) throw ConfigError("seeds.count: must be >= 1");
        for (int k = 0; k < count; ++k) out.push_back(base + static_cast<std::uint64_t>(k));
        return out;
    }
    throw ConfigError("seeds: expected an array or {base, count}");
}

} // namespace

void RunConfig::validate() const {
    validate_mixture(components);
    const auto check = [&](const ConditionLabel& c, const std::string& name) {
        if (!c.is_unconditional() && c.index() >= components.size())
            throw ConfigError(name + ": component index " + std::to_string(c.index()) + " out of range");
    };
    if (seeds.empty()) throw ConfigError("seeds: expected at least one seed");
    if (schedulers.empty()) throw ConfigError("scheduler: missing");
    std::set<std::string> names;
    for (const auto& s : schedulers) {
        s.params.validate();
        if (!names.insert(s.name).second) throw ConfigError("schedulers: duplicate name '" + s.name + "'");
    }
    if (mode == Mode::Ablate && schedulers.size() < 2)
        throw ConfigError("schedulers: ablate needs at least 2 entries");
    if (mode != Mode::Ablate && schedulers.size() != 1)
        throw ConfigError("scheduler: " + std::string(to_string(mode)) + " takes exactly one scheduler");

    const Mode effective = mode == Mode::Ablate ? task : mode;
    if (effective == Mode::Generate) {
        if (n < 2) throw ConfigError("n: must be >= 2");
        check(condition, "condition");
    } else {
        if (!edit) throw ConfigError("edit: missing");
        if (edit->x_src.size() != components.front().mean.size())
            throw ConfigError("edit.x_src: dimension does not match the field");
        check(edit->c_src, "edit.c_src");
        check(edit->c_tar, "edit.c_tar");
        if (edit->n < 2) throw ConfigError("edit.n: must be >= 2");
        if (edit->n_max < 2 || edit->n_max > edit->n) throw ConfigError("edit.n_max: must satisfy 2 <= n_max <= n");
        if (!(edit->lambda_src >= 0.0)) throw ConfigError("edit.lambda_src: must be >= 0");
        if (!(edit->lambda_tar >= 0.0)) throw ConfigError("edit.lambda_tar: must be >= 0");
        if (!(edit->kappa_tar >= 0.0)) throw ConfigError("edit.kappa_tar: must be >= 0");
    }
}

RunConfig parse_config(const json& document) {
    reject_unknown(document, {"mode", "task", "field", "n", "condition", "scheduler", "schedulers", "edit", "seed",
                              "seeds", "output_dir"},
                   "");
    RunConfig cfg;
    if (!document.contains("mode")) throw ConfigError("mode: missing");
    const std::string mode = string(document["mode"], "mode");
    if (mode == "generate") cfg.mode = Mode::Generate;
    else if (mode == "edit") cfg.mode = Mode::Edit;
    else if (mode == "ablate") cfg.mode = Mode::Ablate;
    else throw ConfigError("mode: unknown mode '" + mode + "'");

    if (document.contains("task")) {
        if (cfg.mode != Mode::Ablate) throw ConfigError("task: only valid for ablate");
        const std::string task = string(document["task"], "task");
        if (task == "generate") cfg.task = Mode::Generate;
        else if (task == "edit") cfg.task = Mode::Edit;
        else throw ConfigError("task: expected generate or edit");
    }

    if (!document.contains("field")) throw ConfigError("field: missing");
    cfg.components = parse_field(document["field"], "field");
    if (document.contains("n")) cfg.n = integer(document["n"], "n");
    if (document.contains("condition")) cfg.condition = condition(document["condition"], "condition");

    std::optional<std::uint64_t> edit_seed;
    if (document.contains("edit")) cfg.edit = parse_edit(document["edit"], "edit", edit_seed);

    const Mode effective = cfg.mode == Mode::Ablate ? cfg.task : cfg.mode;
    if (cfg.mode == Mode::Ablate) {
        if (document.contains("scheduler")) throw ConfigError("scheduler: ablate takes a 'schedulers' list");
        if (!document.contains("schedulers")) throw ConfigError("schedulers: missing");
        const json& list = document["schedulers"];
        if (!list.is_array()) throw ConfigError("schedulers: expected an array");
        for (std::size_t k = 0; k < list.size(); ++k)
            cfg.schedulers.push_back(parse_scheduler(list[k], "schedulers[" + std::to_string(k) + "]"));
    } else {
        if (document.contains("schedulers")) throw ConfigError("schedulers: only valid for ablate");
        if (effective == Mode::Generate) {
            if (!document.contains("scheduler")) throw ConfigError("scheduler: missing");
            cfg.schedulers.push_back(parse_scheduler(document["scheduler"], "scheduler"));
        } else {
            if (document.contains("scheduler")) throw ConfigError("scheduler: edit mode takes its target rule from 'edit'");
            if (!cfg.edit) throw ConfigError("edit: missing");
            NamedScheduler target;
            target.params.kind = cfg.edit->target_kind;
            target.params.lambda = cfg.edit->lambda_tar;
            target.params.kappa = cfg.edit->kappa_tar;
            target.name = std::string(to_string(target.params.kind));
            try {
                target.params.validate();
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("edit.") + e.what());
            }
            cfg.schedulers.push_back(target);
        }
    }

    const int seed_sources = int(document.contains("seeds")) + int(document.contains("seed")) + int(edit_seed.has_value());
    if (seed_sources > 1) throw ConfigError("seeds: give only one of seeds, seed, edit.seed");
    if (document.contains("seeds")) cfg.seeds = parse_seeds(document["seeds"]);
    if (document.contains("seed")) cfg.seeds = {unsigned64(document["seed"], "seed")};
    if (edit_seed) cfg.seeds = {*edit_seed};

    if (document.contains("output_dir")) cfg.output_dir = string(document["output_dir"], "output_dir");

    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < upto; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }
    return parse_config(document);
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config", path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace vags
