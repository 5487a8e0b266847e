#include "naide/train/config.hpp"

#include <cmath>
#include <string>

#include "naide/core/context.hpp"
#include "naide/errors.hpp"

namespace naide::train {

std::string_view to_string(StopRule rule) { return rule == StopRule::heuristic ? "heuristic" : "none"; }

StopRule parse_stop_rule(std::string_view name) {
    if (name == "none") return StopRule::none;
    if (name == "heuristic") return StopRule::heuristic;
    throw ConfigError("unknown stop rule '" + std::string(name) + "' (expected heuristic or none)");
}

std::vector<int> TrainConfig::dims() const {
    std::vector<int> d{context_width(k)};
    d.insert(d.end(), hidden.begin(), hidden.end());
    d.push_back(2);
    return d;
}

void TrainConfig::validate() const {
    validate_context_size(k);
    for (int h : hidden)
        if (h <= 0) throw ConfigError("hidden layer widths must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(lr0_supervised > 0.0) || !(lr0_finetune > 0.0)) throw ConfigError("learning rates must be positive");
    if (lr_halve_every_supervised < 1 || lr_halve_every_finetune < 1)
        throw ConfigError("learning-rate halving periods must be >= 1");
    if (!(sigma_255 > 0.0) || !std::isfinite(sigma_255)) throw ConfigError("sigma must be positive");
}

double scheduled_lr(double lr0, int halve_every, int epoch) {
    return std::ldexp(lr0, -(epoch / halve_every));
}

nlohmann::json to_json(const TrainConfig& c) {
    return {
        {"k", c.k},
        {"hidden", c.hidden},
        {"activation", nn::to_string(c.activation)},
        {"epochs", c.epochs},
        {"batch_size", c.batch_size},
        {"lr0_supervised", c.lr0_supervised},
        {"lr0_finetune", c.lr0_finetune},
        {"lr_halve_every_supervised", c.lr_halve_every_supervised},
        {"lr_halve_every_finetune", c.lr_halve_every_finetune},
        {"sigma_255", c.sigma_255},
        {"seed", c.seed},
        {"stop_rule", to_string(c.stop_rule)},
    };
}

TrainConfig apply_json(TrainConfig c, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "k") c.k = value.get<int>();
            else if (key == "hidden") c.hidden = value.get<std::vector<int>>();
            else if (key == "activation") c.activation = nn::parse_activation(value.get<std::string>());
            else if (key == "epochs") c.epochs = value.get<int>();
            else if (key == "batch_size") c.batch_size = value.get<int>();
            else if (key == "lr0_supervised") c.lr0_supervised = value.get<double>();
            else if (key == "lr0_finetune") c.lr0_finetune = value.get<double>();
            else if (key == "lr_halve_every_supervised") c.lr_halve_every_supervised = value.get<int>();
            else if (key == "lr_halve_every_finetune") c.lr_halve_every_finetune = value.get<int>();
            else if (key == "sigma_255") c.sigma_255 = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "stop_rule") c.stop_rule = parse_stop_rule(value.get<std::string>());
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

}  // namespace naide::train
