#include "naide/nn/checkpoint.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "naide/errors.hpp"

namespace naide::nn {

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint) {
    const MlpWeights& w = checkpoint.weights;
    w.validate();
    nlohmann::json doc;
    doc["format"] = kCheckpointFormat;
    doc["dims"] = w.dims;
    doc["activation"] = to_string(w.output_activation);
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < w.layer_count(); ++l) {
        const Eigen::MatrixXd& m = w.matrices[l];
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
        std::vector<double> bias(w.biases[l].data(), w.biases[l].data() + w.biases[l].size());
        layers.push_back({{"weights", flat}, {"bias", bias}});
    }
    doc["layers"] = std::move(layers);
    doc["train_config"] = checkpoint.train_config;
    return doc;
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != kCheckpointFormat)
            throw ParseError("checkpoint is missing format tag \"" + std::string(kCheckpointFormat) + "\"");
        Checkpoint ckpt;
        MlpWeights& w = ckpt.weights;
        w.dims = doc.at("dims").get<std::vector<int>>();
        validate_dims(w.dims);
        w.output_activation = parse_activation(doc.at("activation").get<std::string>());
        const auto& layers = doc.at("layers");
        if (layers.size() != w.dims.size() - 1) throw ParseError("checkpoint layer count does not match dims");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto flat = layers[l].at("weights").get<std::vector<double>>();
            const auto bias = layers[l].at("bias").get<std::vector<double>>();
            const int rows = w.dims[l + 1];
            const int cols = w.dims[l];
            if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) ||
                bias.size() != static_cast<std::size_t>(rows))
                throw ParseError("checkpoint layer " + std::to_string(l) + " has wrong size");
            Eigen::MatrixXd m(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
            w.matrices.push_back(std::move(m));
            w.biases.push_back(Eigen::Map<const Eigen::VectorXd>(bias.data(), rows));
        }
        w.validate();
        if (doc.contains("train_config")) ckpt.train_config = doc.at("train_config");
        return ckpt;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid checkpoint: ") + e.what());
    } catch (const ShapeError& e) {
        throw ParseError(std::string("invalid checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << checkpoint_to_json(checkpoint).dump(1) << '\n';
    if (!out) throw ParseError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open checkpoint " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
    }
    return checkpoint_from_json(doc);
}

}  // namespace naide::nn
