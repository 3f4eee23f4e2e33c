#include "hifd/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "hifd/rng.hpp"

namespace hifd {
namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const json& arr, const std::string& context) {
    if (!arr.is_array()) fail(ErrorCode::invalid_input, context + ": expected an array");
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) fail(ErrorCode::invalid_input, context + ": expected numbers");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const std::string& context) {
    if (!rows.is_array() || rows.empty())
        fail(ErrorCode::invalid_input, context + ": expected a non-empty array of rows");
    const std::size_t n_cols = rows[0].is_array() ? rows[0].size() : 0;
    if (n_cols == 0) fail(ErrorCode::invalid_input, context + ": empty rows");
    Eigen::MatrixXd m(rows.size(), n_cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != n_cols)
            fail(ErrorCode::invalid_input, context + ": ragged rows");
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (!rows[r][c].is_number())
                fail(ErrorCode::invalid_input, context + ": expected numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
        }
    }
    return m;
}

}  // namespace

std::string model_to_json(const PipelineModel& model) {
    model.validate();
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["generator"] = Rng::algorithm_name();

    json config;
    config["ts"] = model.config.ts;
    config["m_vars"] = model.config.m_vars;
    config["layer_dims"] = model.config.layer_dims;
    config["train"] = {{"learning_rate", model.config.train.learning_rate},
                       {"epochs", model.config.train.epochs},
                       {"batch_size", model.config.train.batch_size},
                       {"seed", model.config.train.seed},
                       {"adam_beta1", model.config.train.adam_beta1},
                       {"adam_beta2", model.config.train.adam_beta2},
                       {"adam_epsilon", model.config.train.adam_epsilon}};
    config["train_fraction"] = model.config.train_fraction;
    config["cpv_target"] = model.config.cpv_target;
    config["alpha"] = model.config.alpha;
    config["threshold"] = model.config.threshold;
    doc["config"] = std::move(config);

    doc["input_scaler"] = {{"min", vector_to_json(model.input_scaler.min)},
                           {"max", vector_to_json(model.input_scaler.max)}};

    json ae;
    ae["layer_dims"] = model.autoencoder.layer_dims;
    json weights = json::array(), biases = json::array();
    for (const auto& w : model.autoencoder.weights) weights.push_back(matrix_to_json(w));
    for (const auto& b : model.autoencoder.biases) biases.push_back(vector_to_json(b));
    ae["weights"] = std::move(weights);
    ae["biases"] = std::move(biases);
    doc["autoencoder"] = std::move(ae);

    json mon;
    mon["residual_scaler"] = {{"mean", vector_to_json(model.monitor.residual_scaler.mean)},
                              {"std", vector_to_json(model.monitor.residual_scaler.std)}};
    mon["loadings"] = matrix_to_json(model.monitor.loadings);
    mon["eigenvalues"] = vector_to_json(model.monitor.eigenvalues);
    mon["n_components"] = model.monitor.n_components;
    mon["g"] = model.monitor.g;
    mon["h"] = model.monitor.h;
    mon["alpha"] = model.monitor.alpha;
    mon["t2_limit"] = model.monitor.t2_limit;
    mon["spe_limit"] = model.monitor.spe_limit;
    mon["phi_limit"] = model.monitor.phi_limit;
    doc["monitor"] = std::move(mon);

    return doc.dump(2);
}

PipelineModel model_from_json(const std::string& text, const std::string& context) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_input, context + ": " + e.what());
    }
    PipelineModel model;
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            fail(ErrorCode::version, context + ": unsupported format_version " +
                                         std::to_string(version));

        const auto& config = doc.at("config");
        model.config.ts = config.at("ts").get<int>();
        model.config.m_vars = config.at("m_vars").get<int>();
        model.config.layer_dims = config.at("layer_dims").get<std::vector<int>>();
        const auto& train = config.at("train");
        model.config.train.learning_rate = train.at("learning_rate").get<double>();
        model.config.train.epochs = train.at("epochs").get<int>();
        model.config.train.batch_size = train.at("batch_size").get<int>();
        model.config.train.seed = train.at("seed").get<std::uint64_t>();
        model.config.train.adam_beta1 = train.at("adam_beta1").get<double>();
        model.config.train.adam_beta2 = train.at("adam_beta2").get<double>();
        model.config.train.adam_epsilon = train.at("adam_epsilon").get<double>();
        model.config.train_fraction = config.at("train_fraction").get<double>();
        model.config.cpv_target = config.at("cpv_target").get<double>();
        model.config.alpha = config.at("alpha").get<double>();
        model.config.threshold = config.at("threshold").get<int>();

        const auto& scaler = doc.at("input_scaler");
        model.input_scaler.min = vector_from_json(scaler.at("min"), context + ": input_scaler.min");
        model.input_scaler.max = vector_from_json(scaler.at("max"), context + ": input_scaler.max");

        const auto& ae = doc.at("autoencoder");
        model.autoencoder.layer_dims = ae.at("layer_dims").get<std::vector<int>>();
        for (const auto& w : ae.at("weights"))
            model.autoencoder.weights.push_back(matrix_from_json(w, context + ": weights"));
        for (const auto& b : ae.at("biases"))
            model.autoencoder.biases.push_back(vector_from_json(b, context + ": biases"));

        const auto& mon = doc.at("monitor");
        const auto& rscaler = mon.at("residual_scaler");
        model.monitor.residual_scaler.mean =
            vector_from_json(rscaler.at("mean"), context + ": residual_scaler.mean");
        model.monitor.residual_scaler.std =
            vector_from_json(rscaler.at("std"), context + ": residual_scaler.std");
        model.monitor.loadings = matrix_from_json(mon.at("loadings"), context + ": loadings");
        model.monitor.eigenvalues =
            vector_from_json(mon.at("eigenvalues"), context + ": eigenvalues");
        model.monitor.n_components = mon.at("n_components").get<int>();
        model.monitor.g = mon.at("g").get<double>();
        model.monitor.h = mon.at("h").get<double>();
        model.monitor.alpha = mon.at("alpha").get<double>();
        model.monitor.t2_limit = mon.at("t2_limit").get<double>();
        model.monitor.spe_limit = mon.at("spe_limit").get<double>();
        model.monitor.phi_limit = mon.at("phi_limit").get<double>();
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_input, context + ": " + e.what());
    }
    model.validate();
    return model;
}

void save_model(const PipelineModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
    out << model_to_json(model) << "\n";
    out.flush();
    if (!out) fail(ErrorCode::io, "write to " + path + " failed");
}

PipelineModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text, path);
}

}  // namespace hifd
