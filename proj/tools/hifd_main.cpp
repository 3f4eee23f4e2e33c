// hifd command line: simulate | train | detect | evaluate.
// Talks to the library exclusively through the C API in hifd.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hifd/hifd.h>

namespace {

// 0 = success, 1 = runtime failure, 2 = configuration/usage failure.
int exit_code_for(hifd_status status) {
    switch (status) {
        case HIFD_OK:
            return 0;
        case HIFD_ERR_INVALID_ARGUMENT:
        case HIFD_ERR_SHAPE_MISMATCH:
        case HIFD_ERR_CONFIG:
        case HIFD_ERR_VERSION:
            return 2;
        default:
            return 1;
    }
}

int report(hifd_status status, const char* verb) {
    std::fprintf(stderr, "hifd: %s failed (%s): %s\n", verb, hifd_status_name(status),
                 hifd_last_error());
    return exit_code_for(status);
}

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    ok = true;
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct ModelHandle {
    hifd_model* model = nullptr;
    ~ModelHandle() { hifd_model_free(model); }
};

struct WaveformHandle {
    hifd_waveform* wf = nullptr;
    ~WaveformHandle() { hifd_waveform_free(wf); }
};

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::int64_t seed_override) {
    std::string config_text;
    if (!config_path.empty()) {
        bool ok = false;
        config_text = read_file(config_path, ok);
        if (!ok) {
            std::fprintf(stderr, "hifd: cannot read %s\n", config_path.c_str());
            return 1;
        }
    }
    char manifest[4096] = {0};
    const hifd_status status =
        hifd_simulate_corpus(config_text.empty() ? nullptr : config_text.c_str(), out_dir.c_str(),
                             seed_override, manifest, sizeof(manifest));
    if (status != HIFD_OK) return report(status, "simulate");
    std::printf("wrote %s\n", manifest);
    return 0;
}

int cmd_train(std::vector<std::string> inputs, const std::string& manifest_path,
              const std::string& out_path, hifd_train_options options,
              const std::vector<std::int32_t>& layers) {
    if (!manifest_path.empty()) {
        if (!inputs.empty()) {
            std::fprintf(stderr, "hifd: pass either --inputs or --manifest, not both\n");
            return 2;
        }
        bool ok = false;
        const std::string text = read_file(manifest_path, ok);
        if (!ok) {
            std::fprintf(stderr, "hifd: cannot read %s\n", manifest_path.c_str());
            return 1;
        }
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
            const std::string base =
                manifest_path.find('/') != std::string::npos
                    ? manifest_path.substr(0, manifest_path.rfind('/') + 1)
                    : std::string();
            for (const auto& row : doc.at("recordings")) {
                if (row.at("is_fault").get<bool>()) continue;  // train on normal load only
                inputs.push_back(base + row.at("csv").get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            std::fprintf(stderr, "hifd: %s: %s\n", manifest_path.c_str(), e.what());
            return 1;
        }
    }
    if (inputs.empty()) {
        std::fprintf(stderr, "hifd: no training recordings (--inputs or --manifest)\n");
        return 2;
    }

    if (!layers.empty()) {
        options.layer_dims = layers.data();
        options.layer_count = layers.size();
    }

    std::vector<WaveformHandle> handles(inputs.size());
    std::vector<const hifd_waveform*> pointers(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const hifd_status status = hifd_waveform_load(inputs[i].c_str(), &handles[i].wf);
        if (status != HIFD_OK) return report(status, "load recording");
        pointers[i] = handles[i].wf;
        std::printf("loaded %s (%lld samples, %d phases)\n", inputs[i].c_str(),
                    static_cast<long long>(hifd_waveform_sample_count(handles[i].wf)),
                    hifd_waveform_phase_count(handles[i].wf));
    }

    ModelHandle model;
    hifd_train_summary summary;
    const hifd_status status =
        hifd_train(pointers.data(), pointers.size(), &options, &model.model, &summary);
    if (status != HIFD_OK) return report(status, "train");

    std::printf("train rows %lld  validation rows %lld\n",
                static_cast<long long>(summary.train_rows),
                static_cast<long long>(summary.validation_rows));
    std::printf("final loss  train %.6g  validation %.6g\n", summary.final_train_loss,
                summary.final_validation_loss);
    std::printf("components %d  g %.6g  h %.6g\n", summary.n_components, summary.g, summary.h);
    std::printf("limits  t2 %.6g  spe %.6g  phi %.6g\n", summary.t2_limit, summary.spe_limit,
                summary.phi_limit);

    const hifd_status save_status = hifd_model_save(model.model, out_path.c_str());
    if (save_status != HIFD_OK) return report(save_status, "save model");
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_detect(const std::string& model_path, const std::string& input_path,
               const std::string& out_dir, std::int32_t threshold) {
    ModelHandle model;
    hifd_status status = hifd_model_load(model_path.c_str(), &model.model);
    if (status != HIFD_OK) return report(status, "load model");

    WaveformHandle wf;
    status = hifd_waveform_load(input_path.c_str(), &wf.wf);
    if (status != HIFD_OK) return report(status, "load recording");

    hifd_phase_result results[16];
    size_t count = 0;
    status = hifd_detect_recording(model.model, wf.wf, threshold,
                                   out_dir.empty() ? nullptr : out_dir.c_str(), results, 16,
                                   &count);
    if (status != HIFD_OK) return report(status, "detect");

    for (size_t i = 0; i < count && i < 16; ++i) {
        const hifd_phase_result& r = results[i];
        if (r.tripped) {
            std::printf("phase %s: trip at cycle %lld (%.3f s)  processed %lld  skipped %lld\n",
                        r.phase_name, static_cast<long long>(r.first_trip_cycle),
                        r.first_trip_seconds, static_cast<long long>(r.cycles_processed),
                        static_cast<long long>(r.cycles_skipped));
        } else {
            std::printf("phase %s: no trip  processed %lld  skipped %lld\n", r.phase_name,
                        static_cast<long long>(r.cycles_processed),
                        static_cast<long long>(r.cycles_skipped));
        }
    }
    if (!out_dir.empty()) std::printf("wrote traces under %s\n", out_dir.c_str());
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& manifest_path,
                 const std::string& out_dir, std::int32_t threshold, double grace) {
    ModelHandle model;
    hifd_status status = hifd_model_load(model_path.c_str(), &model.model);
    if (status != HIFD_OK) return report(status, "load model");

    hifd_evaluation eval;
    status = hifd_evaluate_corpus(model.model, manifest_path.c_str(), threshold, grace,
                                  out_dir.empty() ? nullptr : out_dir.c_str(), &eval);
    if (status != HIFD_OK) return report(status, "evaluate");

    std::printf("tp %lld  tn %lld  fp %lld  fn %lld\n", static_cast<long long>(eval.tp),
                static_cast<long long>(eval.tn), static_cast<long long>(eval.fp),
                static_cast<long long>(eval.fn));
    char table[512];
    hifd_evaluation_format(&eval, "corpus", table, sizeof(table));
    std::fputs(table, stdout);
    if (!out_dir.empty()) std::printf("wrote report under %s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High impedance fault detection pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("hifd ") + hifd_version());

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus");
    std::string sim_config, sim_out;
    std::int64_t sim_seed = -1;
    simulate->add_option("--config", sim_config, "Corpus config JSON (defaults when omitted)");
    simulate->add_option("--out", sim_out, "Output directory")->required();
    simulate->add_option("--seed", sim_seed, "Override the corpus base seed")
        ->envname("HIFD_SEED");

    // train
    auto* train = app.add_subcommand("train", "Train a detection model on normal recordings");
    std::vector<std::string> train_inputs;
    std::string train_manifest, train_out;
    std::vector<std::int32_t> train_layers;
    hifd_train_options options;
    hifd_train_options_init(&options);
    std::uint64_t train_seed = options.seed;
    train->add_option("--inputs", train_inputs, "Recording CSV files");
    train->add_option("--manifest", train_manifest,
                      "Corpus manifest; every non-fault recording is used");
    train->add_option("--out", train_out, "Model output path")->required();
    train->add_option("--ts", options.ts, "Samples per cycle");
    train->add_option("--vars", options.m_vars, "Cycle-sampled variables per cycle");
    train->add_option("--layers", train_layers, "Autoencoder layer sizes")->delimiter(',');
    train->add_option("--lr", options.learning_rate, "Adam learning rate");
    train->add_option("--epochs", options.epochs, "Training epochs");
    train->add_option("--batch", options.batch_size, "Mini-batch size");
    train->add_option("--train-fraction", options.train_fraction, "Training split fraction");
    train->add_option("--cpv", options.cpv_target, "Cumulative variance target");
    train->add_option("--alpha", options.alpha, "Control limit confidence");
    train->add_option("--seed", train_seed, "Training seed")->envname("HIFD_SEED");
    train->add_option("--threshold", options.threshold, "Trip counter threshold");

    // detect
    auto* detect = app.add_subcommand("detect", "Run detection over one recording");
    std::string detect_model, detect_input, detect_out;
    std::int32_t detect_threshold = 0;
    detect->add_option("--model", detect_model, "Trained model JSON")->required();
    detect->add_option("--input", detect_input, "Recording CSV")->required();
    detect->add_option("--out", detect_out, "Trace output directory");
    detect->add_option("--threshold", detect_threshold,
                       "Trip counter threshold (0 = model default)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a model against a labeled corpus");
    std::string eval_model, eval_manifest, eval_out;
    std::int32_t eval_threshold = 0;
    double eval_grace = -1.0;
    evaluate->add_option("--model", eval_model, "Trained model JSON")->required();
    evaluate->add_option("--manifest", eval_manifest, "Corpus manifest")->required();
    evaluate->add_option("--out", eval_out, "Report output directory");
    evaluate->add_option("--threshold", eval_threshold,
                         "Trip counter threshold (0 = model default)");
    evaluate->add_option("--grace", eval_grace,
                         "Post-window trip grace in seconds (negative = 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a configuration failure
    }

    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out, sim_seed);
    if (train->parsed()) {
        options.seed = train_seed;
        return cmd_train(train_inputs, train_manifest, train_out, options, train_layers);
    }
    if (detect->parsed()) return cmd_detect(detect_model, detect_input, detect_out, detect_threshold);
    if (evaluate->parsed())
        return cmd_evaluate(eval_model, eval_manifest, eval_out, eval_threshold, eval_grace);
    return 2;
}
