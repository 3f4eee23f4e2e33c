#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hifd/csv_io.hpp"
#include "hifd/model_io.hpp"
#include "hifd/pipeline.hpp"
#include "helpers.hpp"

using namespace hifd;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

}  // namespace

TEST_CASE("doubles survive the text round trip") {
    const std::vector<double> values = {0.0,    -0.0,      1.0,        -1.5,  1.0 / 3.0,
                                        1e-300, 1.25e300,  0.1,        100.0, -99.99999999999999,
                                        3.141592653589793, 5e-324};
    for (double v : values) {
        CAPTURE(v);
        const double back = parse_double(format_double(v), "test");
        CHECK(back == v);
        CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK_THROWS_AS(parse_double("not-a-number", "test"), Error);
    CHECK_THROWS_AS(parse_double("1.5x", "test"), Error);
    CHECK_THROWS_AS(parse_double("", "test"), Error);
}

TEST_CASE("waveform csv round trip is bit exact") {
    testing::TempDir dir("wave");
    const WaveformRecord record = testing::tiny_recording(31, 0.5);
    const std::string csv = dir.file("rec.csv");
    save_waveform_csv(record, csv);

    CHECK(meta_path_for(csv) == dir.file("rec.meta"));
    CHECK(std::filesystem::exists(meta_path_for(csv)));

    const WaveformRecord loaded = load_waveform_csv(csv);
    CHECK(loaded.ts == record.ts);
    CHECK(loaded.sample_rate_hz == record.sample_rate_hz);
    REQUIRE(loaded.phases.size() == 3);
    for (std::size_t p = 0; p < 3; ++p) {
        CHECK(loaded.phases[p].name == record.phases[p].name);
        CHECK(loaded.phases[p].samples == record.phases[p].samples);
    }
    CHECK_FALSE(loaded.label.has_value());

    SUBCASE("header names the phases") {
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "sample_index,phase_a,phase_b,phase_c");
    }
}

TEST_CASE("fault labels ride along in the sidecar") {
    testing::TempDir dir("label");
    WaveformRecord record = testing::tiny_recording(32, 0.5);
    record.label = FaultLabel{160, 640, "b"};
    const std::string csv = dir.file("fault.csv");
    save_waveform_csv(record, csv);
    const WaveformRecord loaded = load_waveform_csv(csv);
    REQUIRE(loaded.label.has_value());
    CHECK(loaded.label->fault_start_sample == 160);
    CHECK(loaded.label->fault_end_sample == 640);
    CHECK(loaded.label->faulted_phase == "b");
}

TEST_CASE("waveform loading rejects broken inputs") {
    testing::TempDir dir("bad");
    const WaveformRecord record = testing::tiny_recording(33, 0.25);
    const std::string csv = dir.file("rec.csv");
    save_waveform_csv(record, csv);

    SUBCASE("missing csv") {
        try {
            load_waveform_csv(dir.file("absent.csv"));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::io);
        }
    }
    SUBCASE("missing sidecar") {
        std::filesystem::remove(meta_path_for(csv));
        try {
            load_waveform_csv(csv);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::io);
        }
    }
    SUBCASE("wrong sidecar version") {
        std::string meta = slurp(meta_path_for(csv));
        const auto pos = meta.find("\"format_version\": 1");
        REQUIRE(pos != std::string::npos);
        meta.replace(pos, 19, "\"format_version\": 9");
        spit(meta_path_for(csv), meta);
        try {
            load_waveform_csv(csv);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::version);
        }
    }
    SUBCASE("corrupt sidecar json") {
        spit(meta_path_for(csv), "{ nope");
        try {
            load_waveform_csv(csv);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_input);
        }
    }
    SUBCASE("bad header") {
        std::string text = slurp(csv);
        text.replace(0, 12, "sample_indey");
        spit(csv, text);
        CHECK_THROWS_AS(load_waveform_csv(csv), Error);
    }
    SUBCASE("out-of-order sample index") {
        std::string text = slurp(csv);
        const auto line2 = text.find("\n1,");
        REQUIRE(line2 != std::string::npos);
        text.replace(line2, 3, "\n7,");
        spit(csv, text);
        try {
            load_waveform_csv(csv);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_input);
        }
    }
    SUBCASE("non-numeric cell") {
        std::string text = slurp(csv);
        const auto line2 = text.find("\n1,");
        REQUIRE(line2 != std::string::npos);
        const auto comma = text.find(',', line2 + 1);
        text.insert(comma + 1, "zz");
        spit(csv, text);
        CHECK_THROWS_AS(load_waveform_csv(csv), Error);
    }
}

TEST_CASE("csv loader tolerates crlf and blank lines") {
    testing::TempDir dir("crlf");
    const WaveformRecord record = testing::tiny_recording(34, 0.25);
    const std::string csv = dir.file("rec.csv");
    save_waveform_csv(record, csv);
    std::string text = slurp(csv);
    std::string crlf;
    for (char ch : text) {
        if (ch == '\n') crlf += "\r\n";
        else crlf += ch;
    }
    crlf += "\r\n\r\n";
    spit(csv, crlf);
    const WaveformRecord loaded = load_waveform_csv(csv);
    CHECK(loaded.phases[0].samples == record.phases[0].samples);
}

TEST_CASE("trace csv and event log have the documented shapes") {
    testing::TempDir dir("trace");
    std::vector<DetectionOutput> trace(2);
    trace[0] = {0, 1.5, 13.25, false, 0, false};
    trace[1] = {1, 14.5, 13.25, true, 1, false};
    const std::string path = dir.file("trace.csv");
    save_trace_csv(trace, path);
    const std::string text = slurp(path);
    CHECK(text.find("cycle_index,phi,limit,above,counter,trip") == 0);
    CHECK(text.find("\n0,1.5,13.25,0,0,0\n") != std::string::npos);
    CHECK(text.find("\n1,14.5,13.25,1,1,0\n") != std::string::npos);

    std::vector<DetectionEvent> events;
    events.push_back({DetectionEvent::Kind::trip, "a", 120, "counter reached 60"});
    events.push_back({DetectionEvent::Kind::skipped_cycle, "b", 3, "non-finite sample"});
    const std::string log = dir.file("events.jsonl");
    save_event_log(events, 1.0 / 60.0, log);
    const std::string lines = slurp(log);
    CHECK(lines.find("\"kind\":\"trip\"") != std::string::npos);
    CHECK(lines.find("\"kind\":\"skipped_cycle\"") != std::string::npos);
    CHECK(lines.find("\"cycle_index\":120") != std::string::npos);
    CHECK(lines.find("\"time_seconds\":2.0") != std::string::npos);
    // one json object per line
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 2);
}

TEST_CASE("model json round trip preserves every bit") {
    testing::TempDir dir("model");
    const PipelineModel model = testing::tiny_model();
    const std::string path = dir.file("model.json");
    save_model(model, path);
    const PipelineModel loaded = load_model(path);
    CHECK(model_to_json(loaded) == model_to_json(model));
    CHECK(loaded.config.ts == model.config.ts);
    CHECK(loaded.config.train.seed == model.config.train.seed);
    CHECK(loaded.autoencoder.weights[0] == model.autoencoder.weights[0]);
    CHECK(loaded.monitor.phi_limit == model.monitor.phi_limit);
    CHECK(loaded.monitor.n_components == model.monitor.n_components);
}

TEST_CASE("model loading re-validates the document") {
    testing::TempDir dir("tamper");
    const PipelineModel model = testing::tiny_model();
    const std::string path = dir.file("model.json");
    save_model(model, path);
    const std::string good = slurp(path);

    SUBCASE("missing file") {
        try {
            load_model(dir.file("absent.json"));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::io);
        }
    }
    SUBCASE("not json") {
        spit(path, "hello");
        try {
            load_model(path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_input);
        }
    }
    SUBCASE("wrong version") {
        std::string bad = good;
        const auto pos = bad.find("\"format_version\": 1");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 19, "\"format_version\": 99");
        spit(path, bad);
        try {
            load_model(path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::version);
        }
    }
    SUBCASE("tampered component count") {
        std::string bad = good;
        const auto pos = bad.find("\"n_components\"");
        REQUIRE(pos != std::string::npos);
        const auto colon = bad.find(':', pos);
        const auto comma = bad.find_first_of(",}", colon);
        bad.replace(colon + 1, comma - colon - 1, " 0");
        spit(path, bad);
        CHECK_THROWS_AS(load_model(path), Error);
    }
}

TEST_CASE("assemble_training_matrix concatenates phases and recordings") {
    const WaveformRecord r1 = testing::tiny_recording(41, 0.5);  // 30 cycles per phase
    const WaveformRecord r2 = testing::tiny_recording(42, 0.25);  // 15 cycles per phase
    const Eigen::MatrixXd m = assemble_training_matrix({r1, r2}, 32, 8);
    CHECK(m.rows() == 3 * 30 + 3 * 15);
    CHECK(m.cols() == 8);
    // first row is the gap-sampled first cycle of r1 phase a
    for (int j = 0; j < 8; ++j)
        CHECK(m(0, j) == r1.phases[0].samples[static_cast<std::size_t>(j) * 4]);
}

TEST_CASE("train_pipeline wires the stages together") {
    const std::vector<WaveformRecord> recordings{testing::tiny_recording(51),
                                                 testing::tiny_recording(52)};
    const PipelineConfig config = testing::tiny_config();
    const TrainPipelineResult result = train_pipeline(recordings, config);

    CHECK(result.train_rows + result.validation_rows == 2 * 3 * 120);
    CHECK(result.train_rows == 576);  // 80% of 720
    CHECK(result.history.size() == static_cast<std::size_t>(config.train.epochs));
    CHECK_NOTHROW(result.model.validate());
    CHECK(result.model.config.ts == 32);
    CHECK(result.model.monitor.var_count() == 8);
    CHECK(result.model.monitor.phi_limit > 0.0);

    SUBCASE("deterministic end to end") {
        const TrainPipelineResult again = train_pipeline(recordings, config);
        CHECK(model_to_json(again.model) == model_to_json(result.model));
    }
    SUBCASE("seed changes the model") {
        PipelineConfig other = config;
        other.train.seed = 8;
        const TrainPipelineResult changed = train_pipeline(recordings, other);
        CHECK(model_to_json(changed.model) != model_to_json(result.model));
    }
}

TEST_CASE("train_pipeline rejects mismatched recordings") {
    std::vector<WaveformRecord> recordings{testing::tiny_recording(53)};
    recordings[0].ts = 16;  // inconsistent with config.ts below
    recordings[0].sample_rate_hz = 960.0;
    PipelineConfig config = testing::tiny_config();
    CHECK_THROWS_AS(train_pipeline(recordings, config), Error);
    CHECK_THROWS_AS(train_pipeline(std::vector<WaveformRecord>{}, config), Error);
}

TEST_CASE("detect_recording writes traces and events when asked") {
    testing::TempDir dir("detect");
    const PipelineModel model = testing::tiny_model();
    const WaveformRecord record = testing::tiny_recording(54);
    const RecordingResult result = detect_recording(model, record, 60, dir.path());
    REQUIRE(result.summaries.size() == 3);

    for (const char* name : {"a", "b", "c"}) {
        const std::string path = dir.file(std::string("trace_phase_") + name + ".csv");
        CHECK(std::filesystem::exists(path));
        const std::string text = slurp(path);
        CHECK(text.find("cycle_index,phi,limit") == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') ==
              1 + static_cast<std::ptrdiff_t>(record.cycle_count()));
    }
    CHECK(std::filesystem::exists(dir.file("events.jsonl")));

    SUBCASE("no out_dir, no files") {
        testing::TempDir empty("detect_none");
        const RecordingResult quiet = detect_recording(model, record, 60);
        CHECK(quiet.summaries.size() == 3);
        CHECK(std::filesystem::is_empty(empty.path()));
    }
}

TEST_CASE("parse_corpus_spec applies defaults and rejects junk") {
    const CorpusSpec defaults = parse_corpus_spec("");
    CHECK(defaults.n_load_recordings == 4);
    CHECK(defaults.n_fault_recordings == 12);
    CHECK(defaults.ts == 320);
    CHECK(defaults.duration_seconds == 180.0);
    CHECK(defaults.base_seed == 2024);

    const CorpusSpec tweaked = parse_corpus_spec(R"({
        "n_load_recordings": 2,
        "n_fault_recordings": 3,
        "ts": 64,
        "duration_seconds": 4.0,
        "base_seed": 7,
        "fault": {"start_seconds": 1.0, "end_seconds": 3.0, "magnitude": 0.1}
    })");
    CHECK(tweaked.n_load_recordings == 2);
    CHECK(tweaked.ts == 64);
    CHECK(tweaked.fault_template.magnitude == 0.1);
    CHECK(tweaked.fault_template.start_seconds == 1.0);
    // untouched fields keep their defaults
    CHECK(tweaked.fault_template.asymmetry == 0.7);
    CHECK(tweaked.base_profile.amplitude == 100.0);

    SUBCASE("profile subdocument") {
        const CorpusSpec p = parse_corpus_spec(R"({
            "duration_seconds": 4.0,
            "fault": {"start_seconds": 1.0, "end_seconds": 3.0},
            "profile": {"amplitude": 80.0, "noise_std": 1.0,
                         "harmonics": [{"order": 3, "amplitude": 0.1, "phase": 0.2}]}
        })");
        CHECK(p.base_profile.amplitude == 80.0);
        CHECK(p.base_profile.noise_std == 1.0);
        REQUIRE(p.base_profile.harmonics.size() == 1);
        CHECK(p.base_profile.harmonics[0].order == 3);
    }
    SUBCASE("unknown keys are named") {
        try {
            parse_corpus_spec(R"({"n_load_recording": 2})");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::config);
            CHECK(std::string(e.what()).find("n_load_recording") != std::string::npos);
        }
    }
    SUBCASE("wrong types are named") {
        try {
            parse_corpus_spec(R"({"ts": "many"})");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::config);
            CHECK(std::string(e.what()).find("ts") != std::string::npos);
        }
    }
    SUBCASE("invalid json") {
        CHECK_THROWS_AS(parse_corpus_spec("{"), Error);
    }
    SUBCASE("spec-level validation still applies") {
        CHECK_THROWS_AS(parse_corpus_spec(R"({"duration_seconds": 1.0})"), Error);
    }
}

TEST_CASE("simulate_corpus writes a loadable corpus with a stable manifest") {
    testing::TempDir dir("corpus");
    CorpusSpec spec;
    spec.n_load_recordings = 2;
    spec.n_fault_recordings = 2;
    spec.ts = 32;
    spec.duration_seconds = 2.0;
    spec.fault_template.start_seconds = 0.5;
    spec.fault_template.end_seconds = 1.5;
    spec.base_profile.seed = 5;

    const SimulateResult result = simulate_corpus(spec, dir.path());
    CHECK(result.manifest_path == dir.file("manifest.json"));
    REQUIRE(result.entries.size() == 4);
    CHECK(result.entries[0].name == "load_00");
    CHECK(result.entries[3].name == "fault_01");
    CHECK(result.entries[3].severity == spec.fault_template.magnitude);

    for (const auto& entry : result.entries) {
        const WaveformRecord loaded =
            load_waveform_csv(dir.file(entry.csv_path));
        CHECK(loaded.cycle_count() == 120);
        CHECK(loaded.label.has_value() == entry.is_fault);
    }

    const std::string manifest_text = slurp(result.manifest_path);
    CHECK(manifest_text.find("\"format_version\": 1") != std::string::npos);
    CHECK(manifest_text.find("load_00.csv") != std::string::npos);

    SUBCASE("regeneration is byte identical") {
        testing::TempDir again("corpus2");
        const SimulateResult second = simulate_corpus(spec, again.path());
        CHECK(slurp(second.manifest_path) == manifest_text);
        for (std::size_t i = 0; i < result.entries.size(); ++i)
            CHECK(slurp(again.file(second.entries[i].csv_path)) ==
                  slurp(dir.file(result.entries[i].csv_path)));
    }
}

TEST_CASE("evaluate_corpus scores a manifest end to end") {
    testing::TempDir dir("eval");
    CorpusSpec spec;
    spec.n_load_recordings = 2;
    spec.n_fault_recordings = 2;
    spec.ts = 32;
    spec.duration_seconds = 2.0;
    spec.fault_template.start_seconds = 0.5;
    spec.fault_template.end_seconds = 1.5;
    const SimulateResult sim = simulate_corpus(spec, dir.path());

    // train on the corpus's own load recordings so healthy cases stay quiet
    std::vector<WaveformRecord> loads;
    for (const auto& entry : sim.entries)
        if (!entry.is_fault) loads.push_back(load_waveform_csv(dir.file(entry.csv_path)));
    const PipelineModel model = train_pipeline(loads, testing::tiny_config()).model;

    testing::TempDir out("eval_out");
    const EvaluationResult eval =
        evaluate_corpus(model, sim.manifest_path, 60, 0.5, out.path());
    CHECK(eval.outcomes.size() == 4);
    CHECK(eval.labels.size() == 4);
    // each recording scores exactly once; spurious trips could only add fp
    CHECK(eval.counts.tn == 2);
    CHECK(eval.counts.tp + eval.counts.fn == 2);
    CHECK(eval.counts.total() >= 4);
    CHECK(std::filesystem::exists(out.file("report.json")));
    CHECK(std::filesystem::exists(out.file("report.txt")));

    const std::string report = slurp(out.file("report.json"));
    CHECK(report.find("\"counts\"") != std::string::npos);
    CHECK(report.find("\"metrics\"") != std::string::npos);
    CHECK(report.find("fault_01") != std::string::npos);
    const std::string table = slurp(out.file("report.txt"));
    CHECK(table.find("Acc") != std::string::npos);

    SUBCASE("missing manifest is an io error") {
        try {
            evaluate_corpus(model, dir.file("nope.json"), 60, 0.5);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::io);
        }
    }
}
