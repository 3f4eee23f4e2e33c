#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"

namespace {

std::string cli_path() {
    const char* env = std::getenv("HIFD_CLI");
    REQUIRE_MESSAGE(env != nullptr, "HIFD_CLI must point at the cli binary");
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    static int counter = 0;
    const std::string capture =
        (std::filesystem::temp_directory_path() / ("hifd_cli_out_" + std::to_string(counter++)))
            .string();
    const std::string cmd = cli_path() + " " + args + " > " + capture + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    std::filesystem::remove(capture);
    return result;
}

const char* kTinyConfig = R"({
    "n_load_recordings": 2,
    "n_fault_recordings": 2,
    "ts": 32,
    "duration_seconds": 2.0,
    "fault": {"start_seconds": 0.5, "end_seconds": 1.5}
})";

// simulate + train once; the CLI round trip is slow enough to share
struct CliFixture {
    testing::TempDir dir{"cli"};
    std::string corpus;
    std::string model;

    CliFixture() {
        corpus = dir.file("corpus");
        const std::string config = dir.file("sim.json");
        std::ofstream(config) << kTinyConfig;
        RunResult sim = run("simulate --config " + config + " --out " + corpus);
        REQUIRE_MESSAGE(sim.exit_code == 0, sim.output);

        model = dir.file("model.json");
        RunResult train = run("train --manifest " + corpus +
                              "/manifest.json --out " + model +
                              " --ts 32 --vars 8 --layers 8,6,4,6,8 --epochs 8 --seed 7");
        REQUIRE_MESSAGE(train.exit_code == 0, train.output);
    }
};

}  // namespace

TEST_CASE("version and usage basics") {
    CHECK(run("--version").exit_code == 0);
    CHECK(run("--version").output.find("hifd 1.0.0") != std::string::npos);

    const RunResult bare = run("");
    CHECK(bare.exit_code == 2);

    const RunResult unknown = run("frobnicate");
    CHECK(unknown.exit_code == 2);

    const RunResult badflag = run("simulate --no-such-flag");
    CHECK(badflag.exit_code == 2);

    const RunResult help = run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("simulate") != std::string::npos);
    CHECK(help.output.find("evaluate") != std::string::npos);
}

TEST_CASE("simulate then train then detect then evaluate") {
    CliFixture fx;
    CHECK(std::filesystem::exists(fx.corpus + "/manifest.json"));
    CHECK(std::filesystem::exists(fx.corpus + "/load_00.csv"));
    CHECK(std::filesystem::exists(fx.corpus + "/fault_01.meta"));
    CHECK(std::filesystem::exists(fx.model));

    SUBCASE("detect a recording") {
        const std::string traces = fx.dir.file("traces");
        const RunResult detect = run("detect --model " + fx.model + " --input " + fx.corpus +
                                     "/load_00.csv --out " + traces);
        CHECK(detect.exit_code == 0);
        CHECK(detect.output.find("phase a:") != std::string::npos);
        CHECK(detect.output.find("no trip") != std::string::npos);
        CHECK(std::filesystem::exists(traces + "/trace_phase_a.csv"));
        CHECK(std::filesystem::exists(traces + "/events.jsonl"));
    }

    SUBCASE("evaluate the corpus") {
        const std::string report = fx.dir.file("report");
        const RunResult eval = run("evaluate --model " + fx.model + " --manifest " + fx.corpus +
                                   "/manifest.json --grace 0.5 --out " + report);
        CHECK(eval.exit_code == 0);
        CHECK(eval.output.find("tp ") != std::string::npos);
        CHECK(eval.output.find("Acc") != std::string::npos);
        CHECK(std::filesystem::exists(report + "/report.json"));
        CHECK(std::filesystem::exists(report + "/report.txt"));
    }

    SUBCASE("train output names the artifacts") {
        const RunResult train = run("train --manifest " + fx.corpus +
                                    "/manifest.json --out " + fx.dir.file("model2.json") +
                                    " --ts 32 --vars 8 --layers 8,6,4,6,8 --epochs 8 --seed 7");
        CHECK(train.exit_code == 0);
        CHECK(train.output.find("train rows 576") != std::string::npos);
        CHECK(train.output.find("components") != std::string::npos);
        CHECK(train.output.find("limits") != std::string::npos);
        CHECK(train.output.find("wrote") != std::string::npos);
    }
}

TEST_CASE("training accepts explicit csv inputs") {
    CliFixture fx;
    const std::string out = fx.dir.file("model_inputs.json");
    const RunResult train = run("train --inputs " + fx.corpus + "/load_00.csv " + fx.corpus +
                                "/load_01.csv --out " + out +
                                " --ts 32 --vars 8 --layers 8,6,4,6,8 --epochs 8");
    CHECK(train.exit_code == 0);
    CHECK(std::filesystem::exists(out));
}

TEST_CASE("error paths exit nonzero with a reason") {
    CliFixture fx;

    SUBCASE("missing model file") {
        const RunResult detect =
            run("detect --model /nonexistent.json --input " + fx.corpus + "/load_00.csv");
        CHECK(detect.exit_code == 1);
        CHECK(detect.output.find("failed") != std::string::npos);
        CHECK(detect.output.find("io") != std::string::npos);
    }
    SUBCASE("bad config document") {
        std::ofstream(fx.dir.file("bad.json")) << "{\"ts\": -4}";
        const RunResult sim = run("simulate --config " + fx.dir.file("bad.json") + " --out " +
                                  fx.dir.file("nowhere"));
        CHECK(sim.exit_code == 2);
        CHECK(sim.output.find("ts") != std::string::npos);
    }
    SUBCASE("train without recordings") {
        const RunResult train = run("train --out " + fx.dir.file("m.json"));
        CHECK(train.exit_code == 2);
    }
    SUBCASE("mismatched model and recording") {
        // model expects 32 samples per cycle; feed a 64-sample-cycle recording
        const std::string other = fx.dir.file("other");
        std::ofstream(fx.dir.file("sim64.json")) << R"({
            "n_load_recordings": 1, "n_fault_recordings": 2, "ts": 64,
            "duration_seconds": 1.0,
            "fault": {"start_seconds": 0.25, "end_seconds": 0.75}})";
        REQUIRE(run("simulate --config " + fx.dir.file("sim64.json") + " --out " + other)
                    .exit_code == 0);
        const RunResult detect =
            run("detect --model " + fx.model + " --input " + other + "/load_00.csv");
        CHECK(detect.exit_code == 2);
    }
}

TEST_CASE("the seed environment variable drives simulate") {
    testing::TempDir dir("cli_seed");
    const std::string config = dir.file("sim.json");
    std::ofstream(config) << kTinyConfig;

    auto simulate = [&](const std::string& prefix, const std::string& out,
                        const std::string& extra = "") {
        const std::string capture = dir.file("cap.txt");
        const std::string cmd = prefix + " " + cli_path() + " simulate --config " + config +
                                " --out " + out + extra + " > " + capture + " 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };

    REQUIRE(simulate("HIFD_SEED=123", dir.file("s1")) == 0);
    REQUIRE(simulate("HIFD_SEED=123", dir.file("s2")) == 0);
    REQUIRE(simulate("HIFD_SEED=124", dir.file("s3")) == 0);
    // explicit flag beats the environment
    REQUIRE(simulate("HIFD_SEED=124", dir.file("s4"), " --seed 123") == 0);

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string base = slurp(dir.file("s1") + "/load_00.csv");
    CHECK(base == slurp(dir.file("s2") + "/load_00.csv"));
    CHECK(base != slurp(dir.file("s3") + "/load_00.csv"));
    CHECK(base == slurp(dir.file("s4") + "/load_00.csv"));
}
