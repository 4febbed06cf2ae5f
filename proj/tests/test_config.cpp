#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "xrwave/config.hpp"

using namespace xrwave;
namespace fs = std::filesystem;

namespace {

fs::path write_cfg(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "xrwave_config_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("defaults form a valid config") {
    RunConfig config;
    config.validate(); // must not throw
    CHECK(config.hyper.epochs == 15);
    CHECK(config.hyper.batch_size == 20);
    CHECK(config.hyper.learning_rate == 3e-4);
    CHECK(config.hyper.momentum == 0.9);
    CHECK(config.split_ratios[0] == 0.70);
    CHECK(config.split_ratios[1] == 0.15);
    CHECK(config.split_ratios[2] == 0.15);
    CHECK(config.input_mode() == InputMode::wavelet);
}

TEST_CASE("parse_config overrides and comments") {
    const auto path = write_cfg("basic.cfg",
                                "# training setup\n"
                                "mode = raw\n"
                                "epochs = 3\n"
                                "learning_rate = 0.01\n"
                                "\n"
                                "split_train = 0.6\n"
                                "split_validation = 0.2\n"
                                "split_test = 0.2\n"
                                "split_by_patient = true\n"
                                "aug_seed = 99\n");
    const RunConfig config = parse_config(path);
    CHECK(config.mode == "raw");
    CHECK(config.input_mode() == InputMode::raw);
    CHECK(config.hyper.epochs == 3);
    CHECK(config.hyper.learning_rate == 0.01);
    CHECK(config.split_ratios[0] == 0.6);
    CHECK(config.split_by_patient);
    CHECK(config.aug_seed == 99);
    CHECK(config.hyper.batch_size == 20); // untouched default
}

TEST_CASE("serialize/parse round trip is semantically identical") {
    RunConfig config;
    config.mode = "raw";
    config.filter = "db2";
    config.depth = 2;
    config.hyper.learning_rate = 1.25e-3;
    config.hyper.seed = 31337;
    config.lr_decay_factor = 0.5;
    config.freeze_first_k = 2;
    config.out_dir = "elsewhere";
    config.split_ratios = {0.5, 0.3, 0.2};

    const auto path = fs::temp_directory_path() / "xrwave_config_tests" / "rt.cfg";
    fs::create_directories(path.parent_path());
    write_config(config, path);
    const RunConfig back = parse_config(path);
    CHECK(back.mode == config.mode);
    CHECK(back.filter == config.filter);
    CHECK(back.depth == config.depth);
    CHECK(back.hyper.learning_rate == config.hyper.learning_rate);
    CHECK(back.hyper.seed == config.hyper.seed);
    CHECK(back.lr_decay_factor == config.lr_decay_factor);
    CHECK(back.freeze_first_k == config.freeze_first_k);
    CHECK(back.out_dir == config.out_dir);
    CHECK(back.split_ratios == config.split_ratios);
    CHECK(serialize_config(back) == serialize_config(config));
}

TEST_CASE("parse_config error paths cite the offending line") {
    CHECK_THROWS_WITH_AS(parse_config("/nonexistent/x.cfg"), doctest::Contains("FileNotFound"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_config(write_cfg("unk.cfg", "nonsense_key = 5\n")),
                         doctest::Contains("BadConfig"), Error);
    CHECK_THROWS_WITH_AS(parse_config(write_cfg("noval.cfg", "epochs\n")),
                         doctest::Contains("BadConfig"), Error);
    CHECK_THROWS_WITH_AS(parse_config(write_cfg("badnum.cfg", "epochs = many\n")),
                         doctest::Contains("BadConfig"), Error);
    try {
        parse_config(write_cfg("line3.cfg", "mode = raw\n\nepochs = x\n"));
        FAIL("expected BadConfig");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("validate rejects out-of-range settings") {
    RunConfig config;
    config.mode = "fancy";
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("BadConfig"), Error);

    config = RunConfig{};
    config.hyper.batch_size = 0;
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("BadConfig"), Error);

    config = RunConfig{};
    config.split_ratios = {0.75, 0.15, 0.15};
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("BadRatios"), Error);

    config = RunConfig{};
    config.aug_rotation_deg = 60.0;
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("BadAugmentParams"), Error);
}
