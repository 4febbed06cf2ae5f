#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xrwave/image_io.hpp"

using namespace xrwave;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "xrwave_cli_tests";
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const fs::path log = temp_dir() / "cli_log.txt";
    const std::string cmd =
        std::string(XRWAVE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_manifest(int n) {
    const fs::path path = temp_dir() / "manifest.csv";
    std::ofstream out(path);
    out << "Image Index,Finding Labels,Patient ID\n";
    for (int i = 0; i < n; ++i)
        out << "img" << i << ".png," << (i % 2 ? "Effusion" : "No Finding") << ",P" << i << "\n";
    return path;
}

} // namespace

TEST_CASE("cli: missing input file fails and names the path") {
    const auto r = run_cli("dwt /nonexistent/scan.png --out " + (temp_dir() / "d0").string());
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("error:") != std::string::npos);
    CHECK(r.output.find("/nonexistent/scan.png") != std::string::npos);
}

TEST_CASE("cli: bad split ratios are rejected") {
    const fs::path manifest = write_manifest(20);
    const auto r = run_cli("split " + manifest.string() + " --ratios 0.75 0.15 0.15 --out " +
                           (temp_dir() / "s_bad").string());
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("BadRatios") != std::string::npos);
    CHECK_FALSE(fs::exists(temp_dir() / "s_bad" / "train.csv"));
}

TEST_CASE("cli: split reruns are byte-identical") {
    const fs::path manifest = write_manifest(40);
    const fs::path a = temp_dir() / "s_a";
    const fs::path b = temp_dir() / "s_b";
    CHECK(run_cli("split " + manifest.string() + " --split-seed 5 --out " + a.string())
              .exit_code == 0);
    CHECK(run_cli("split " + manifest.string() + " --split-seed 5 --out " + b.string())
              .exit_code == 0);
    for (const char* name : {"train.csv", "validation.csv", "test.csv"}) {
        CHECK(read_bytes(a / name) == read_bytes(b / name));
        CHECK(!read_bytes(a / name).empty());
    }
}

TEST_CASE("cli: dwt separates vertical stripes from the horizontal channel") {
    // Stripes cover the left half only so the detail band is nonconstant and
    // survives min-max rescaling.
    Image stripes(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            stripes.at(r, c) = (c < 8 && c % 2 == 0) ? 1.0 : 0.0;
    const fs::path input = temp_dir() / "stripes.png";
    save_png(stripes, input);

    const fs::path out = temp_dir() / "dwt_stripes";
    CHECK(run_cli("dwt " + input.string() + " --out " + out.string()).exit_code == 0);

    const Image vertical = load_image(out / "vertical.png");
    const Image horizontal = load_image(out / "horizontal.png");
    CHECK(vertical.energy() > 0.0);
    CHECK(horizontal.energy() == 0.0);
}

TEST_CASE("cli: constant input produces all-black detail images") {
    const fs::path input = temp_dir() / "flat.png";
    save_png(Image(8, 8, 0.7), input);
    const fs::path out = temp_dir() / "dwt_flat";
    CHECK(run_cli("dwt " + input.string() + " --out " + out.string()).exit_code == 0);
    for (const char* name : {"vertical.png", "horizontal.png"})
        CHECK(load_image(out / name).energy() == 0.0);
}

TEST_CASE("cli: dwt --subbands writes the full pyramid") {
    Image stripes(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            stripes.at(r, c) = (c < 8 && c % 2 == 0) ? 1.0 : 0.0;
    const fs::path input = temp_dir() / "stripes2.png";
    save_png(stripes, input);
    const fs::path out = temp_dir() / "dwt_deep";
    CHECK(run_cli("dwt " + input.string() + " --depth 2 --subbands --out " + out.string())
              .exit_code == 0);
    for (const char* name :
         {"level1_ll.png", "level1_hh.png", "level2_lh.png", "final_ll.png"})
        CHECK(fs::exists(out / name));
}
