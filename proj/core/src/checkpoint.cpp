#include "xrwave/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace xrwave {

namespace {

constexpr char kMagic[8] = {'X', 'R', 'W', 'C', 'H', 'K', 'P', 'T'};
constexpr double kFormatVersion = 1.0;

void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t swapped = 0;
        for (int i = 0; i < 8; ++i)
            swapped |= ((bits >> (8 * i)) & 0xffULL) << (8 * (7 - i));
        bits = swapped;
    }
    out.write(reinterpret_cast<const char*>(&bits), 8);
}

double get_f64(std::ifstream& in, const std::filesystem::path& path) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), 8))
        throw Error("CorruptCheckpoint", path.string() + ": truncated");
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t swapped = 0;
        for (int i = 0; i < 8; ++i)
            swapped |= ((bits >> (8 * i)) & 0xffULL) << (8 * (7 - i));
        bits = swapped;
    }
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

int get_int(std::ifstream& in, const std::filesystem::path& path) {
    return static_cast<int>(get_f64(in, path));
}

} // namespace

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out.write(kMagic, 8);
    put_f64(out, kFormatVersion);
    put_f64(out, model.input_shape.channels);
    put_f64(out, model.input_shape.height);
    put_f64(out, model.input_shape.width);
    put_f64(out, static_cast<double>(model.layers.size()));
    for (const Layer& layer : model.layers) {
        put_f64(out, layer.spec.kind == LayerKind::conv ? 0.0 : 1.0);
        if (layer.spec.kind == LayerKind::conv) {
            put_f64(out, layer.spec.kernel_h);
            put_f64(out, layer.spec.kernel_w);
            put_f64(out, layer.spec.in_channels);
            put_f64(out, layer.spec.out_channels);
            put_f64(out, layer.spec.stride);
        } else {
            put_f64(out, layer.spec.in_width);
            put_f64(out, layer.spec.out_width);
        }
        put_f64(out, layer.spec.activation == Activation::relu ? 1.0 : 0.0);
        put_f64(out, layer.spec.frozen ? 1.0 : 0.0);
        for (double w : layer.weights) put_f64(out, w);
        for (double b : layer.biases) put_f64(out, b);
    }
    if (!out) throw Error("CorruptCheckpoint", "write failed: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path.string());
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw Error("CorruptCheckpoint", path.string() + ": bad magic");
    if (get_f64(in, path) != kFormatVersion)
        throw Error("CorruptCheckpoint", path.string() + ": unsupported version");

    TensorShape input_shape;
    input_shape.channels = get_int(in, path);
    input_shape.height = get_int(in, path);
    input_shape.width = get_int(in, path);
    const int n_layers = get_int(in, path);
    if (n_layers < 1 || n_layers > 10000)
        throw Error("CorruptCheckpoint", path.string() + ": implausible layer count");

    std::vector<LayerSpec> specs;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> params;
    for (int li = 0; li < n_layers; ++li) {
        const int kind = get_int(in, path);
        LayerSpec spec;
        std::size_t n_weights, n_biases;
        if (kind == 0) {
            const int kh = get_int(in, path);
            const int kw = get_int(in, path);
            const int in_ch = get_int(in, path);
            const int out_ch = get_int(in, path);
            const int stride = get_int(in, path);
            spec = LayerSpec::conv2d(kh, kw, in_ch, out_ch, stride, Activation::none);
            n_weights = static_cast<std::size_t>(out_ch) * in_ch * kh * kw;
            n_biases = static_cast<std::size_t>(out_ch);
        } else if (kind == 1) {
            const int ni = get_int(in, path);
            const int no = get_int(in, path);
            spec = LayerSpec::dense(no, Activation::none, ni);
            n_weights = static_cast<std::size_t>(no) * ni;
            n_biases = static_cast<std::size_t>(no);
        } else {
            throw Error("CorruptCheckpoint", path.string() + ": unknown layer kind");
        }
        spec.activation = get_f64(in, path) != 0.0 ? Activation::relu : Activation::none;
        spec.frozen = get_f64(in, path) != 0.0;

        std::vector<double> weights(n_weights), biases(n_biases);
        for (double& w : weights) w = get_f64(in, path);
        for (double& b : biases) b = get_f64(in, path);
        specs.push_back(spec);
        params.emplace_back(std::move(weights), std::move(biases));
    }

    Model model = init_model(specs, input_shape, 0);
    for (int li = 0; li < n_layers; ++li) {
        auto& layer = model.layers[static_cast<std::size_t>(li)];
        if (layer.weights.size() != params[static_cast<std::size_t>(li)].first.size())
            throw Error("CorruptCheckpoint", path.string() + ": weight size mismatch");
        layer.weights = std::move(params[static_cast<std::size_t>(li)].first);
        layer.biases = std::move(params[static_cast<std::size_t>(li)].second);
    }
    return model;
}

} // namespace xrwave
