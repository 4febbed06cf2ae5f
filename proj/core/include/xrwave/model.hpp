#ifndef XRWAVE_MODEL_HPP
#define XRWAVE_MODEL_HPP

#include <cstdint>
#include <vector>

#include "xrwave/dataset.hpp"
#include "xrwave/errors.hpp"

namespace xrwave {

enum class LayerKind { conv, dense };
enum class Activation { relu, none };

struct TensorShape {
    int channels = 0;
    int height = 0;
    int width = 0;
    int flat() const { return channels * height * width; }
};

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    // conv parameters (valid convolution, no padding)
    int kernel_h = 0, kernel_w = 0;
    int in_channels = 0, out_channels = 0;
    int stride = 1;
    // dense parameters; in_width 0 means "infer from the incoming shape"
    int in_width = 0, out_width = 0;
    Activation activation = Activation::none;
    bool frozen = false;

    static LayerSpec conv2d(int kh, int kw, int in_ch, int out_ch, int stride, Activation act);
    static LayerSpec dense(int out, Activation act, int in = 0);
};

struct Layer {
    LayerSpec spec;
    TensorShape in_shape, out_shape;
    std::vector<double> weights; // conv: [out_ch][in_ch][kh][kw]; dense: [out][in]
    std::vector<double> biases;  // one per output channel / unit
};

struct Model {
    std::vector<Layer> layers;
    TensorShape input_shape;
    std::uint64_t seed = 0;

    int num_layers() const { return static_cast<int>(layers.size()); }
};

// Batch-major sample block: data has batch * shape.flat() values.
struct Batch {
    int batch = 0;
    TensorShape shape;
    std::vector<double> data;
};

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

struct OptimizerState {
    std::vector<std::vector<double>> weight_velocity;
    std::vector<std::vector<double>> bias_velocity;

    static OptimizerState zeros_like(const Model& model);
};

// Resolves the shape chain against input_shape and draws weights uniformly
// from [-1/sqrt(fan_in), 1/sqrt(fan_in)]; biases start at zero. Deterministic
// in seed. Enforces: consistent chaining, final layer has activation none and
// out_width 14. Throws Error("ShapeChainMismatch").
Model init_model(const std::vector<LayerSpec>& specs, TensorShape input_shape,
                 std::uint64_t seed);

// Default desk-scale architecture:
// conv(3x3, in->8, s1, relu) -> conv(3x3, 8->16, s2, relu)
// -> dense(64, relu) -> dense(14, none).
std::vector<LayerSpec> default_architecture();

// Per-class probabilities (batch x 14): logistic of the final logits.
std::vector<double> forward(const Model& model, const Batch& input);

// Mean binary cross-entropy over batch and classes; probabilities clamped to
// [1e-12, 1 - 1e-12].
double bce_loss(const std::vector<double>& probabilities, const std::vector<LabelBits>& labels);

// Gradients of bce_loss w.r.t. every weight/bias array. Frozen layers get
// zero-filled gradient arrays. loss_out, when non-null, receives the batch
// loss from the same forward pass.
Gradients backward(const Model& model, const Batch& input, const std::vector<LabelBits>& labels,
                   double* loss_out = nullptr);

// v <- momentum*v - lr*g; w <- w + v. Frozen arrays untouched.
void sgdm_step(Model& model, OptimizerState& state, const Gradients& grads, double learning_rate,
               double momentum);

// Flags the first k layers frozen, the rest trainable. 0 <= k < layer count.
void freeze_first(Model& model, int k);

} // namespace xrwave

#endif
