#include "xrwave/model.hpp"

#include <cmath>
#include <string>

#include "xrwave/rng.hpp"

namespace xrwave {

namespace {

constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) {
    if (p < kProbClamp) return kProbClamp;
    if (p > 1.0 - kProbClamp) return 1.0 - kProbClamp;
    return p;
}

int conv_out_dim(int in, int kernel, int stride) {
    return (in - kernel) / stride + 1;
}

// Forward through one layer; `in` holds batch * in_shape.flat() values,
// `out` is resized to batch * out_shape.flat().
void layer_forward(const Layer& layer, int batch, const std::vector<double>& in,
                   std::vector<double>& out) {
    const TensorShape& is = layer.in_shape;
    const TensorShape& os = layer.out_shape;
    out.assign(static_cast<std::size_t>(batch) * os.flat(), 0.0);

    if (layer.spec.kind == LayerKind::dense) {
        const int ni = is.flat();
        const int no = os.flat();
        for (int b = 0; b < batch; ++b) {
            const double* x = in.data() + static_cast<std::size_t>(b) * ni;
            double* y = out.data() + static_cast<std::size_t>(b) * no;
            for (int o = 0; o < no; ++o) {
                const double* w = layer.weights.data() + static_cast<std::size_t>(o) * ni;
                double acc = layer.biases[static_cast<std::size_t>(o)];
                for (int i = 0; i < ni; ++i) acc += w[i] * x[i];
                y[o] = acc;
            }
        }
    } else {
        const int kh = layer.spec.kernel_h, kw = layer.spec.kernel_w;
        const int stride = layer.spec.stride;
        for (int b = 0; b < batch; ++b) {
            const double* x = in.data() + static_cast<std::size_t>(b) * is.flat();
            double* y = out.data() + static_cast<std::size_t>(b) * os.flat();
            for (int oc = 0; oc < os.channels; ++oc) {
                const double* wbase =
                    layer.weights.data() +
                    static_cast<std::size_t>(oc) * is.channels * kh * kw;
                const double bias = layer.biases[static_cast<std::size_t>(oc)];
                for (int oy = 0; oy < os.height; ++oy) {
                    for (int ox = 0; ox < os.width; ++ox) {
                        double acc = bias;
                        for (int ic = 0; ic < is.channels; ++ic) {
                            const double* xc =
                                x + static_cast<std::size_t>(ic) * is.height * is.width;
                            const double* wc = wbase + static_cast<std::size_t>(ic) * kh * kw;
                            for (int ky = 0; ky < kh; ++ky) {
                                const double* xrow =
                                    xc + static_cast<std::size_t>(oy * stride + ky) * is.width +
                                    ox * stride;
                                const double* wrow = wc + static_cast<std::size_t>(ky) * kw;
                                for (int kx = 0; kx < kw; ++kx) acc += wrow[kx] * xrow[kx];
                            }
                        }
                        y[(static_cast<std::size_t>(oc) * os.height + oy) * os.width + ox] = acc;
                    }
                }
            }
        }
    }

    if (layer.spec.activation == Activation::relu)
        for (double& v : out)
            if (v < 0.0) v = 0.0;
}

} // namespace

LayerSpec LayerSpec::conv2d(int kh, int kw, int in_ch, int out_ch, int stride, Activation act) {
    LayerSpec s;
    s.kind = LayerKind::conv;
    s.kernel_h = kh;
    s.kernel_w = kw;
    s.in_channels = in_ch;
    s.out_channels = out_ch;
    s.stride = stride;
    s.activation = act;
    return s;
}

LayerSpec LayerSpec::dense(int out, Activation act, int in) {
    LayerSpec s;
    s.kind = LayerKind::dense;
    s.in_width = in;
    s.out_width = out;
    s.activation = act;
    return s;
}

std::vector<LayerSpec> default_architecture() {
    return {
        LayerSpec::conv2d(3, 3, 0, 8, 1, Activation::relu),
        LayerSpec::conv2d(3, 3, 8, 16, 2, Activation::relu),
        LayerSpec::dense(64, Activation::relu),
        LayerSpec::dense(kNumClasses, Activation::none),
    };
}

Model init_model(const std::vector<LayerSpec>& specs, TensorShape input_shape,
                 std::uint64_t seed) {
    if (specs.empty()) throw Error("ShapeChainMismatch", "empty layer list");

    Model model;
    model.input_shape = input_shape;
    model.seed = seed;

    TensorShape cur = input_shape;
    for (std::size_t li = 0; li < specs.size(); ++li) {
        Layer layer;
        layer.spec = specs[li];
        layer.in_shape = cur;
        const std::string where = "layer " + std::to_string(li);

        if (layer.spec.kind == LayerKind::conv) {
            // in_channels 0 means "take whatever arrives"
            if (layer.spec.in_channels == 0) layer.spec.in_channels = cur.channels;
            if (layer.spec.in_channels != cur.channels)
                throw Error("ShapeChainMismatch", where + ": expects " +
                                                      std::to_string(layer.spec.in_channels) +
                                                      " channels, got " +
                                                      std::to_string(cur.channels));
            if (cur.height < layer.spec.kernel_h || cur.width < layer.spec.kernel_w)
                throw Error("ShapeChainMismatch", where + ": kernel larger than input");
            layer.out_shape = {layer.spec.out_channels,
                               conv_out_dim(cur.height, layer.spec.kernel_h, layer.spec.stride),
                               conv_out_dim(cur.width, layer.spec.kernel_w, layer.spec.stride)};
            layer.weights.resize(static_cast<std::size_t>(layer.spec.out_channels) *
                                 layer.spec.in_channels * layer.spec.kernel_h *
                                 layer.spec.kernel_w);
            layer.biases.assign(static_cast<std::size_t>(layer.spec.out_channels), 0.0);
        } else {
            if (layer.spec.in_width == 0) layer.spec.in_width = cur.flat();
            if (layer.spec.in_width != cur.flat())
                throw Error("ShapeChainMismatch",
                            where + ": expects width " + std::to_string(layer.spec.in_width) +
                                ", got " + std::to_string(cur.flat()));
            layer.out_shape = {layer.spec.out_width, 1, 1};
            layer.weights.resize(static_cast<std::size_t>(layer.spec.out_width) *
                                 layer.spec.in_width);
            layer.biases.assign(static_cast<std::size_t>(layer.spec.out_width), 0.0);
        }
        cur = layer.out_shape;
        model.layers.push_back(std::move(layer));
    }

    const Layer& head = model.layers.back();
    if (head.spec.activation != Activation::none || head.out_shape.flat() != kNumClasses)
        throw Error("ShapeChainMismatch",
                    "final layer must be linear with " + std::to_string(kNumClasses) + " outputs");

    Rng rng(seed);
    for (Layer& layer : model.layers) {
        const int fan_in = layer.spec.kind == LayerKind::conv
                               ? layer.spec.in_channels * layer.spec.kernel_h * layer.spec.kernel_w
                               : layer.spec.in_width;
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    }
    return model;
}

OptimizerState OptimizerState::zeros_like(const Model& model) {
    OptimizerState st;
    for (const Layer& layer : model.layers) {
        st.weight_velocity.emplace_back(layer.weights.size(), 0.0);
        st.bias_velocity.emplace_back(layer.biases.size(), 0.0);
    }
    return st;
}

std::vector<double> forward(const Model& model, const Batch& input) {
    if (input.shape.channels != model.input_shape.channels ||
        input.shape.height != model.input_shape.height ||
        input.shape.width != model.input_shape.width)
        throw Error("InputShapeMismatch", "batch shape does not match model input");

    std::vector<double> cur = input.data;
    std::vector<double> next;
    for (const Layer& layer : model.layers) {
        layer_forward(layer, input.batch, cur, next);
        cur.swap(next);
    }
    for (double& v : cur) v = 1.0 / (1.0 + std::exp(-v));
    return cur;
}

double bce_loss(const std::vector<double>& probabilities, const std::vector<LabelBits>& labels) {
    const std::size_t batch = labels.size();
    if (probabilities.size() != batch * kNumClasses)
        throw Error("ShapeMismatch", "probabilities/labels size mismatch");
    double total = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        for (int c = 0; c < kNumClasses; ++c) {
            const double p = clamp_prob(probabilities[b * kNumClasses + c]);
            const bool y = labels[b].test(static_cast<std::size_t>(c));
            total += y ? -std::log(p) : -std::log(1.0 - p);
        }
    }
    return total / (static_cast<double>(batch) * kNumClasses);
}

Gradients backward(const Model& model, const Batch& input, const std::vector<LabelBits>& labels,
                   double* loss_out) {
    if (static_cast<int>(labels.size()) != input.batch)
        throw Error("ShapeMismatch", "labels size does not match batch");

    const int batch = input.batch;
    const std::size_t n_layers = model.layers.size();

    // Forward, keeping each layer's (post-activation) output.
    std::vector<std::vector<double>> acts(n_layers + 1);
    acts[0] = input.data;
    for (std::size_t li = 0; li < n_layers; ++li)
        layer_forward(model.layers[li], batch, acts[li], acts[li + 1]);

    // d(loss)/d(logit) = (p - y) / (batch * classes) for logistic + BCE.
    std::vector<double> delta(acts[n_layers].size());
    const double scale = 1.0 / (static_cast<double>(batch) * kNumClasses);
    for (int b = 0; b < batch; ++b) {
        for (int c = 0; c < kNumClasses; ++c) {
            const std::size_t i = static_cast<std::size_t>(b) * kNumClasses + c;
            const double p = 1.0 / (1.0 + std::exp(-acts[n_layers][i]));
            const double y = labels[static_cast<std::size_t>(b)].test(static_cast<std::size_t>(c))
                                 ? 1.0
                                 : 0.0;
            delta[i] = (p - y) * scale;
        }
    }

    if (loss_out) {
        std::vector<double> probs(acts[n_layers].size());
        for (std::size_t i = 0; i < probs.size(); ++i)
            probs[i] = 1.0 / (1.0 + std::exp(-acts[n_layers][i]));
        *loss_out = bce_loss(probs, labels);
    }

    Gradients grads;
    grads.weights.resize(n_layers);
    grads.biases.resize(n_layers);

    for (std::size_t li = n_layers; li-- > 0;) {
        const Layer& layer = model.layers[li];
        const TensorShape& is = layer.in_shape;
        const TensorShape& os = layer.out_shape;
        grads.weights[li].assign(layer.weights.size(), 0.0);
        grads.biases[li].assign(layer.biases.size(), 0.0);

        // ReLU mask: the stored activation is already rectified, so gate on it.
        if (layer.spec.activation == Activation::relu) {
            const std::vector<double>& out = acts[li + 1];
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (out[i] <= 0.0) delta[i] = 0.0;
        }

        std::vector<double> delta_in(static_cast<std::size_t>(batch) * is.flat(), 0.0);
        const bool want_input_grad = li > 0;
        const bool want_param_grad = !layer.spec.frozen;

        if (layer.spec.kind == LayerKind::dense) {
            const int ni = is.flat();
            const int no = os.flat();
            for (int b = 0; b < batch; ++b) {
                const double* x = acts[li].data() + static_cast<std::size_t>(b) * ni;
                const double* dy = delta.data() + static_cast<std::size_t>(b) * no;
                double* dx = delta_in.data() + static_cast<std::size_t>(b) * ni;
                for (int o = 0; o < no; ++o) {
                    const double d = dy[o];
                    if (d == 0.0) continue;
                    const double* w = layer.weights.data() + static_cast<std::size_t>(o) * ni;
                    if (want_param_grad) {
                        double* gw = grads.weights[li].data() + static_cast<std::size_t>(o) * ni;
                        for (int i = 0; i < ni; ++i) gw[i] += d * x[i];
                        grads.biases[li][static_cast<std::size_t>(o)] += d;
                    }
                    if (want_input_grad)
                        for (int i = 0; i < ni; ++i) dx[i] += d * w[i];
                }
            }
        } else {
            const int kh = layer.spec.kernel_h, kw = layer.spec.kernel_w;
            const int stride = layer.spec.stride;
            for (int b = 0; b < batch; ++b) {
                const double* x = acts[li].data() + static_cast<std::size_t>(b) * is.flat();
                const double* dy = delta.data() + static_cast<std::size_t>(b) * os.flat();
                double* dx = delta_in.data() + static_cast<std::size_t>(b) * is.flat();
                for (int oc = 0; oc < os.channels; ++oc) {
                    const std::size_t wbase =
                        static_cast<std::size_t>(oc) * is.channels * kh * kw;
                    for (int oy = 0; oy < os.height; ++oy) {
                        for (int ox = 0; ox < os.width; ++ox) {
                            const double d =
                                dy[(static_cast<std::size_t>(oc) * os.height + oy) * os.width +
                                   ox];
                            if (d == 0.0) continue;
                            if (want_param_grad)
                                grads.biases[li][static_cast<std::size_t>(oc)] += d;
                            for (int ic = 0; ic < is.channels; ++ic) {
                                const std::size_t xc =
                                    static_cast<std::size_t>(ic) * is.height * is.width;
                                const std::size_t wc =
                                    wbase + static_cast<std::size_t>(ic) * kh * kw;
                                for (int ky = 0; ky < kh; ++ky) {
                                    const std::size_t xrow =
                                        xc + static_cast<std::size_t>(oy * stride + ky) *
                                                 is.width +
                                        ox * stride;
                                    const std::size_t wrow =
                                        wc + static_cast<std::size_t>(ky) * kw;
                                    for (int kx = 0; kx < kw; ++kx) {
                                        if (want_param_grad)
                                            grads.weights[li][wrow + kx] += d * x[xrow + kx];
                                        if (want_input_grad)
                                            dx[xrow + kx] += d * layer.weights[wrow + kx];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        delta.swap(delta_in);
    }
    return grads;
}

void sgdm_step(Model& model, OptimizerState& state, const Gradients& grads, double learning_rate,
               double momentum) {
    if (grads.weights.size() != model.layers.size() ||
        state.weight_velocity.size() != model.layers.size())
        throw Error("ShapeMismatch", "gradient/state layer count mismatch");

    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        Layer& layer = model.layers[li];
        if (layer.spec.frozen) continue;
        if (grads.weights[li].size() != layer.weights.size() ||
            grads.biases[li].size() != layer.biases.size())
            throw Error("ShapeMismatch", "gradient array size mismatch at layer " +
                                             std::to_string(li));
        auto& vw = state.weight_velocity[li];
        auto& vb = state.bias_velocity[li];
        for (std::size_t i = 0; i < layer.weights.size(); ++i) {
            vw[i] = momentum * vw[i] - learning_rate * grads.weights[li][i];
            layer.weights[i] += vw[i];
        }
        for (std::size_t i = 0; i < layer.biases.size(); ++i) {
            vb[i] = momentum * vb[i] - learning_rate * grads.biases[li][i];
            layer.biases[i] += vb[i];
        }
    }
}

void freeze_first(Model& model, int k) {
    if (k < 0 || k >= model.num_layers())
        throw Error("FreezeAll", "k must satisfy 0 <= k < " + std::to_string(model.num_layers()));
    for (int i = 0; i < model.num_layers(); ++i)
        model.layers[static_cast<std::size_t>(i)].spec.frozen = i < k;
}

} // namespace xrwave
