#include "xrwave/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "xrwave/image_io.hpp"
#include "xrwave/rng.hpp"

namespace xrwave {

namespace {

void append_tensor(const InputTensor& tensor, std::vector<double>& out) {
    for (const Image& ch : tensor.channels)
        out.insert(out.end(), ch.data.begin(), ch.data.end());
}

} // namespace

TrainResult train(Model model, const std::vector<ManifestEntry>& train_entries,
                  const std::vector<ManifestEntry>& validation_entries, const RunConfig& config,
                  bool verbose) {
    if (train_entries.empty()) throw Error("EmptySplit", "train split is empty");
    if (validation_entries.empty()) throw Error("EmptySplit", "validation split is empty");
    config.validate();

    const InputMode mode = config.input_mode();
    const WaveletFilter filter = WaveletFilter::by_name(config.filter);
    const std::filesystem::path image_dir = config.image_dir;
    const TensorShape shape = model.input_shape;

    // Raw images stay resident; augmentation and the wavelet transform are
    // re-applied per epoch.
    std::vector<Image> train_images;
    train_images.reserve(train_entries.size());
    for (const auto& e : train_entries) train_images.push_back(load_image(image_dir / e.path));

    // Validation inputs never change; preprocess once.
    std::vector<Batch> val_batches;
    std::vector<std::vector<LabelBits>> val_labels;
    {
        std::size_t done = 0;
        while (done < validation_entries.size()) {
            const std::size_t take =
                std::min<std::size_t>(static_cast<std::size_t>(config.hyper.batch_size),
                                      validation_entries.size() - done);
            Batch batch;
            batch.batch = static_cast<int>(take);
            batch.shape = shape;
            std::vector<LabelBits> labels;
            for (std::size_t b = 0; b < take; ++b) {
                const auto& e = validation_entries[done + b];
                const Image img = load_image(image_dir / e.path);
                append_tensor(build_input(img, mode, filter, config.target_w, config.target_h),
                              batch.data);
                labels.push_back(e.labels);
            }
            val_batches.push_back(std::move(batch));
            val_labels.push_back(std::move(labels));
            done += take;
        }
    }

    OptimizerState opt = OptimizerState::zeros_like(model);
    TrainResult result;

    const std::size_t n_train = train_entries.size();
    std::vector<std::size_t> order(n_train);

    for (int epoch = 0; epoch < config.hyper.epochs; ++epoch) {
        const double lr = config.hyper.learning_rate *
                          std::pow(config.lr_decay_factor, epoch / config.lr_decay_every);

        // Fresh shuffle each epoch, seeded from the run seed.
        for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
        Rng shuffle_rng(mix_seed(config.hyper.seed ^ (0xE90C5ULL + epoch)));
        for (std::size_t i = n_train; i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);

        double train_loss_sum = 0.0;
        std::size_t train_seen = 0;
        std::size_t pos = 0;
        while (pos < n_train) {
            const std::size_t take =
                std::min<std::size_t>(static_cast<std::size_t>(config.hyper.batch_size),
                                      n_train - pos);
            Batch batch;
            batch.batch = static_cast<int>(take);
            batch.shape = shape;
            std::vector<LabelBits> labels;
            for (std::size_t b = 0; b < take; ++b) {
                const std::size_t idx = order[pos + b];
                AugmentParams ap;
                ap.rotation_deg = config.aug_rotation_deg;
                ap.translate_frac = config.aug_translate_frac;
                ap.scale_frac = config.aug_scale_frac;
                ap.seed = mix_seed(config.aug_seed ^ (static_cast<std::uint64_t>(epoch) << 32) ^
                                   idx);
                const Image augmented = augment(train_images[idx], ap);
                append_tensor(
                    build_input(augmented, mode, filter, config.target_w, config.target_h),
                    batch.data);
                labels.push_back(train_entries[idx].labels);
            }

            double batch_loss = 0.0;
            const Gradients grads = backward(model, batch, labels, &batch_loss);
            sgdm_step(model, opt, grads, lr, config.hyper.momentum);
            train_loss_sum += batch_loss * static_cast<double>(take);
            train_seen += take;
            pos += take;
        }

        double val_loss_sum = 0.0;
        std::size_t val_seen = 0;
        for (std::size_t vb = 0; vb < val_batches.size(); ++vb) {
            const std::vector<double> probs = forward(model, val_batches[vb]);
            val_loss_sum += bce_loss(probs, val_labels[vb]) *
                            static_cast<double>(val_labels[vb].size());
            val_seen += val_labels[vb].size();
        }

        EpochRecord rec;
        rec.epoch = epoch + 1;
        rec.train_loss = train_loss_sum / static_cast<double>(train_seen);
        rec.val_loss = val_loss_sum / static_cast<double>(val_seen);
        result.history.push_back(rec);
        if (verbose)
            std::cout << "epoch " << rec.epoch << "  train_loss " << rec.train_loss
                      << "  val_loss " << rec.val_loss << std::endl;
    }

    result.model = std::move(model);
    return result;
}

void write_history_csv(const std::vector<EpochRecord>& history,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "epoch,train_loss,val_loss\n";
    char buf[96];
    for (const EpochRecord& rec : history) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", rec.epoch, rec.train_loss,
                      rec.val_loss);
        out << buf;
    }
}

} // namespace xrwave
