#ifndef XRWAVE_TRAINER_HPP
#define XRWAVE_TRAINER_HPP

#include <filesystem>
#include <vector>

#include "xrwave/config.hpp"
#include "xrwave/dataset.hpp"
#include "xrwave/model.hpp"

namespace xrwave {

struct EpochRecord {
    int epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    Model model;
    std::vector<EpochRecord> history;
};

// Mini-batch SGDM loop: a fresh seeded shuffle per epoch, augmentation on
// training images only, validation loss once per epoch on un-augmented data.
// History gets exactly config.hyper.epochs records. Deterministic given the
// config seeds. Throws Error("EmptySplit") on an empty train or validation
// split.
TrainResult train(Model model, const std::vector<ManifestEntry>& train_entries,
                  const std::vector<ManifestEntry>& validation_entries, const RunConfig& config,
                  bool verbose = false);

// CSV with columns epoch, train_loss, val_loss.
void write_history_csv(const std::vector<EpochRecord>& history,
                       const std::filesystem::path& path);

} // namespace xrwave

#endif
