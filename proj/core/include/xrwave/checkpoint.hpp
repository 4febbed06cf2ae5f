#ifndef XRWAVE_CHECKPOINT_HPP
#define XRWAVE_CHECKPOINT_HPP

#include <filesystem>

#include "xrwave/model.hpp"

namespace xrwave {

// Flat binary checkpoint. Layout: 8-byte magic "XRWCHKPT", then every numeric
// value as a little-endian IEEE-754 double, in order: format version, input
// shape (channels, height, width), layer count, and per layer: kind tag
// (0 conv / 1 dense), shape integers (conv: kh, kw, in_ch, out_ch, stride;
// dense: in, out), activation tag (0 none / 1 relu), frozen flag, weight
// array, bias array.
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

} // namespace xrwave

#endif
