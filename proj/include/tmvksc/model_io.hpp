#pragma once

#include <string>

#include "tmvksc/model.hpp"

namespace tmvksc {

// Single-file archive: an 8-byte little-endian JSON length, the JSON metadata
// document (kernel specs, fusion weights, codebooks, array shapes), then the
// numeric arrays as little-endian IEEE-754 float64, row-major, concatenated in
// metadata order. Round trips are bit-exact.
inline constexpr int kModelFormatVersion = 1;

void save_model(const Model& model, const std::string& path);

// Throws FormatVersionError on a version mismatch and CorruptModelError on
// truncated or inconsistent archives.
Model load_model(const std::string& path);

}  // namespace tmvksc
