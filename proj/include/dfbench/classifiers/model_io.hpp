#pragma once

#include <filesystem>
#include <string>

#include "dfbench/classifiers/classifier.hpp"

namespace dfbench {

// Versioned little-endian blob: "DFM1" | u32 version | u8 kind | payload.
// Reals are stored as f64, so a reloaded model scores bit-identically.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const TrainedClassifier& model);
TrainedClassifier deserialize_model(const std::string& bytes);

void save_model(const TrainedClassifier& model, const std::filesystem::path& path);
TrainedClassifier load_model(const std::filesystem::path& path);

}  // namespace dfbench
