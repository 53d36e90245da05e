#pragma once

#include <filesystem>
#include <string>

#include "spectral_transfer/baselines.hpp"
#include "spectral_transfer/gctpls.hpp"

namespace spectral_transfer::model_io {

/// Versioned JSON serialization of fitted models and transfer maps. Doubles
/// are written in shortest round-trip form, so loading reproduces every
/// value bit-exactly. A loaded model predicts and reconstructs; the
/// standards deflation matrices are not persisted, only their norms.
std::string model_to_json(const gctpls::LatentModel& model);
gctpls::LatentModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const gctpls::LatentModel& model);
gctpls::LatentModel load_model(const std::filesystem::path& path);

std::string transfer_map_to_json(const baselines::TransferMap& map);
baselines::TransferMap transfer_map_from_json(const std::string& text);
void save_transfer_map(const std::filesystem::path& path, const baselines::TransferMap& map);
baselines::TransferMap load_transfer_map(const std::filesystem::path& path);

}  // namespace spectral_transfer::model_io
