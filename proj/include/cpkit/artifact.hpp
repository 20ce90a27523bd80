#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <cpkit/calibration.hpp>

namespace cpkit {

using ModelArtifact = std::variant<CalibratedClassifier, CalibratedRegressor>;

inline constexpr int kArtifactSchemaVersion = 1;

// JSON model file. Infinite values are written as the strings "inf" / "-inf";
// fields that do not apply to a method are null.
std::string encode_artifact(const ModelArtifact& model);
ModelArtifact decode_artifact(std::string_view text);

void save_artifact(const ModelArtifact& model, const std::filesystem::path& path);
ModelArtifact load_artifact(const std::filesystem::path& path);

}  // namespace cpkit
