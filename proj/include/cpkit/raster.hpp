#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <cpkit/calibration.hpp>
#include <cpkit/evaluation.hpp>

namespace cpkit {

inline constexpr std::size_t kMaxBands = 16;
inline constexpr std::uint8_t kNodataLength = 255;

// On-disk grid: <stem>.json header {width, height, band_count, band_names,
// nodata} plus <stem>.bin payload of little-endian binary32 values,
// band-sequential, each band row-major.
struct GridHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t band_count = 0;
  std::vector<std::string> band_names;
  double nodata = -9999.0;

  std::size_t pixel_count() const noexcept { return width * height; }
  friend bool operator==(const GridHeader&, const GridHeader&) = default;
};

struct ProbabilityGrid {
  GridHeader header;
  std::vector<float> data;  // band-sequential

  float at(std::size_t band, std::size_t pixel) const {
    return data[band * header.pixel_count() + pixel];
  }
  friend bool operator==(const ProbabilityGrid&, const ProbabilityGrid&) = default;
};

/// Per-pixel prediction sets. Nodata pixels carry length 255 and membership 0.
struct UncertaintyGrids {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::string> class_names;
  std::vector<std::uint8_t> set_length;
  std::vector<std::uint16_t> membership;
  std::size_t nodata_pixels = 0;   // sentinel in at least one input band
  std::size_t invalid_pixels = 0;  // failed probability validation

  std::size_t pixel_count() const noexcept { return width * height; }
  bool is_nodata(std::size_t pixel) const { return set_length[pixel] == kNodataLength; }
  friend bool operator==(const UncertaintyGrids&, const UncertaintyGrids&) = default;
};

struct ApplyOptions {
  unsigned workers = 1;
  double tolerance = kDefaultSumTolerance;
};

struct GridSummary {
  EfficiencyReport efficiency;
  std::size_t valid_pixels = 0;
  std::size_t nodata_pixels = 0;
  std::vector<double> class_inclusion;  // fraction of valid pixels including each class
};

/// Strips a trailing .json or .bin so either file (or the bare stem) names the grid.
std::filesystem::path grid_stem(const std::filesystem::path& path);

ProbabilityGrid read_grid(const std::filesystem::path& path);
void write_grid(const ProbabilityGrid& grid, const std::filesystem::path& path);

UncertaintyGrids apply_classifier_to_grid(const CalibratedClassifier& model,
                                          const ProbabilityGrid& grid, ApplyOptions options = {});

GridSummary summarize_grid(const UncertaintyGrids& grids);

/// Writes <stem>.length.{json,bin} (uint8) and <stem>.membership.{json,bin} (uint16 LE).
void write_uncertainty_grids(const UncertaintyGrids& grids, const std::filesystem::path& stem);
UncertaintyGrids read_uncertainty_grids(const std::filesystem::path& stem);

}  // namespace cpkit
