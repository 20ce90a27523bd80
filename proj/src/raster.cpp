#include <cpkit/raster.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <cpkit/prediction.hpp>

namespace cpkit {

using nlohmann::json;

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  auto p = stem;
  p += suffix;
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string encode_header(const GridHeader& h, const std::vector<std::string>* class_names) {
  json doc;
  doc["width"] = h.width;
  doc["height"] = h.height;
  doc["band_count"] = h.band_count;
  doc["band_names"] = h.band_names;
  doc["nodata"] = h.nodata;
  if (class_names) doc["class_names"] = *class_names;
  return doc.dump(2) + "\n";
}

GridHeader decode_header(const std::string& text, const std::filesystem::path& path) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::HeaderParseError, path.string() + ": " + what);
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  GridHeader h;
  try {
    h.width = doc.at("width").get<std::size_t>();
    h.height = doc.at("height").get<std::size_t>();
    h.band_count = doc.at("band_count").get<std::size_t>();
    h.band_names = doc.at("band_names").get<std::vector<std::string>>();
    h.nodata = doc.at("nodata").get<double>();
  } catch (const json::exception& e) {
    fail(e.what());
  }
  if (h.width == 0 || h.height == 0 || h.band_count == 0) {
    fail("width, height and band_count must be positive");
  }
  if (h.band_names.size() != h.band_count) fail("band_names length differs from band_count");
  return h;
}

template <typename T>
std::string encode_le(const std::vector<T>& values) {
  using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                  std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>;
  std::string bytes(values.size() * sizeof(T), '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<Bits>(values[i]);
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      bytes[i * sizeof(T) + b] = static_cast<char>((bits >> (8 * b)) & 0xFFU);
    }
  }
  return bytes;
}

template <typename T>
std::vector<T> decode_le(const std::string& bytes, std::size_t count,
                         const std::filesystem::path& path) {
  using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                  std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>;
  if (bytes.size() != count * sizeof(T)) {
    std::ostringstream msg;
    msg << path.string() << ": payload has " << bytes.size() << " bytes, expected "
        << count * sizeof(T);
    throw Error(ErrorCode::PayloadSizeMismatch, msg.str());
  }
  std::vector<T> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    Bits bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      bits |= static_cast<Bits>(static_cast<Bits>(static_cast<unsigned char>(bytes[i * sizeof(T) + b]))
                                << (8 * b));
    }
    values[i] = std::bit_cast<T>(bits);
  }
  return values;
}

}  // namespace

std::filesystem::path grid_stem(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".json" || ext == ".bin") {
    auto stem = path;
    stem.replace_extension();
    return stem;
  }
  return path;
}

ProbabilityGrid read_grid(const std::filesystem::path& path) {
  const auto stem = grid_stem(path);
  const auto header_path = with_suffix(stem, ".json");
  const auto payload_path = with_suffix(stem, ".bin");
  ProbabilityGrid grid;
  grid.header = decode_header(read_file(header_path), header_path);
  if (grid.header.band_count > kMaxBands) {
    std::ostringstream msg;
    msg << header_path.string() << ": " << grid.header.band_count << " bands, at most "
        << kMaxBands << " supported";
    throw Error(ErrorCode::UnsupportedBandCount, msg.str());
  }
  grid.data = decode_le<float>(read_file(payload_path),
                               grid.header.pixel_count() * grid.header.band_count, payload_path);
  return grid;
}

void write_grid(const ProbabilityGrid& grid, const std::filesystem::path& path) {
  const auto& h = grid.header;
  if (h.band_names.size() != h.band_count ||
      grid.data.size() != h.pixel_count() * h.band_count) {
    throw Error(ErrorCode::PayloadSizeMismatch, "grid data does not match its header");
  }
  if (h.band_count > kMaxBands) {
    throw Error(ErrorCode::UnsupportedBandCount, "at most 16 bands are supported");
  }
  const auto stem = grid_stem(path);
  write_file(with_suffix(stem, ".json"), encode_header(h, nullptr));
  write_file(with_suffix(stem, ".bin"), encode_le(grid.data));
}

namespace {

struct StripeCounts {
  std::size_t nodata = 0;
  std::size_t invalid = 0;
};

StripeCounts apply_rows(const CalibratedClassifier& model, const ProbabilityGrid& grid,
                        double tolerance, std::size_t row_begin, std::size_t row_end,
                        UncertaintyGrids& out) {
  const auto& h = grid.header;
  const auto bands = h.band_count;
  const auto nodata = static_cast<float>(h.nodata);
  std::vector<double> probs(bands);
  StripeCounts counts;
  for (std::size_t pixel = row_begin * h.width; pixel < row_end * h.width; ++pixel) {
    bool is_nodata = false;
    bool valid = true;
    double sum = 0.0;
    for (std::size_t b = 0; b < bands; ++b) {
      const float v = grid.at(b, pixel);
      if (v == nodata) {
        is_nodata = true;
        break;
      }
      if (!(v >= 0.0F && v <= 1.0F)) valid = false;
      probs[b] = static_cast<double>(v);
      sum += probs[b];
    }
    if (!is_nodata && valid && std::abs(sum - 1.0) > tolerance) valid = false;
    if (is_nodata || !valid) {
      out.set_length[pixel] = kNodataLength;
      out.membership[pixel] = 0;
      ++(is_nodata ? counts.nodata : counts.invalid);
      continue;
    }
    const auto set = predict_set_unchecked(model, probs);
    out.set_length[pixel] = static_cast<std::uint8_t>(set.length);
    out.membership[pixel] = static_cast<std::uint16_t>(set.membership);
  }
  return counts;
}

}  // namespace

UncertaintyGrids apply_classifier_to_grid(const CalibratedClassifier& model,
                                          const ProbabilityGrid& grid, ApplyOptions options) {
  const auto& h = grid.header;
  if (h.band_count > kMaxBands) {
    throw Error(ErrorCode::UnsupportedBandCount, "at most 16 bands are supported");
  }
  if (h.band_count != model.class_count()) {
    std::ostringstream msg;
    msg << "grid has " << h.band_count << " bands, model has " << model.class_count()
        << " classes";
    throw Error(ErrorCode::ClassMismatch, msg.str());
  }
  for (std::size_t b = 0; b < h.band_count; ++b) {
    if (h.band_names[b] != model.class_names[b]) {
      throw Error(ErrorCode::ClassMismatch, "band " + std::to_string(b) + " is '" +
                                                h.band_names[b] + "', model expects '" +
                                                model.class_names[b] + "'");
    }
  }
  if (grid.data.size() != h.pixel_count() * h.band_count) {
    throw Error(ErrorCode::PayloadSizeMismatch, "grid data does not match its header");
  }

  UncertaintyGrids out;
  out.width = h.width;
  out.height = h.height;
  out.class_names = model.class_names;
  out.set_length.assign(h.pixel_count(), 0);
  out.membership.assign(h.pixel_count(), 0);

  const std::size_t workers =
      std::clamp<std::size_t>(options.workers == 0 ? 1 : options.workers, 1, h.height);
  std::vector<StripeCounts> counts(workers);
  if (workers == 1) {
    counts[0] = apply_rows(model, grid, options.tolerance, 0, h.height, out);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = h.height * w / workers;
      const std::size_t end = h.height * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        counts[w] = apply_rows(model, grid, options.tolerance, begin, end, out);
      });
    }
  }
  for (const auto& c : counts) {
    out.nodata_pixels += c.nodata;
    out.invalid_pixels += c.invalid;
  }
  return out;
}

GridSummary summarize_grid(const UncertaintyGrids& grids) {
  const auto k = grids.class_names.size();
  GridSummary summary;
  summary.class_inclusion.assign(k, 0.0);
  std::uint64_t total_length = 0;
  std::size_t empty = 0;
  std::size_t full = 0;
  std::vector<std::size_t> included(k, 0);
  for (std::size_t i = 0; i < grids.pixel_count(); ++i) {
    if (grids.is_nodata(i)) {
      ++summary.nodata_pixels;
      continue;
    }
    ++summary.valid_pixels;
    const auto len = grids.set_length[i];
    total_length += len;
    empty += len == 0 ? 1 : 0;
    full += len == k ? 1 : 0;
    for (std::size_t c = 0; c < k; ++c) included[c] += (grids.membership[i] >> c) & 1U;
  }
  if (summary.valid_pixels == 0) {
    throw Error(ErrorCode::AllNodata, "grid contains no valid pixels");
  }
  const auto n = static_cast<double>(summary.valid_pixels);
  summary.efficiency.n = summary.valid_pixels;
  summary.efficiency.mean_set_size = static_cast<double>(total_length) / n;
  summary.efficiency.empty_set_fraction = static_cast<double>(empty) / n;
  summary.efficiency.full_set_fraction = static_cast<double>(full) / n;
  for (std::size_t c = 0; c < k; ++c) {
    summary.class_inclusion[c] = static_cast<double>(included[c]) / n;
  }
  return summary;
}

void write_uncertainty_grids(const UncertaintyGrids& grids, const std::filesystem::path& stem) {
  GridHeader h;
  h.width = grids.width;
  h.height = grids.height;
  h.band_count = 1;
  h.band_names = {"set_length"};
  h.nodata = kNodataLength;
  write_file(with_suffix(stem, ".length.json"), encode_header(h, nullptr));
  write_file(with_suffix(stem, ".length.bin"), encode_le(grids.set_length));

  h.band_names = {"membership"};
  h.nodata = 0;
  write_file(with_suffix(stem, ".membership.json"), encode_header(h, &grids.class_names));
  write_file(with_suffix(stem, ".membership.bin"), encode_le(grids.membership));
}

UncertaintyGrids read_uncertainty_grids(const std::filesystem::path& stem) {
  const auto length_header = with_suffix(stem, ".length.json");
  const auto membership_header = with_suffix(stem, ".membership.json");
  const auto lh = decode_header(read_file(length_header), length_header);
  const auto mh_text = read_file(membership_header);
  const auto mh = decode_header(mh_text, membership_header);
  if (lh.width != mh.width || lh.height != mh.height) {
    throw Error(ErrorCode::HeaderParseError, "length and membership planes differ in size");
  }
  UncertaintyGrids grids;
  grids.width = lh.width;
  grids.height = lh.height;
  try {
    grids.class_names = json::parse(mh_text).at("class_names").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::HeaderParseError, membership_header.string() + ": " + e.what());
  }
  const auto n = lh.pixel_count();
  grids.set_length = decode_le<std::uint8_t>(read_file(with_suffix(stem, ".length.bin")), n,
                                             with_suffix(stem, ".length.bin"));
  grids.membership = decode_le<std::uint16_t>(read_file(with_suffix(stem, ".membership.bin")), n,
                                              with_suffix(stem, ".membership.bin"));
  for (std::size_t i = 0; i < n; ++i) grids.nodata_pixels += grids.is_nodata(i) ? 1 : 0;
  return grids;
}

}  // namespace cpkit
