#pragma once

// Field files: one line of JSON
//   {"d":2,"half_widths":[..],"points":[..],"domain":"xi","layout":"uniform",
//    "sigma":1.5}
// followed by the row-major payload as little-endian IEEE-754 doubles,
// re/im interleaved. "layout":"chebyshev" stores samples at the M-point
// Gauss-Chebyshev nodes of [-r, r]^d (half_widths = r, points = M).
// For d = 1 a CSV form (x,re,im) is also read and written.

#include <bit>
#include <cstdint>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsynth/chebyshev.hpp"
#include "fsynth/error.hpp"
#include "fsynth/fourier_grid.hpp"

namespace fsynth {

enum class Layout { uniform, chebyshev };

/// Everything a field file can hold; exactly one of grid / nodes is
/// meaningful, selected by layout.
struct FieldFile {
  Domain domain = Domain::frequency;
  Layout layout = Layout::uniform;
  GridSpec grid;
  std::optional<NodeGrid> nodes;
  std::vector<Complex> values;
  std::optional<double> sigma;

  [[nodiscard]] Field field() const {
    require_layout(Layout::uniform, Domain::frequency);
    return Field{grid, values, sigma};
  }
  [[nodiscard]] SpatialField spatial() const {
    require_layout(Layout::uniform, Domain::physical);
    return SpatialField{grid, values, sigma};
  }
  [[nodiscard]] NodeSamples node_samples() const {
    require_layout(Layout::chebyshev, Domain::frequency);
    return NodeSamples{*nodes, values};
  }

 private:
  void require_layout(Layout l, Domain d) const {
    detail::require(layout == l && domain == d,
                    "field file has the wrong layout or domain for this use");
  }
};

[[nodiscard]] inline FieldFile to_file(const Field& f) {
  return {Domain::frequency, Layout::uniform, f.grid, std::nullopt, f.values,
          f.sigma};
}
[[nodiscard]] inline FieldFile to_file(const SpatialField& f) {
  return {Domain::physical, Layout::uniform, f.grid, std::nullopt, f.values,
          f.sigma};
}
[[nodiscard]] inline FieldFile to_file(const NodeSamples& s) {
  GridSpec g;
  g.half_width.assign(s.grid.d, s.grid.r);
  g.points.assign(s.grid.d, s.grid.M);
  return {Domain::frequency, Layout::chebyshev, g, s.grid, s.values,
          std::nullopt};
}

namespace detail {

inline void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

[[nodiscard]] inline double get_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

[[nodiscard]] inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

[[nodiscard]] inline std::string encode_field(const FieldFile& f) {
  nlohmann::ordered_json h;
  h["d"] = f.grid.dim();
  h["half_widths"] = f.grid.half_width;
  h["points"] = f.grid.points;
  h["domain"] = f.domain == Domain::frequency ? "xi" : "x";
  h["layout"] = f.layout == Layout::uniform ? "uniform" : "chebyshev";
  if (f.sigma) h["sigma"] = *f.sigma;
  std::string out = h.dump();
  out.push_back('\n');
  out.reserve(out.size() + 16 * f.values.size());
  for (const auto& v : f.values) {
    detail::put_le(out, v.real());
    detail::put_le(out, v.imag());
  }
  return out;
}

[[nodiscard]] inline FieldFile decode_field(const std::string& bytes) {
  const auto eol = bytes.find('\n');
  if (eol == std::string::npos) throw IoError("field file: missing header line");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(0, eol));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("field file: bad header: ") + e.what());
  }
  FieldFile f;
  try {
    const auto d = h.at("d").get<std::size_t>();
    f.grid.half_width = h.at("half_widths").get<std::vector<double>>();
    f.grid.points = h.at("points").get<std::vector<std::size_t>>();
    const auto domain = h.at("domain").get<std::string>();
    const auto layout = h.value("layout", std::string("uniform"));
    if (domain != "xi" && domain != "x") {
      throw IoError("field file: domain must be \"xi\" or \"x\"");
    }
    if (layout != "uniform" && layout != "chebyshev") {
      throw IoError("field file: layout must be \"uniform\" or \"chebyshev\"");
    }
    f.domain = domain == "xi" ? Domain::frequency : Domain::physical;
    f.layout = layout == "uniform" ? Layout::uniform : Layout::chebyshev;
    if (h.contains("sigma")) f.sigma = h.at("sigma").get<double>();
    if (f.grid.half_width.size() != d || f.grid.points.size() != d) {
      throw IoError("field file: header arrays do not match d");
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("field file: bad header: ") + e.what());
  }
  if (f.layout == Layout::chebyshev) {
    for (std::size_t j = 1; j < f.grid.dim(); ++j) {
      detail::require(f.grid.points[j] == f.grid.points[0] &&
                          f.grid.half_width[j] == f.grid.half_width[0],
                      "field file: chebyshev layout must be a cube");
    }
    f.nodes = cheb_nodes(f.grid.dim(), f.grid.points.at(0),
                         f.grid.half_width.at(0));
  } else {
    f.grid.validate();
  }
  const std::size_t count = shape_size(f.grid.points);
  const std::size_t payload = bytes.size() - eol - 1;
  if (payload != 16 * count) {
    throw IoError("field file: payload has " + std::to_string(payload) +
                  " bytes, expected " + std::to_string(16 * count));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + eol + 1;
  f.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    f.values[i] = {detail::get_le(p + 16 * i), detail::get_le(p + 16 * i + 8)};
  }
  return f;
}

/// d = 1 CSV with header "x,re,im" (or "xi,re,im"); uniform layout only.
[[nodiscard]] inline std::string encode_field_csv(const FieldFile& f) {
  detail::require(f.grid.dim() == 1 && f.layout == Layout::uniform,
                  "CSV field format is for uniform d = 1 fields only");
  std::string out = f.domain == Domain::frequency ? "xi,re,im\n" : "x,re,im\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out += detail::format_double(f.grid.coord(0, i)) + "," +
           detail::format_double(f.values[i].real()) + "," +
           detail::format_double(f.values[i].imag()) + "\n";
  }
  return out;
}

[[nodiscard]] inline FieldFile decode_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV field: empty file");
  FieldFile f;
  if (line == "xi,re,im") {
    f.domain = Domain::frequency;
  } else if (line == "x,re,im") {
    f.domain = Domain::physical;
  } else {
    throw IoError("CSV field: header must be x,re,im or xi,re,im");
  }
  std::vector<double> xs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    if (!(row >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw IoError("CSV field: bad row '" + line + "'");
    }
    xs.push_back(x);
    f.values.emplace_back(re, im);
  }
  if (xs.size() < 2) throw IoError("CSV field: need at least two rows");
  const double h = xs.back();
  if (std::abs(xs.front() + h) > 1e-12 * std::abs(h)) {
    throw IoError("CSV field: grid must be symmetric [-h, h]");
  }
  f.grid = GridSpec::cube(1, h, xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - f.grid.coord(0, i)) > 1e-9 * h) {
      throw IoError("CSV field: grid is not uniform");
    }
  }
  return f;
}

[[nodiscard]] inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

[[nodiscard]] inline bool is_csv_path(const std::filesystem::path& path) {
  return path.extension() == ".csv";
}

/// Reads a field file, choosing the format by extension (.csv or binary).
[[nodiscard]] inline FieldFile load_field(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  return is_csv_path(path) ? decode_field_csv(bytes) : decode_field(bytes);
}

inline void save_field(const std::filesystem::path& path, const FieldFile& f) {
  write_file(path, is_csv_path(path) ? encode_field_csv(f) : encode_field(f));
}

}  // namespace fsynth
