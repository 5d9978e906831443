#include "qconvex/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace qconvex {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
    throw IoError("csv line " + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  return v;
}

std::size_t parse_size(std::string_view token, const std::string& what) {
  token = trim(token);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || v == 0)
    throw IoError(what + ": bad dimension '" + std::string(token) + "'");
  return v;
}

// Cursor over a PGM header: whitespace separated tokens, '#' comments.
class PgmHeader {
 public:
  explicit PgmHeader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw IoError("pgm: truncated header");
    return bytes_.substr(start, pos_ - start);
  }

  std::size_t number(const char* what) {
    const std::string_view t = token();
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      throw IoError(std::string("pgm: bad ") + what + " '" + std::string(t) + "'");
    return v;
  }

  // The single whitespace byte that ends a binary header.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size()) throw IoError("pgm: missing raster");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

FieldFormat parse_format(std::string_view text) {
  if (text == "csv") return FieldFormat::Csv;
  if (text == "pgm") return FieldFormat::Pgm;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

std::optional<FieldFormat> format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".csv") return FieldFormat::Csv;
  if (ext == ".pgm") return FieldFormat::Pgm;
  return std::nullopt;
}

ScalarField parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!trim(line).empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty()) throw IoError("csv: empty file");

  const std::string_view head = lines[0];
  const std::size_t comma = head.find(',');
  if (comma == std::string_view::npos) throw IoError("csv: header must be 'H,W'");
  const std::size_t h = parse_size(head.substr(0, comma), "csv header");
  const std::size_t w = parse_size(head.substr(comma + 1), "csv header");
  if (lines.size() != h + 1)
    throw IoError("csv: expected " + std::to_string(h) + " rows, found " +
                  std::to_string(lines.size() - 1));

  std::vector<double> data;
  data.reserve(h * w);
  for (std::size_t r = 1; r <= h; ++r) {
    std::string_view row = lines[r];
    std::size_t cols = 0;
    while (true) {
      const std::size_t next = row.find(',');
      data.push_back(parse_double(row.substr(0, next), r + 1));
      ++cols;
      if (next == std::string_view::npos) break;
      row.remove_prefix(next + 1);
    }
    if (cols != w)
      throw IoError("csv line " + std::to_string(r + 1) + ": expected " + std::to_string(w) +
                    " values, found " + std::to_string(cols));
  }
  return ScalarField(h, w, std::move(data));
}

std::string to_csv(const ScalarField& field) {
  std::string out = std::to_string(field.height()) + "," + std::to_string(field.width()) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < field.height(); ++i) {
    for (std::size_t j = 0; j < field.width(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", field(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

ScalarField parse_pgm(std::string_view bytes) {
  PgmHeader header(bytes);
  const std::string_view magic = header.token();
  if (magic != "P2" && magic != "P5") throw IoError("pgm: unsupported magic '" + std::string(magic) + "'");
  const std::size_t w = header.number("width");
  const std::size_t h = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (w == 0 || h == 0) throw IoError("pgm: zero dimension");
  if (maxval == 0 || maxval > 255) throw IoError("pgm: maxval must be in [1, 255]");

  std::vector<double> data(h * w);
  const double scale = static_cast<double>(maxval);
  if (magic == "P5") {
    const std::size_t start = header.raster_start();
    if (bytes.size() < start + h * w) throw IoError("pgm: truncated raster");
    for (std::size_t k = 0; k < h * w; ++k) {
      const auto v = static_cast<unsigned char>(bytes[start + k]);
      if (v > maxval) throw IoError("pgm: sample exceeds maxval");
      data[k] = static_cast<double>(v) / scale;
    }
  } else {
    for (std::size_t k = 0; k < h * w; ++k) {
      std::size_t v = 0;
      try {
        v = header.number("sample");
      } catch (const IoError&) {
        throw IoError("pgm: truncated raster");
      }
      if (v > maxval) throw IoError("pgm: sample exceeds maxval");
      data[k] = static_cast<double>(v) / scale;
    }
  }
  return ScalarField(h, w, std::move(data));
}

std::string to_pgm(const ScalarField& field) {
  std::string out = "P5\n" + std::to_string(field.width()) + " " + std::to_string(field.height()) +
                    "\n255\n";
  out.reserve(out.size() + field.size());
  for (double v : field.values()) {
    const double q = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(q)));
  }
  return out;
}

ScalarField read_field(const std::filesystem::path& path, std::optional<FieldFormat> format) {
  if (!format) format = format_from_path(path);
  if (!format) throw IoError("cannot infer format of '" + path.string() + "'; pass --format");
  const std::string bytes = read_all(path);
  try {
    return *format == FieldFormat::Csv ? parse_csv(bytes) : parse_pgm(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_field(const std::filesystem::path& path, const ScalarField& field,
                 std::optional<FieldFormat> format) {
  if (!format) format = format_from_path(path);
  if (!format) format = FieldFormat::Csv;
  write_text(path, *format == FieldFormat::Csv ? to_csv(field) : to_pgm(field));
}

}  // namespace qconvex
