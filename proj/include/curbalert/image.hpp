#pragma once

// 8-bit single-channel rasters and binary PGM (P5) I/O.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "curbalert/errors.hpp"

namespace curbalert {

/// Row-major 8-bit raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw DimensionMismatch("image dimensions must be nonnegative");
  }

  bool empty() const { return pixels.empty(); }
  bool contains(int col, int row) const { return col >= 0 && row >= 0 && col < width && row < height; }

  std::uint8_t at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t& at(int col, int row) { return pixels[static_cast<std::size_t>(row) * width + col]; }

  bool operator==(const GrayImage&) const = default;
};

namespace detail {

inline void skip_pgm_space(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_pgm_int(std::istream& in, const char* field) {
  skip_pgm_space(in);
  int value = -1;
  if (!(in >> value) || value < 0) throw PgmError(std::string("malformed PGM header field: ") + field);
  return value;
}

}  // namespace detail

inline GrayImage decode_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw PgmError("not a binary PGM (P5)");
  const int w = detail::read_pgm_int(in, "width");
  const int h = detail::read_pgm_int(in, "height");
  const int maxval = detail::read_pgm_int(in, "maxval");
  if (maxval < 1 || maxval > 255) throw PgmError("PGM maxval must be in [1, 255]");
  if (w == 0 || h == 0) throw PgmError("PGM has zero size");
  // Exactly one whitespace byte separates the header from the raster.
  int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) throw PgmError("malformed PGM header terminator");
  GrayImage img(w, h);
  if (!in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size())))
    throw PgmError("truncated PGM raster");
  return img;
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_pgm(bytes);
  } catch (const PgmError& e) {
    throw PgmError(path.string() + ": " + e.what());
  }
}

inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(img.pixels.begin(), img.pixels.end());
  return out;
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pgm(img);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace curbalert
