#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pba/patch_grid.hpp"

namespace pba {

enum class PgmFormat { Plain, Binary };  // P2, P5

/// Parses an 8-bit PGM (P2 or P5, maxval <= 255). Pixel values are kept as
/// stored, not rescaled by maxval. Throws Error(Io) on malformed input.
Image decode_pgm(std::string_view bytes);

/// Encodes with maxval 255; pixels are rounded half-to-even and clamped to
/// [0, 255].
std::string encode_pgm(const Image& img, PgmFormat format = PgmFormat::Binary);

Image read_pgm(const std::filesystem::path& path);
void write_pgm(const Image& img, const std::filesystem::path& path, PgmFormat format = PgmFormat::Binary);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pba
