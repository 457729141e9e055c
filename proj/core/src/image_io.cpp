#include "pba/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pba/error.hpp"

namespace pba {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : s_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t next_uint() {
    skip_space_and_comments();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == s_.data() + pos_) throw Error(ErrorCode::Io, "PGM: expected integer");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string_view take(std::size_t n) {
    if (pos_ + n > s_.size()) throw Error(ErrorCode::Io, "PGM: truncated");
    auto out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos_ = 0;

 private:
  std::string_view s_;
};

}  // namespace

Image decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw Error(ErrorCode::Io, "PGM: expected P2 or P5 magic");
  const bool binary = bytes[1] == '5';
  PgmReader r(bytes);
  r.pos_ = 2;
  const std::size_t w = r.next_uint();
  const std::size_t h = r.next_uint();
  const std::size_t maxval = r.next_uint();
  if (w == 0 || h == 0) throw Error(ErrorCode::Io, "PGM: zero dimension");
  if (maxval == 0 || maxval > 255) throw Error(ErrorCode::Io, "PGM: only 8-bit maxval (1..255) supported");

  std::vector<double> px(w * h);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    auto sep = r.take(1);
    if (!std::isspace(static_cast<unsigned char>(sep[0]))) throw Error(ErrorCode::Io, "PGM: bad header end");
    auto raster = r.take(w * h);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const auto v = static_cast<unsigned char>(raster[i]);
      if (v > maxval) throw Error(ErrorCode::Io, "PGM: sample exceeds maxval");
      px[i] = v;
    }
  } else {
    for (auto& v : px) {
      const std::size_t s = r.next_uint();
      if (s > maxval) throw Error(ErrorCode::Io, "PGM: sample exceeds maxval");
      v = static_cast<double>(s);
    }
  }
  return Image(w, h, std::move(px));
}

std::string encode_pgm(const Image& img, PgmFormat format) {
  std::ostringstream out;
  out << (format == PgmFormat::Binary ? "P5" : "P2") << "\n" << img.width() << " " << img.height() << "\n255\n";
  std::string s = out.str();
  const auto& px = img.pixels();
  auto q = [](double v) { return static_cast<unsigned>(std::clamp(std::nearbyint(v), 0.0, 255.0)); };
  if (format == PgmFormat::Binary) {
    s.reserve(s.size() + px.size());
    for (double v : px) s.push_back(static_cast<char>(q(v)));
  } else {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        if (x) s.push_back(' ');
        s += std::to_string(q(img.at(x, y)));
      }
      s.push_back('\n');
    }
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Image read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

void write_pgm(const Image& img, const std::filesystem::path& path, PgmFormat format) {
  write_file(path, encode_pgm(img, format));
}

}  // namespace pba
