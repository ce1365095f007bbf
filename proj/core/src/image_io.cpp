#include "dtvar/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace dtvar::io {
namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

// Cursor over a netpbm file: header tokens with '#' comments, then payload.
class PnmReader {
 public:
  explicit PnmReader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') throw Error(Errc::bad_format, "not a netpbm file");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  long next_int() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw Error(Errc::bad_format, "expected integer in netpbm header");
    return std::stol(bytes_.substr(start, pos_ - start));
  }

  // Plain PBM packs digits without separators.
  int next_bit() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(Errc::bad_format, "truncated P1 data");
    char ch = bytes_[pos_++];
    if (ch != '0' && ch != '1') throw Error(Errc::bad_format, "bad P1 digit");
    return ch == '1';
  }

  // Exactly one whitespace byte separates the header from raw payloads.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::bad_format, "missing header terminator");
    }
    ++pos_;
  }

  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) throw Error(Errc::bad_format, "truncated netpbm payload");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

void check_dims(long h, long w) {
  if (h < 1 || w < 1 || h > (1L << 20) || w > (1L << 20)) {
    throw Error(Errc::bad_format, "implausible image dimensions");
  }
}

void check_maxval(long maxval) {
  if (maxval < 1 || maxval > 65535) throw Error(Errc::bad_format, "maxval out of range");
}

int raw_sample(PnmReader& rd, long maxval) {
  if (maxval < 256) return rd.byte();
  int hi = rd.byte();
  return (hi << 8) | rd.byte();
}

std::string pnm_header(const char* magic, int width, int height, int maxval) {
  std::string h = std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n";
  if (maxval > 0) h += std::to_string(maxval) + "\n";
  return h;
}

void put_sample(std::string& out, int v, int maxval) {
  if (maxval > 255) out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[at + i])) << (8 * i);
  return v;
}

bool has_extension(const std::filesystem::path& p, const char* ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  PnmReader rd(read_all(path));
  std::string magic = rd.magic();
  if (magic != "P2" && magic != "P5") throw Error(Errc::bad_format, path.string() + " is not a PGM");
  long w = rd.next_int();
  long h = rd.next_int();
  check_dims(h, w);
  long maxval = rd.next_int();
  check_maxval(maxval);
  GrayImage img{ScalarGrid(static_cast<int>(h), static_cast<int>(w)), static_cast<int>(maxval)};
  if (magic == "P5") rd.end_header();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      long v = magic == "P2" ? rd.next_int() : raw_sample(rd, maxval);
      img.samples(r, c) = static_cast<double>(std::min(v, maxval));
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const ScalarGrid& samples, int maxval) {
  if (maxval < 1 || maxval > 65535) throw Error(Errc::invalid_argument, "maxval out of range");
  std::string out = pnm_header("P5", samples.width(), samples.height(), maxval);
  for (double v : samples.values()) {
    double clamped = std::isfinite(v) ? std::clamp(v, 0.0, static_cast<double>(maxval)) : 0.0;
    put_sample(out, static_cast<int>(std::lround(clamped)), maxval);
  }
  write_all(path, out);
}

void write_pgm_unit(const std::filesystem::path& path, const ScalarGrid& unit_values) {
  ScalarGrid scaled(unit_values.height(), unit_values.width());
  std::transform(unit_values.values().begin(), unit_values.values().end(), scaled.values().begin(),
                 [](double v) { return 255.0 * v; });
  write_pgm(path, scaled, 255);
}

MultiChannelImage read_ppm(const std::filesystem::path& path) {
  PnmReader rd(read_all(path));
  if (rd.magic() != "P6") throw Error(Errc::bad_format, path.string() + " is not a P6 PPM");
  long w = rd.next_int();
  long h = rd.next_int();
  check_dims(h, w);
  long maxval = rd.next_int();
  check_maxval(maxval);
  rd.end_header();
  MultiChannelImage img(static_cast<int>(h), static_cast<int>(w), 3);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        img(ch, r, c) = std::min<double>(raw_sample(rd, maxval), maxval) / static_cast<double>(maxval);
      }
    }
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const MultiChannelImage& rgb) {
  if (rgb.channels() < 3) throw Error(Errc::invalid_argument, "PPM needs three channels");
  std::string out = pnm_header("P6", rgb.width(), rgb.height(), 255);
  for (int r = 0; r < rgb.height(); ++r) {
    for (int c = 0; c < rgb.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double v = rgb(ch, r, c);
        v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        put_sample(out, static_cast<int>(std::lround(255.0 * v)), 255);
      }
    }
  }
  write_all(path, out);
}

BinaryMask read_mask(const std::filesystem::path& path) {
  PnmReader rd(read_all(path));
  std::string magic = rd.magic();
  if (magic == "P2" || magic == "P5") {
    GrayImage g = read_pgm(path);
    BinaryMask m(g.samples.height(), g.samples.width(), 0);
    std::transform(g.samples.values().begin(), g.samples.values().end(), m.values().begin(),
                   [](double v) { return v > 0.0 ? 1 : 0; });
    return m;
  }
  if (magic != "P1" && magic != "P4") throw Error(Errc::bad_format, path.string() + " is not a PBM/PGM");
  long w = rd.next_int();
  long h = rd.next_int();
  check_dims(h, w);
  BinaryMask m(static_cast<int>(h), static_cast<int>(w), 0);
  if (magic == "P1") {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) m(r, c) = static_cast<std::uint8_t>(rd.next_bit());
    return m;
  }
  rd.end_header();
  for (int r = 0; r < h; ++r) {
    std::uint8_t current = 0;
    for (int c = 0; c < w; ++c) {
      if (c % 8 == 0) current = rd.byte();
      m(r, c) = (current >> (7 - c % 8)) & 1;
    }
  }
  return m;
}

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::string out = pnm_header("P4", mask.width(), mask.height(), 0);
  for (int r = 0; r < mask.height(); ++r) {
    std::uint8_t current = 0;
    for (int c = 0; c < mask.width(); ++c) {
      if (mask(r, c)) current |= static_cast<std::uint8_t>(1u << (7 - c % 8));
      if (c % 8 == 7 || c + 1 == mask.width()) {
        out.push_back(static_cast<char>(current));
        current = 0;
      }
    }
  }
  write_all(path, out);
}

void write_dtvg(const std::filesystem::path& path, const MultiChannelImage& image) {
  std::string out = "DTVG";
  put_u32(out, static_cast<std::uint32_t>(image.height()));
  put_u32(out, static_cast<std::uint32_t>(image.width()));
  put_u32(out, static_cast<std::uint32_t>(image.channels()));
  out.reserve(out.size() + image.values().size() * 8);
  for (double v : image.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
  write_all(path, out);
}

void write_dtvg(const std::filesystem::path& path, const ScalarGrid& grid) {
  std::array<ScalarGrid, 1> planes{grid};
  write_dtvg(path, MultiChannelImage::from_channels(planes));
}

MultiChannelImage read_dtvg(const std::filesystem::path& path) {
  std::string in = read_all(path);
  if (in.size() < 16 || in.compare(0, 4, "DTVG") != 0) {
    throw Error(Errc::bad_format, path.string() + " is not a DTVG file");
  }
  std::uint32_t h = get_u32(in, 4);
  std::uint32_t w = get_u32(in, 8);
  std::uint32_t ch = get_u32(in, 12);
  check_dims(h, w);
  if (ch < 1 || ch > 1024) throw Error(Errc::bad_format, "implausible channel count");
  std::size_t n = static_cast<std::size_t>(h) * w * ch;
  if (in.size() != 16 + 8 * n) throw Error(Errc::bad_format, "DTVG payload size mismatch");
  MultiChannelImage img(static_cast<int>(h), static_cast<int>(w), static_cast<int>(ch));
  auto dst = img.values();
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(in[16 + 8 * k + i])) << (8 * i);
    }
    dst[k] = std::bit_cast<double>(bits);
  }
  return img;
}

ScalarGrid read_scalar(const std::filesystem::path& path) {
  if (has_extension(path, ".pgm")) {
    GrayImage g = read_pgm(path);
    for (double& v : g.samples.values()) v /= g.maxval;
    return g.samples;
  }
  MultiChannelImage img = read_dtvg(path);
  if (img.channels() != 1) throw Error(Errc::bad_format, path.string() + " must have one channel");
  return img.channel(0);
}

MultiChannelImage read_image(const std::filesystem::path& path) {
  if (has_extension(path, ".ppm")) return read_ppm(path);
  if (has_extension(path, ".pgm")) {
    std::array<ScalarGrid, 1> planes{read_scalar(path)};
    return MultiChannelImage::from_channels(planes);
  }
  return read_dtvg(path);
}

VectorField to_vector_field(const MultiChannelImage& image) {
  VectorField f(image.height(), image.width(), image.channels());
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c)
      for (int k = 0; k < image.channels(); ++k) f.at(r, c)[static_cast<std::size_t>(k)] = image(k, r, c);
  return f;
}

MultiChannelImage to_image(const VectorField& field) {
  MultiChannelImage img(field.height(), field.width(), field.dim());
  for (int r = 0; r < field.height(); ++r)
    for (int c = 0; c < field.width(); ++c)
      for (int k = 0; k < field.dim(); ++k) img(k, r, c) = field.at(r, c)[static_cast<std::size_t>(k)];
  return img;
}

}  // namespace dtvar::io
