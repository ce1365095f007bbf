#pragma once

#include <filesystem>

#include "dtvar/grid.hpp"

namespace dtvar::io {

struct GrayImage {
  ScalarGrid samples;  // raw integer sample values, 0..maxval
  int maxval = 255;
};

/// Reads P2 (plain) or P5 (raw, 8- or 16-bit big-endian) PGM.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes P5 with samples rounded and clamped to [0, maxval]; maxval > 255
/// selects 16-bit samples.
void write_pgm(const std::filesystem::path& path, const ScalarGrid& samples, int maxval = 255);

/// Convenience: maps [0,1] to 8-bit P5.
void write_pgm_unit(const std::filesystem::path& path, const ScalarGrid& unit_values);

/// Reads P6 (8- or 16-bit) as a 3-channel image normalized to [0,1].
MultiChannelImage read_ppm(const std::filesystem::path& path);

/// Writes the first three channels of a [0,1] image as 8-bit P6.
void write_ppm(const std::filesystem::path& path, const MultiChannelImage& rgb);

/// Reads a mask from P1/P4 (1 = set) or P2/P5 (nonzero = set).
BinaryMask read_mask(const std::filesystem::path& path);

/// Writes a P4 bitmap.
void write_pbm(const std::filesystem::path& path, const BinaryMask& mask);

// DTVG binary grid format, little-endian throughout:
//   bytes 0..3   magic "DTVG"
//   u32          height
//   u32          width
//   u32          channels
//   f64[...]     values, channel-planar, each plane row-major
// Values are stored bit-exactly and are not clamped.
void write_dtvg(const std::filesystem::path& path, const MultiChannelImage& image);
void write_dtvg(const std::filesystem::path& path, const ScalarGrid& grid);
MultiChannelImage read_dtvg(const std::filesystem::path& path);

/// Reads a 1-channel DTVG, or a PGM normalized by its maxval.
ScalarGrid read_scalar(const std::filesystem::path& path);

/// Reads a DTVG of any channel count, or a PPM/PGM normalized to [0,1].
MultiChannelImage read_image(const std::filesystem::path& path);

VectorField to_vector_field(const MultiChannelImage& image);
MultiChannelImage to_image(const VectorField& field);

}  // namespace dtvar::io
