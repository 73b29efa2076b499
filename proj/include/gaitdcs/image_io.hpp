#pragma once

#include <string>

#include "gaitdcs/image.hpp"

namespace gaitdcs {

/// Reads binary PGM (P5) or PPM (P6) with maxval <= 255. Colour input is
/// reduced to luma round(0.299 R + 0.587 G + 0.114 B).
GrayImage read_pnm(const std::string& path);

void write_pgm(const std::string& path, const GrayImage& img);

/// Foreground written as 255, background as 0.
void write_mask_pgm(const std::string& path, const BinaryMask& mask);

/// Inverse of write_mask_pgm: pixels >= 128 are foreground.
BinaryMask read_mask_pgm(const std::string& path);

}  // namespace gaitdcs
