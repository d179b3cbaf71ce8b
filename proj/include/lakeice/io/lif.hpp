#pragma once

#include <filesystem>
#include <string>

#include "lakeice/core/grid.hpp"

namespace lakeice {

// Flat little-endian float32 array with a 16-byte header:
// magic "LIF1", then H, W, C as unsigned 32-bit. Payload order is
// (y, x, c) with channels fastest.
void write_lif(const std::filesystem::path& file, const GridTensor<float>& t);
GridTensor<float> read_lif(const std::filesystem::path& file);

// Mask and label grids ride on the same container as H x W x 1 arrays.
void write_mask_lif(const std::filesystem::path& file, const Mask& m);
Mask read_mask_lif(const std::filesystem::path& file);
void write_label_lif(const std::filesystem::path& file, const LabelGrid& g);
LabelGrid read_label_lif(const std::filesystem::path& file);

}  // namespace lakeice
