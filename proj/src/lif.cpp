#include "lakeice/io/lif.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "lakeice/core/error.hpp"

namespace lakeice {
namespace {

constexpr char kMagic[4] = {'L', 'I', 'F', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_lif(const std::filesystem::path& file, const GridTensor<float>& t) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw DataError("cannot write " + file.string());
  os.write(kMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(t.height));
  put_u32(os, static_cast<std::uint32_t>(t.width));
  put_u32(os, static_cast<std::uint32_t>(t.channels()));
  std::vector<float> flat(static_cast<std::size_t>(t.pixels()) * t.channels());
  for (int p = 0; p < t.pixels(); ++p)
    for (int c = 0; c < t.channels(); ++c)
      flat[static_cast<std::size_t>(p) * t.channels() + c] = t.values(p, c);
  os.write(reinterpret_cast<const char*>(flat.data()),
           static_cast<std::streamsize>(flat.size() * sizeof(float)));
  if (!os) throw DataError("short write to " + file.string());
}

GridTensor<float> read_lif(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw DataError("cannot read " + file.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("not a LIF1 file: " + file.string());
  const auto h = get_u32(is);
  const auto w = get_u32(is);
  const auto c = get_u32(is);
  if (!is || h == 0 || w == 0 || c == 0 || h > 1u << 16 || w > 1u << 16 ||
      c > 1u << 12)
    throw DataError("bad LIF1 header in " + file.string());
  GridTensor<float> t(static_cast<int>(h), static_cast<int>(w),
                      static_cast<int>(c));
  std::vector<float> flat(static_cast<std::size_t>(h) * w * c);
  is.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(flat.size() * sizeof(float)));
  if (!is) throw DataError("truncated LIF1 payload in " + file.string());
  for (int p = 0; p < t.pixels(); ++p)
    for (int ch = 0; ch < t.channels(); ++ch)
      t.values(p, ch) = flat[static_cast<std::size_t>(p) * c + ch];
  return t;
}

void write_mask_lif(const std::filesystem::path& file, const Mask& m) {
  GridTensor<float> t(m.height, m.width, 1);
  for (int p = 0; p < t.pixels(); ++p) t.values(p, 0) = m.bits[p] ? 1.0f : 0.0f;
  write_lif(file, t);
}

Mask read_mask_lif(const std::filesystem::path& file) {
  GridTensor<float> t = read_lif(file);
  if (t.channels() != 1) throw DataError("mask file must have one channel");
  Mask m(t.height, t.width);
  for (int p = 0; p < t.pixels(); ++p) m.bits[p] = t.values(p, 0) != 0.0f;
  return m;
}

void write_label_lif(const std::filesystem::path& file, const LabelGrid& g) {
  GridTensor<float> t(g.height, g.width, 1);
  for (int p = 0; p < t.pixels(); ++p)
    t.values(p, 0) = static_cast<float>(g.classes[p]);
  write_lif(file, t);
}

LabelGrid read_label_lif(const std::filesystem::path& file) {
  GridTensor<float> t = read_lif(file);
  if (t.channels() != 1) throw DataError("label file must have one channel");
  LabelGrid g(t.height, t.width);
  for (int p = 0; p < t.pixels(); ++p) {
    const int c = static_cast<int>(t.values(p, 0));
    if (c < 0 || c >= kNumClasses) throw DataError("label class out of range");
    g.classes[p] = static_cast<std::uint8_t>(c);
  }
  return g;
}

}  // namespace lakeice
