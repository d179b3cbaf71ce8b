#include "lakeice/io/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace lakeice {
namespace {

using nlohmann::json;

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

json encoder_to_json(const EncoderConfig& c) {
  return json{{"leaky_alpha", c.leaky_alpha},
              {"feature_channels", c.feature_channels},
              {"embed_channels", c.embed_channels},
              {"optical_size", c.optical_size},
              {"sar_size", c.sar_size},
              {"sar_c1", c.sar_c1},
              {"sar_c2", c.sar_c2},
              {"sar_c3", c.sar_c3}};
}

EncoderConfig encoder_from_json(const json& j) {
  EncoderConfig c;
  c.leaky_alpha = j.at("leaky_alpha").get<double>();
  c.feature_channels = j.at("feature_channels").get<int>();
  c.embed_channels = j.at("embed_channels").get<int>();
  c.optical_size = j.at("optical_size").get<int>();
  c.sar_size = j.at("sar_size").get<int>();
  c.sar_c1 = j.at("sar_c1").get<int>();
  c.sar_c2 = j.at("sar_c2").get<int>();
  c.sar_c3 = j.at("sar_c3").get<int>();
  return c;
}

json regression_to_json(const RegressionConfig& c) {
  return json{{"window", c.window},
              {"embed_channels", c.embed_channels},
              {"spatial", c.spatial},
              {"pre", {c.pre1, c.pre2, c.pre3}},
              {"post", {c.post1, c.post2, c.post3}},
              {"leaky_alpha", c.leaky_alpha}};
}

RegressionConfig regression_from_json(const json& j) {
  RegressionConfig c;
  c.window = j.at("window").get<int>();
  c.embed_channels = j.at("embed_channels").get<int>();
  c.spatial = j.at("spatial").get<int>();
  c.pre1 = j.at("pre")[0].get<int>();
  c.pre2 = j.at("pre")[1].get<int>();
  c.pre3 = j.at("pre")[2].get<int>();
  c.post1 = j.at("post")[0].get<int>();
  c.post2 = j.at("post")[1].get<int>();
  c.post3 = j.at("post")[2].get<int>();
  c.leaky_alpha = j.at("leaky_alpha").get<double>();
  return c;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& file, const Checkpoint& ck) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw DataError("cannot write checkpoint " + file.string());
  os.write("LICKPT1\n", 8);

  json header{{"stage", ck.header.stage},
              {"config_hash", ck.header.config_hash},
              {"seed", ck.header.seed},
              {"version", ck.header.version},
              {"encoder", encoder_to_json(ck.header.encoder)}};
  if (ck.header.has_regression)
    header["regression"] = regression_to_json(ck.header.regression);
  const std::string text = header.dump();
  put_u32(os, static_cast<std::uint32_t>(text.size()));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));

  put_u32(os, static_cast<std::uint32_t>(ck.tensors.size()));
  for (const auto& [name, t] : ck.tensors) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(os, static_cast<std::uint32_t>(t.rows()));
    put_u32(os, static_cast<std::uint32_t>(t.cols()));
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(sizeof(float) * t.size()));
  }
  if (!os) throw DataError("short write to checkpoint " + file.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw DataError("cannot read checkpoint " + file.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "LICKPT1\n")
    throw DataError("not a checkpoint file: " + file.string());

  const auto hlen = get_u32(is);
  std::string text(hlen, '\0');
  is.read(text.data(), hlen);
  if (!is) throw DataError("truncated checkpoint header");
  json header = json::parse(text);

  Checkpoint ck;
  ck.header.stage = header.at("stage").get<std::string>();
  ck.header.config_hash = header.at("config_hash").get<std::string>();
  ck.header.seed = header.at("seed").get<std::uint64_t>();
  ck.header.version = header.at("version").get<std::string>();
  ck.header.encoder = encoder_from_json(header.at("encoder"));
  if (header.contains("regression")) {
    ck.header.regression = regression_from_json(header.at("regression"));
    ck.header.has_regression = true;
  }

  const auto n = get_u32(is);
  ck.tensors.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const auto rows = get_u32(is);
    const auto cols = get_u32(is);
    MatX<float> t(rows, cols);
    is.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(sizeof(float) * t.size()));
    if (!is) throw DataError("truncated checkpoint tensor " + name);
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

}  // namespace lakeice
