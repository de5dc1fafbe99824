#include "gazeattn/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "gazeattn/json_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace gazeattn {

namespace {

constexpr char kMagic[8] = {'G', 'A', 'Z', 'C', 'K', 'P', 'T', '\0'};

using nlohmann::json;

std::vector<NamedTensor> tensors_of(const nn::Net<float>& net) {
  std::vector<NamedTensor> out;
  for (const auto& l : net.layers) {
    if (!l->has_params()) continue;
    out.push_back({l->name + ".w", l->weight_dims(), l->w});
    out.push_back(
        {l->name + ".b", {static_cast<int>(l->b.size())}, l->b});
  }
  return out;
}

std::vector<std::string> frozen_of(const nn::Net<float>& net) {
  std::vector<std::string> out;
  for (const auto& l : net.layers)
    if (l->has_params() && l->frozen) out.push_back(l->name);
  return out;
}

ModelCheckpoint make_checkpoint(const nn::Net<float>& net,
                                const BackboneConfig& backbone,
                                std::string kind, const TrainConfig& cfg,
                                std::vector<EpochStats> history) {
  ModelCheckpoint ckpt;
  ckpt.model_kind = std::move(kind);
  ckpt.backbone = backbone;
  ckpt.train_config = cfg;
  ckpt.history = std::move(history);
  ckpt.tensors = tensors_of(net);
  ckpt.frozen_layers = frozen_of(net);
  return ckpt;
}

template <class T>
void append_pod(std::string& buf, T v) {
  buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

void load_into_net(const ModelCheckpoint& ckpt, nn::Net<float>& net) {
  for (const auto& t : ckpt.tensors) {
    const auto dot = t.name.rfind('.');
    if (dot == std::string::npos)
      throw CorruptCheckpoint("malformed tensor name \"" + t.name + "\"");
    auto* layer = net.find(t.name.substr(0, dot));
    if (!layer)
      throw IncompatibleCheckpoint("checkpoint tensor \"" + t.name +
                                   "\" has no matching layer");
    auto& dst = t.name.substr(dot + 1) == "w" ? layer->w : layer->b;
    if (dst.size() != t.data.size())
      throw IncompatibleCheckpoint("tensor \"" + t.name +
                                   "\" has the wrong element count");
    std::copy(t.data.begin(), t.data.end(), dst.begin());
  }
  for (const auto& name : ckpt.frozen_layers) {
    auto* layer = net.find(name);
    if (!layer)
      throw IncompatibleCheckpoint("frozen layer \"" + name +
                                   "\" does not exist");
    layer->frozen = true;
  }
}

}  // namespace

ModelCheckpoint checkpoint_from(const GazeModel& model, const TrainConfig& cfg,
                                std::vector<EpochStats> history) {
  return make_checkpoint(model.net, model.config, "gaze", cfg,
                         std::move(history));
}

ModelCheckpoint checkpoint_from(const AttentionModel& model,
                                const TrainConfig& cfg,
                                std::vector<EpochStats> history) {
  return make_checkpoint(model.net, model.config, "attention", cfg,
                         std::move(history));
}

void save_checkpoint(const ModelCheckpoint& ckpt,
                     const std::filesystem::path& path) {
  json header;
  header["model_kind"] = ckpt.model_kind;
  header["backbone"] = ckpt.backbone;
  header["train_config"] = ckpt.train_config;
  header["history"] = ckpt.history;
  json tensor_dir = json::array();
  for (const auto& t : ckpt.tensors)
    tensor_dir.push_back(json{{"name", t.name},
                              {"dims", t.dims},
                              {"count", t.data.size()}});
  header["tensors"] = tensor_dir;
  header["frozen"] = ckpt.frozen_layers;
  const std::string header_str = header.dump();

  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  append_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(ckpt.format_version));
  append_pod<std::uint64_t>(buf, header_str.size());
  buf += header_str;
  for (const auto& t : ckpt.tensors)
    buf.append(reinterpret_cast<const char*>(t.data.data()),
               t.data.size() * sizeof(float));

  const auto crc = static_cast<std::uint32_t>(
      crc32(0, reinterpret_cast<const Bytef*>(buf.data()),
            static_cast<uInt>(buf.size())));
  append_pod<std::uint32_t>(buf, crc);

  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write on checkpoint: " + path.string());
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());

  constexpr std::size_t kMinSize = sizeof(kMagic) + 4 + 8 + 4;
  if (buf.size() < kMinSize)
    throw CorruptCheckpoint("checkpoint file too small: " + path.string());
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw CorruptCheckpoint("not a checkpoint file: " + path.string());

  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, buf.data() + buf.size() - 4, 4);
  const auto crc = static_cast<std::uint32_t>(
      crc32(0, reinterpret_cast<const Bytef*>(buf.data()),
            static_cast<uInt>(buf.size() - 4)));
  if (crc != stored_crc)
    throw CorruptCheckpoint("checksum mismatch: " + path.string());

  std::size_t pos = sizeof(kMagic);
  std::uint32_t version;
  std::memcpy(&version, buf.data() + pos, 4);
  pos += 4;
  if (static_cast<int>(version) > kCheckpointVersion)
    throw VersionMismatch("checkpoint format version " +
                          std::to_string(version) + " is newer than " +
                          std::to_string(kCheckpointVersion));
  std::uint64_t header_len;
  std::memcpy(&header_len, buf.data() + pos, 8);
  pos += 8;
  if (pos + header_len + 4 > buf.size())
    throw CorruptCheckpoint("truncated header: " + path.string());

  ModelCheckpoint ckpt;
  ckpt.format_version = static_cast<int>(version);
  try {
    const json header = json::parse(buf.substr(pos, header_len));
    ckpt.model_kind = header.at("model_kind").get<std::string>();
    ckpt.backbone = header.at("backbone").get<BackboneConfig>();
    ckpt.train_config = header.at("train_config").get<TrainConfig>();
    ckpt.history = header.at("history").get<std::vector<EpochStats>>();
    ckpt.frozen_layers =
        header.at("frozen").get<std::vector<std::string>>();
    pos += header_len;
    for (const auto& entry : header.at("tensors")) {
      NamedTensor t;
      t.name = entry.at("name").get<std::string>();
      t.dims = entry.at("dims").get<std::vector<int>>();
      const auto count = entry.at("count").get<std::size_t>();
      if (pos + count * sizeof(float) + 4 > buf.size())
        throw CorruptCheckpoint("truncated tensor data: " + path.string());
      t.data.resize(count);
      std::memcpy(t.data.data(), buf.data() + pos, count * sizeof(float));
      pos += count * sizeof(float);
      ckpt.tensors.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw CorruptCheckpoint("malformed checkpoint header: " +
                            std::string(e.what()));
  }
  if (pos + 4 != buf.size())
    throw CorruptCheckpoint("trailing bytes in checkpoint: " + path.string());
  return ckpt;
}

GazeModel gaze_model_from(const ModelCheckpoint& ckpt) {
  if (ckpt.model_kind != "gaze")
    throw IncompatibleCheckpoint("expected a gaze checkpoint, got \"" +
                                 ckpt.model_kind + "\"");
  GazeModel model{ckpt.backbone, build_net_topology<float>(ckpt.backbone, 2)};
  load_into_net(ckpt, model.net);
  return model;
}

AttentionModel attention_model_from(const ModelCheckpoint& ckpt) {
  if (ckpt.model_kind != "attention")
    throw IncompatibleCheckpoint("expected an attention checkpoint, got \"" +
                                 ckpt.model_kind + "\"");
  AttentionModel model{ckpt.backbone,
                       build_net_topology<float>(ckpt.backbone, kNumClasses)};
  load_into_net(ckpt, model.net);
  return model;
}

}  // namespace gazeattn
