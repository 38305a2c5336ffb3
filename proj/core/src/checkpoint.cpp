// Copyright 2026 The hopeclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hope/checkpoint.hpp"

#include <cstring>
#include <type_traits>

#include "hope/fileio.hpp"
#include "hope/kv.hpp"

namespace hope {
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'H', 'O', 'P', 'E', 'W', 'T', 'S', '\0'};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename V>
void put(std::string& out, V v) {
  static_assert(std::is_trivially_copyable_v<V>);
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

class Reader {
 public:
  Reader(std::string_view data, std::string where) : data_(data), where_(std::move(where)) {}

  template <typename V>
  V get() {
    V v;
    std::memcpy(&v, take(sizeof v).data(), sizeof v);
    return v;
  }
  std::string_view take(std::size_t n) {
    if (n > data_.size() - pos_) {
      throw CheckpointError(CheckpointError::Kind::Corrupt,
                            where_ + ": corrupt checkpoint (truncated)");
    }
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::string where_;
};

std::string_view head_name(const HyperParams& p) {
  return p.num_outputs() == 2 ? "softmax-2" : "sigmoid-1";
}

}  // namespace

template <typename T>
void save_checkpoint(SequenceClassifier<T>& model, const Tokenizer& tokenizer, const fs::path& dir) {
  const fs::path staging = make_staging_directory(dir);
  try {
    KeyValueDoc cfg;
    cfg.set("format_version", kCheckpointFormatVersion);
    cfg.set("dtype", sizeof(T) == 4 ? "f32" : "f64");
    cfg.set("pooling", "first-token");
    cfg.set("head", head_name(model.params()));
    cfg.set("tokenizer.kind", tokenizer.kind());
    cfg.set("tokenizer.model_id", tokenizer.model_id());
    cfg.merge(model.params().to_key_value());
    cfg.merge(model.backbone_config().to_key_value("backbone."));
    atomic_write(staging / "config.kv", cfg.serialize());

    std::string blob(kMagic, sizeof kMagic);
    put<std::uint32_t>(blob, kCheckpointFormatVersion);
    put<std::uint32_t>(blob, sizeof(T));
    std::uint64_t count = 0;
    model.visit_parameters([&](const std::string&, nn::Parameter<T>&) { ++count; });
    put<std::uint64_t>(blob, count);
    model.visit_parameters([&](const std::string& name, nn::Parameter<T>& p) {
      put<std::uint32_t>(blob, static_cast<std::uint32_t>(name.size()));
      blob += name;
      put<std::uint64_t>(blob, static_cast<std::uint64_t>(p.value.rows()));
      put<std::uint64_t>(blob, static_cast<std::uint64_t>(p.value.cols()));
      blob.append(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::size_t>(p.value.size()) * sizeof(T));
    });
    put<std::uint64_t>(blob, fnv1a(blob));
    atomic_write(staging / "weights.bin", blob);

    tokenizer.save(staging / "tokenizer");
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  commit_directory(staging, dir);
}

HyperParams read_checkpoint_params(const fs::path& dir) {
  if (!fs::is_regular_file(dir / "config.kv")) {
    throw CheckpointError(CheckpointError::Kind::Missing,
                          "no checkpoint at " + dir.string() + " (config.kv missing)");
  }
  try {
    const KeyValueDoc cfg = KeyValueDoc::load(dir / "config.kv");
    const long long version = cfg.get_int("format_version");
    if (version != kCheckpointFormatVersion) {
      throw CheckpointError(CheckpointError::Kind::VersionMismatch,
                            dir.string() + ": checkpoint format version " + std::to_string(version) +
                                ", this build reads version " +
                                std::to_string(kCheckpointFormatVersion));
    }
    return HyperParams::from_key_value(cfg);
  } catch (const KeyValueError& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, dir.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, dir.string() + ": " + e.what());
  }
}

template <typename T>
LoadedCheckpoint<T> load_checkpoint(const fs::path& dir, const std::optional<HyperParams>& expected) {
  const HyperParams params = read_checkpoint_params(dir);
  BackboneConfig backbone;
  try {
    backbone = BackboneConfig::from_key_value(KeyValueDoc::load(dir / "config.kv"), "backbone.");
  } catch (const std::exception& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, dir.string() + ": " + e.what());
  }

  if (expected) {
    const auto mismatch = [&](const char* field, const std::string& stored, const std::string& want) {
      if (stored != want) {
        throw CheckpointError(CheckpointError::Kind::ConfigMismatch,
                              dir.string() + ": checkpoint " + field + " " + stored +
                                  " does not match configured " + field + " " + want);
      }
    };
    mismatch("hidden_size", std::to_string(params.hidden_size), std::to_string(expected->hidden_size));
    mismatch("num_layers", std::to_string(params.num_layers), std::to_string(expected->num_layers));
    mismatch("num_attention_heads", std::to_string(params.num_attention_heads),
             std::to_string(expected->num_attention_heads));
    mismatch("intermediate_size", std::to_string(params.intermediate_size),
             std::to_string(expected->intermediate_size));
    mismatch("loss", std::string(to_string(params.loss)), std::string(to_string(expected->loss)));
    mismatch("activation", std::string(nn::to_string(params.activation)),
             std::string(nn::to_string(expected->activation)));
  }

  LoadedCheckpoint<T> out;
  try {
    out.model = std::make_unique<SequenceClassifier<T>>(params, backbone);
  } catch (const std::exception& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, dir.string() + ": " + e.what());
  }

  std::string blob;
  try {
    blob = read_file(dir / "weights.bin");
  } catch (const IoError& e) {
    throw CheckpointError(CheckpointError::Kind::Missing, e.what());
  }
  const std::string where = (dir / "weights.bin").string();
  const auto corrupt = [&](const std::string& why) {
    return CheckpointError(CheckpointError::Kind::Corrupt, where + ": corrupt checkpoint (" + why + ")");
  };
  if (blob.size() < sizeof kMagic + 8 + 8 + 8) throw corrupt("truncated");
  std::uint64_t stored_sum;
  std::memcpy(&stored_sum, blob.data() + blob.size() - 8, 8);
  const std::string_view body(blob.data(), blob.size() - 8);

  Reader r(body, where);
  if (r.take(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) throw corrupt("bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointFormatVersion) {
    throw CheckpointError(CheckpointError::Kind::VersionMismatch,
                          where + ": weight format version " + std::to_string(version) +
                              ", this build reads version " +
                              std::to_string(kCheckpointFormatVersion));
  }
  if (fnv1a(body) != stored_sum) throw corrupt("checksum mismatch");
  const auto scalar = r.get<std::uint32_t>();
  if (scalar != 4 && scalar != 8) throw corrupt("unknown scalar width");
  const auto count = r.get<std::uint64_t>();

  std::uint64_t expected_count = 0;
  out.model->visit_parameters([&](const std::string&, nn::Parameter<T>&) { ++expected_count; });
  if (count != expected_count) {
    throw corrupt(std::to_string(count) + " tensors stored, model has " +
                  std::to_string(expected_count));
  }
  out.model->visit_parameters([&](const std::string& name, nn::Parameter<T>& p) {
    const auto len = r.get<std::uint32_t>();
    const std::string_view stored_name = r.take(len);
    if (stored_name != name) {
      throw corrupt("expected tensor '" + name + "', found '" + std::string(stored_name) + "'");
    }
    const auto rows = r.get<std::uint64_t>();
    const auto cols = r.get<std::uint64_t>();
    if (rows != static_cast<std::uint64_t>(p.value.rows()) ||
        cols != static_cast<std::uint64_t>(p.value.cols())) {
      throw corrupt("shape mismatch for '" + name + "'");
    }
    const std::size_t n = static_cast<std::size_t>(rows * cols);
    const std::string_view raw = r.take(n * scalar);
    if (scalar == sizeof(T)) {
      std::memcpy(p.value.data(), raw.data(), raw.size());
    } else if (scalar == 4) {
      for (std::size_t i = 0; i < n; ++i) {
        float v;
        std::memcpy(&v, raw.data() + 4 * i, 4);
        p.value.data()[i] = static_cast<T>(v);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double v;
        std::memcpy(&v, raw.data() + 8 * i, 8);
        p.value.data()[i] = static_cast<T>(v);
      }
    }
  });

  try {
    out.tokenizer = load_tokenizer(dir / "tokenizer");
  } catch (const TokenizerError& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, dir.string() + ": " + e.what());
  }
  return out;
}

template void save_checkpoint<float>(SequenceClassifier<float>&, const Tokenizer&, const fs::path&);
template void save_checkpoint<double>(SequenceClassifier<double>&, const Tokenizer&, const fs::path&);
template LoadedCheckpoint<float> load_checkpoint<float>(const fs::path&,
                                                        const std::optional<HyperParams>&);
template LoadedCheckpoint<double> load_checkpoint<double>(const fs::path&,
                                                          const std::optional<HyperParams>&);

}  // namespace hope
