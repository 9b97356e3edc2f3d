//
// Copyright 2026 The Imageability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef IMAGEABILITY_IMAGE_STORE_H_
#define IMAGEABILITY_IMAGE_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imageability {

inline constexpr uint32_t kDefaultEmbeddingDim = 512;

struct ImageRecord {
  std::string prompt_id;
  size_t image_index = 0;
  float clip_score = 0.0f;  // percentage in [0, 100]
  std::vector<float> embedding;

  bool operator==(const ImageRecord&) const = default;
};

// Dense, append-only collection of image records grouped by prompt. Rows of
// one prompt are contiguous.
class ImageStore {
 public:
  struct Slice {
    size_t offset = 0;
    size_t count = 0;
    bool operator==(const Slice&) const = default;
  };

  explicit ImageStore(uint32_t dim = kDefaultEmbeddingDim);

  uint32_t dim() const { return dim_; }
  size_t rows() const { return scores_.size(); }
  size_t prompt_count() const { return index_.size(); }

  // Appends all records of one prompt. Throws kDimensionMismatch on a wrong
  // embedding length and kInvalidArgument on an out-of-range score, a
  // duplicate prompt or an empty record list; nothing is written on throw.
  void Add(std::string_view prompt_id, std::span<const ImageRecord> records);

  bool Contains(std::string_view prompt_id) const;
  std::optional<Slice> Find(std::string_view prompt_id) const;
  std::vector<ImageRecord> Records(std::string_view prompt_id) const;

  std::span<const float> Embedding(size_t row) const {
    return std::span<const float>(blob_).subspan(row * dim_, dim_);
  }
  float ClipScore(size_t row) const { return scores_[row]; }
  std::span<const float> clip_scores() const { return scores_; }
  std::span<const float> blob() const { return blob_; }

  // (prompt id, slice) in insertion order.
  const std::vector<std::pair<std::string, Slice>>& index() const {
    return index_;
  }

  bool operator==(const ImageStore& other) const;

 private:
  friend ImageStore LoadStore(const std::filesystem::path& path);

  uint32_t dim_;
  std::vector<float> scores_;
  std::vector<float> blob_;
  std::vector<std::pair<std::string, Slice>> index_;
  std::unordered_map<std::string, size_t> lookup_;
};

// Binary layout, little-endian: "IMGB", version byte 1, u32 dim, u64 rows,
// then rows of (f32 clip_score, f32 x dim embedding). The prompt index is
// written to `<path>.idx` as text: "#imgindex v1" then id \t offset \t count.
std::filesystem::path IndexPathFor(const std::filesystem::path& store_path);
void SaveStore(const ImageStore& store, const std::filesystem::path& path,
               std::string_view config_line = {});

// Throws kBadMagic, kVersionMismatch, kTruncatedFile, or kMalformedRecord
// for an inconsistent index.
ImageStore LoadStore(const std::filesystem::path& path);

// FNV-1a over the serialized store and index, for determinism checks.
uint64_t StoreDigest(const ImageStore& store);

}  // namespace imageability

#endif  // IMAGEABILITY_IMAGE_STORE_H_
