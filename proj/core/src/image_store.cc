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

#include "imageability/image_store.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/rng.h"
#include "imageability/text.h"

namespace imageability {
namespace {

constexpr char kMagic[4] = {'I', 'M', 'G', 'B'};
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderBytes = 4 + 1 + 4 + 8;
constexpr std::string_view kIndexMagic = "#imgindex v1";

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutF32(std::string& out, float f) { PutU32(out, std::bit_cast<uint32_t>(f)); }

uint32_t GetU32(const unsigned char* p) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
uint64_t GetU64(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::string SerializeBlob(const ImageStore& store) {
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  PutU32(out, store.dim());
  PutU64(out, store.rows());
  out.reserve(kHeaderBytes + store.rows() * (4 + 4 * size_t{store.dim()}));
  for (size_t row = 0; row < store.rows(); ++row) {
    PutF32(out, store.ClipScore(row));
    for (const float value : store.Embedding(row)) PutF32(out, value);
  }
  return out;
}

std::string SerializeIndex(const ImageStore& store, std::string_view config) {
  std::string out(kIndexMagic);
  out += '\t';
  out += std::to_string(store.dim());
  out += '\t';
  out += std::to_string(store.rows());
  out += '\n';
  if (!config.empty()) {
    out += "#config\t";
    out += config;
    out += '\n';
  }
  for (const auto& [id, slice] : store.index()) {
    out += id + '\t' + std::to_string(slice.offset) + '\t' +
           std::to_string(slice.count) + '\n';
  }
  return out;
}

}  // namespace

ImageStore::ImageStore(uint32_t dim) : dim_(dim) {
  if (dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be > 0");
  }
}

void ImageStore::Add(std::string_view prompt_id,
                     std::span<const ImageRecord> records) {
  if (prompt_id.empty() || prompt_id.find_first_of("\t\n\r") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "bad prompt id for store");
  }
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no records to store",
                std::string(prompt_id));
  }
  if (Contains(prompt_id)) {
    throw Error(ErrorCode::kInvalidArgument, "prompt already stored",
                std::string(prompt_id));
  }
  for (const ImageRecord& record : records) {
    if (record.embedding.size() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding has " + std::to_string(record.embedding.size()) +
                      " values, store dimension is " + std::to_string(dim_),
                  std::string(prompt_id));
    }
    if (!std::isfinite(record.clip_score) || record.clip_score < 0.0f ||
        record.clip_score > 100.0f) {
      throw Error(ErrorCode::kInvalidArgument, "clip score outside [0,100]",
                  std::string(prompt_id));
    }
  }
  const Slice slice{rows(), records.size()};
  for (const ImageRecord& record : records) {
    scores_.push_back(record.clip_score);
    blob_.insert(blob_.end(), record.embedding.begin(), record.embedding.end());
  }
  lookup_.emplace(std::string(prompt_id), index_.size());
  index_.emplace_back(std::string(prompt_id), slice);
}

bool ImageStore::Contains(std::string_view prompt_id) const {
  return lookup_.contains(std::string(prompt_id));
}

std::optional<ImageStore::Slice> ImageStore::Find(
    std::string_view prompt_id) const {
  const auto it = lookup_.find(std::string(prompt_id));
  if (it == lookup_.end()) return std::nullopt;
  return index_[it->second].second;
}

std::vector<ImageRecord> ImageStore::Records(std::string_view prompt_id) const {
  std::vector<ImageRecord> out;
  const auto slice = Find(prompt_id);
  if (!slice) return out;
  for (size_t i = 0; i < slice->count; ++i) {
    const size_t row = slice->offset + i;
    const auto embedding = Embedding(row);
    out.push_back({std::string(prompt_id), i, scores_[row],
                   std::vector<float>(embedding.begin(), embedding.end())});
  }
  return out;
}

bool ImageStore::operator==(const ImageStore& other) const {
  if (dim_ != other.dim_ || index_ != other.index_ ||
      scores_.size() != other.scores_.size() ||
      blob_.size() != other.blob_.size()) {
    return false;
  }
  // Bitwise comparison so NaN payloads and signed zeros count.
  return std::memcmp(scores_.data(), other.scores_.data(),
                     scores_.size() * sizeof(float)) == 0 &&
         std::memcmp(blob_.data(), other.blob_.data(),
                     blob_.size() * sizeof(float)) == 0;
}

std::filesystem::path IndexPathFor(const std::filesystem::path& store_path) {
  std::filesystem::path index = store_path;
  index += ".idx";
  return index;
}

void SaveStore(const ImageStore& store, const std::filesystem::path& path,
               std::string_view config_line) {
  AtomicWriteFile(path, SerializeBlob(store));
  AtomicWriteFile(IndexPathFor(path), SerializeIndex(store, config_line));
}

ImageStore LoadStore(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  const std::string where = path.string();
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an image store (magic IMGB)", where);
  }
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kTruncatedFile, "store header truncated", where);
  }
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (data[4] != kVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "store version " + std::to_string(data[4]) + ", expected 1",
                where);
  }
  const uint32_t dim = GetU32(data + 5);
  const uint64_t rows = GetU64(data + 9);
  if (dim == 0) {
    throw Error(ErrorCode::kMalformedRecord, "store dimension is zero", where);
  }
  const uint64_t row_bytes = 4 + 4 * uint64_t{dim};
  if (rows > (bytes.size() - kHeaderBytes) / row_bytes ||
      bytes.size() < kHeaderBytes + rows * row_bytes) {
    throw Error(ErrorCode::kTruncatedFile,
                "store holds fewer rows than its header declares", where);
  }
  if (bytes.size() != kHeaderBytes + rows * row_bytes) {
    throw Error(ErrorCode::kMalformedRecord, "trailing bytes after last row",
                where);
  }

  ImageStore store(dim);
  store.scores_.resize(rows);
  store.blob_.resize(rows * dim);
  const unsigned char* p = data + kHeaderBytes;
  for (uint64_t row = 0; row < rows; ++row) {
    store.scores_[row] = std::bit_cast<float>(GetU32(p));
    p += 4;
    for (uint32_t d = 0; d < dim; ++d) {
      store.blob_[row * dim + d] = std::bit_cast<float>(GetU32(p));
      p += 4;
    }
  }

  const std::filesystem::path index_path = IndexPathFor(path);
  const std::vector<std::string> lines = ReadLines(index_path);
  const std::string index_where = index_path.string();
  if (lines.empty() || !lines[0].starts_with(kIndexMagic)) {
    throw Error(ErrorCode::kBadMagic, "missing '#imgindex v1' header",
                index_where);
  }
  std::vector<bool> used(rows, false);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].starts_with('#')) continue;
    const auto fields = SplitChar(lines[i], '\t');
    const int64_t offset = fields.size() == 3 ? ParseInt(fields[1]).value_or(-1) : -1;
    const int64_t count = fields.size() == 3 ? ParseInt(fields[2]).value_or(-1) : -1;
    const std::string line_where = index_where + ":" + std::to_string(i + 1);
    if (offset < 0 || count <= 0 || fields[0].empty()) {
      throw Error(ErrorCode::kMalformedRecord, "bad index record", line_where);
    }
    const auto first = static_cast<uint64_t>(offset);
    const auto n = static_cast<uint64_t>(count);
    if (first + n > rows) {
      throw Error(ErrorCode::kMalformedRecord, "index slice out of bounds",
                  line_where);
    }
    for (uint64_t r = first; r < first + n; ++r) {
      if (used[r]) {
        throw Error(ErrorCode::kMalformedRecord, "overlapping index slices",
                    line_where);
      }
      used[r] = true;
    }
    const std::string id(fields[0]);
    if (!store.lookup_.emplace(id, store.index_.size()).second) {
      throw Error(ErrorCode::kMalformedRecord, "duplicate prompt in index",
                  line_where);
    }
    store.index_.emplace_back(id, ImageStore::Slice{first, n});
  }
  return store;
}

uint64_t StoreDigest(const ImageStore& store) {
  return Fnv1a64(SerializeBlob(store)) ^
         Mix64(Fnv1a64(SerializeIndex(store, {})));
}

}  // namespace imageability
