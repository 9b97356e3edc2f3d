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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "imageability/error.h"
#include "imageability/io.h"
#include "testing.h"

namespace imageability {
namespace {

using ::imageability::testing::RandomRecords;
using ::imageability::testing::TempDir;

ErrorCode LoadError(const std::filesystem::path& path) {
  try {
    LoadStore(path);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return ErrorCode::kInvalidArgument;
}

ImageStore SampleStore() {
  Rng rng(5);
  ImageStore store(8);
  store.Add("a", RandomRecords(rng, "a", 3, 8));
  store.Add("b", RandomRecords(rng, "b", 1, 8));
  store.Add("c", RandomRecords(rng, "c", 4, 8));
  return store;
}

TEST(ImageStoreTest, AddAndRead) {
  Rng rng(1);
  ImageStore store(4);
  const auto records = RandomRecords(rng, "p", 2, 4);
  store.Add("p", records);
  EXPECT_EQ(store.rows(), 2u);
  EXPECT_TRUE(store.Contains("p"));
  EXPECT_FALSE(store.Contains("q"));
  EXPECT_EQ(store.Records("p"), records);
  EXPECT_EQ(store.Find("p")->count, 2u);
  EXPECT_TRUE(store.Records("q").empty());
}

TEST(ImageStoreTest, AddValidatesWithoutSideEffects) {
  Rng rng(2);
  ImageStore store(4);
  auto records = RandomRecords(rng, "p", 2, 4);
  records[1].embedding.pop_back();
  try {
    store.Add("p", records);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_EQ(store.rows(), 0u);

  records = RandomRecords(rng, "p", 2, 4);
  records[0].clip_score = 100.5f;
  EXPECT_THROW(store.Add("p", records), Error);
  EXPECT_THROW(store.Add("p", {}), Error);
  EXPECT_THROW(store.Add("bad\tid", RandomRecords(rng, "x", 1, 4)), Error);
  store.Add("p", RandomRecords(rng, "p", 1, 4));
  EXPECT_THROW(store.Add("p", RandomRecords(rng, "p", 1, 4)), Error);
  EXPECT_EQ(store.rows(), 1u);
  EXPECT_THROW(ImageStore(0), Error);
}

TEST(ImageStoreTest, RoundTrip) {
  TempDir dir;
  const ImageStore store = SampleStore();
  SaveStore(store, dir / "s.imgb", "{\"seed\":3}");
  const ImageStore back = LoadStore(dir / "s.imgb");
  EXPECT_EQ(back, store);
  EXPECT_EQ(StoreDigest(back), StoreDigest(store));
  EXPECT_EQ(back.index(), store.index());
  EXPECT_EQ(std::filesystem::file_size(dir / "s.imgb"),
            17u + store.rows() * (4u + 4u * 8u));
}

TEST(ImageStoreTest, DigestSeesEveryBit) {
  ImageStore a = SampleStore();
  ImageStore b(8);
  for (const auto& [id, slice] : a.index()) {
    auto records = a.Records(id);
    if (id == "c") records[2].embedding[5] = std::nextafter(records[2].embedding[5], 1e9f);
    b.Add(id, records);
  }
  EXPECT_NE(StoreDigest(a), StoreDigest(b));
  EXPECT_FALSE(a == b);
}

TEST(ImageStoreTest, RejectsCorruptFiles) {
  TempDir dir;
  const auto path = dir / "s.imgb";
  SaveStore(SampleStore(), path);
  const std::string bytes = ReadFile(path);

  AtomicWriteFile(path, "XXXX" + bytes.substr(4));
  EXPECT_EQ(LoadError(path), ErrorCode::kBadMagic);

  std::string versioned = bytes;
  versioned[4] = 2;
  AtomicWriteFile(path, versioned);
  EXPECT_EQ(LoadError(path), ErrorCode::kVersionMismatch);

  AtomicWriteFile(path, bytes.substr(0, bytes.size() - 3));
  EXPECT_EQ(LoadError(path), ErrorCode::kTruncatedFile);
  AtomicWriteFile(path, bytes.substr(0, 10));
  EXPECT_EQ(LoadError(path), ErrorCode::kTruncatedFile);

  AtomicWriteFile(path, bytes + "x");
  EXPECT_EQ(LoadError(path), ErrorCode::kMalformedRecord);

  AtomicWriteFile(path, bytes);
  EXPECT_NO_THROW(LoadStore(path));
}

TEST(ImageStoreTest, RejectsInconsistentIndex) {
  TempDir dir;
  const auto path = dir / "s.imgb";
  SaveStore(SampleStore(), path);
  const auto index = IndexPathFor(path);

  AtomicWriteFile(index, "#imgindex v1\t8\t8\na\t0\t3\nb\t2\t2\n");
  EXPECT_EQ(LoadError(path), ErrorCode::kMalformedRecord);
  AtomicWriteFile(index, "#imgindex v1\t8\t8\na\t6\t3\n");
  EXPECT_EQ(LoadError(path), ErrorCode::kMalformedRecord);
  AtomicWriteFile(index, "#imgindex v1\t8\t8\na\t0\tx\n");
  EXPECT_EQ(LoadError(path), ErrorCode::kMalformedRecord);
  AtomicWriteFile(index, "#imgindex v1\t8\t8\na\t0\t1\na\t1\t1\n");
  EXPECT_EQ(LoadError(path), ErrorCode::kMalformedRecord);
  AtomicWriteFile(index, "a\t0\t1\n");
  EXPECT_EQ(LoadError(path), ErrorCode::kBadMagic);
}

}  // namespace
}  // namespace imageability
