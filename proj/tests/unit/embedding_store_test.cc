// Copyright 2026 The Stamp Authors
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


#include "stamp/embedding_store.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "stamp/sphere_geometry.h"
#include "stamp/synthetic.h"

namespace stamp {
namespace {

absl::StatusOr<EmbeddingStore> Parse(const std::string& text,
                                     LoadOptions options = {}) {
  std::istringstream in(text);
  return ParseTextEmbeddings(in, options);
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

TEST(ParseTextEmbeddingsTest, ThreeTokenFile) {
  auto store = Parse("a 1 0 0 0\nb 0 1 0 0\nc 0 0 1 2\n");
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ(store->size(), 3u);
  EXPECT_EQ(store->dim(), 4u);
  EXPECT_EQ(store->token(2), "c");
  EXPECT_DOUBLE_EQ(store->norm(2), std::sqrt(5.0));
}

TEST(ParseTextEmbeddingsTest, ZeroVectorIsRejected) {
  auto store = Parse("a 1 0\nb 0 0\n");
  ASSERT_FALSE(store.ok());
  EXPECT_NE(store.status().message().find("zero-norm embedding"),
            std::string::npos);
}

TEST(ParseTextEmbeddingsTest, HighDimensionalRows) {
  std::ostringstream text;
  for (int t = 0; t < 5; ++t) {
    text << "w" << t;
    for (int k = 0; k < 768; ++k) text << " " << (k == t ? 1.5 : 0.001 * k);
    text << "\n";
  }
  auto store = Parse(text.str());
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ(store->dim(), 768u);
}

TEST(ParseTextEmbeddingsTest, HeaderIsRecognisedAndChecked) {
  auto store = Parse("2 3\nx 1 2 3\ny 3 2 1\n");
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ(store->size(), 2u);
  EXPECT_FALSE(Parse("3 3\nx 1 2 3\ny 3 2 1\n").ok());
}

TEST(ParseTextEmbeddingsTest, MalformedInputs) {
  EXPECT_FALSE(Parse("").ok());
  EXPECT_FALSE(Parse("a 1 2\nb 1 2 3\n").ok());
  EXPECT_FALSE(Parse("a 1 2\nb 1 nan\n").ok());
  EXPECT_FALSE(Parse("a 1 2\nb 1 x\n").ok());
  EXPECT_FALSE(Parse("a 1 2\na 2 1\n").ok());
  LoadOptions expect_three;
  expect_three.expected_dim = 3;
  EXPECT_FALSE(Parse("a 1 2\nb 2 1\n", expect_three).ok());
}

TEST(ParseTextEmbeddingsTest, LowercaseKeepsFirstRowOnCollision) {
  LoadOptions options;
  options.lowercase = true;
  auto store = Parse("Apple 1 0\napple 0 1\npear 1 1\n", options);
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ(store->size(), 2u);
  EXPECT_EQ(store->Lookup("apple")->vector[0], 1.0);
}

TEST(EmbeddingStoreTest, LookupReturnsUnitDirection) {
  auto store = EmbeddingStore::Create({"p", "q"}, {3, 4, 1, 0}, 2);
  ASSERT_TRUE(store.ok());
  auto p = store->Lookup("p");
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ(p->unit[0], 0.6);
  EXPECT_DOUBLE_EQ(p->unit[1], 0.8);
  EXPECT_EQ(p->index, 0u);
  const UnitVector renormalized = *UnitVector::Normalize(p->vector);
  for (size_t k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(renormalized[k], p->unit[k]);
  auto again = store->Lookup("p");
  EXPECT_EQ(again->vector.data(), p->vector.data());
}

TEST(EmbeddingStoreTest, MissingTokenIsNotFound) {
  auto store = EmbeddingStore::Create({"p", "q"}, {3, 4, 1, 0}, 2);
  auto missing = store->Lookup("r");
  ASSERT_FALSE(missing.ok());
  EXPECT_TRUE(absl::IsNotFound(missing.status()));
}

TEST(EmbeddingStoreTest, CreateValidates) {
  EXPECT_FALSE(EmbeddingStore::Create({"a"}, {1, 2}, 2).ok());
  EXPECT_FALSE(EmbeddingStore::Create({"a", "b"}, {1, 2, 3}, 2).ok());
  EXPECT_FALSE(EmbeddingStore::Create({"a", "b"}, {1, 2, 3, 4}, 0).ok());
  EXPECT_FALSE(EmbeddingStore::Create({"a", "a"}, {1, 2, 3, 4}, 2).ok());
  EXPECT_FALSE(EmbeddingStore::Create({"a", "b"}, {1, 2, 0, 0}, 2).ok());
  EXPECT_FALSE(EmbeddingStore::Create({"a", "b"}, {1, 2, INFINITY, 0}, 2).ok());
}

TEST(EmbeddingStoreTest, UnitRowsHaveUnitNorm) {
  auto store = MakeGaussianStore(500, 33, 3);
  ASSERT_TRUE(store.ok());
  for (size_t i = 0; i < store->size(); ++i) {
    EXPECT_NEAR(L2Norm(store->unit_row(i)), 1.0, 1e-6);
  }
}

TEST(EmbeddingStoreTest, TextRoundTripIsExact) {
  auto store = MakeGaussianStore(200, 12, 4);
  ASSERT_TRUE(store.ok());
  for (bool header : {false, true}) {
    const std::string path = TempPath(header ? "rt_h.txt" : "rt.txt");
    ASSERT_TRUE(WriteTextEmbeddings(*store, path, header).ok());
    auto loaded = LoadTextEmbeddings(path);
    ASSERT_TRUE(loaded.ok()) << loaded.status();
    EXPECT_EQ(loaded->vocab(), store->vocab());
    for (size_t i = 0; i < store->matrix().size(); ++i) {
      ASSERT_EQ(loaded->matrix()[i], store->matrix()[i]);
    }
  }
}

TEST(EmbeddingStoreTest, BinaryCacheRoundTripAndStaleness) {
  auto store = MakeGaussianStore(50, 6, 5);
  const std::string text = TempPath("cache_src.txt");
  const std::string cache = TempPath("cache.bin");
  std::remove(cache.c_str());
  ASSERT_TRUE(WriteTextEmbeddings(*store, text).ok());

  auto first = LoadEmbeddingsWithCache(text, cache);
  ASSERT_TRUE(first.ok()) << first.status();
  const uint64_t checksum = *FileChecksum(text);
  auto cached = ReadBinaryCache(cache, checksum);
  ASSERT_TRUE(cached.ok()) << cached.status();
  EXPECT_EQ(cached->vocab(), store->vocab());
  EXPECT_TRUE(std::equal(cached->matrix().begin(), cached->matrix().end(),
                         store->matrix().begin()));
  EXPECT_FALSE(ReadBinaryCache(cache, checksum + 1).ok());

  // Editing the source invalidates the cache.
  {
    std::ofstream out(text, std::ios::app);
    out << "extra 1 1 1 1 1 1\n";
  }
  auto second = LoadEmbeddingsWithCache(text, cache);
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(second->size(), 51u);

  LoadOptions lower;
  lower.lowercase = true;
  auto third = LoadEmbeddingsWithCache(text, cache, lower);
  ASSERT_TRUE(third.ok());
  EXPECT_FALSE(ReadBinaryCache(cache, *FileChecksum(text)).ok());
}

TEST(EmbeddingStoreTest, CorruptCacheIsRejected) {
  const std::string cache = TempPath("garbage.bin");
  {
    std::ofstream out(cache, std::ios::binary);
    out << "not a cache";
  }
  EXPECT_FALSE(ReadBinaryCache(cache, 0).ok());
  EXPECT_FALSE(LoadTextEmbeddings(TempPath("does_not_exist.txt")).ok());
}

}  // namespace
}  // namespace stamp
