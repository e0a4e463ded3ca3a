// Copyright 2026 The BPER Authors.
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

// Embedding files and parameter checkpoints.
//
// Embedding file (little-endian):
//   8 bytes   magic "BPEREMB1"
//   u32       count (number of explanations)
//   u32       dim
//   u32       tag length in bytes, followed by the UTF-8 tag
//   f32 x count*dim, row-major in dense explanation order
//
// Checkpoint (text):
//   bper-checkpoint 1
//   model <name>
//   tensor <name> <rows> <cols>     followed by rows lines of cols values
//   ...
//   end
// Values are written with 17 significant digits so doubles round-trip.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "bper/matrix.h"
#include "bper/params.h"

namespace bper {

struct EmbeddingFile {
  std::string tag;
  Matrix rows;  // count x dim, values exactly representable as float
};

void WriteEmbeddingFile(const std::string& path, const EmbeddingFile& file);
std::string EncodeEmbeddingFile(const EmbeddingFile& file);
// Throws DataError on bad magic, truncation, trailing bytes or non-finite
// values (the message names the offending row).
EmbeddingFile ReadEmbeddingFile(const std::string& path);
EmbeddingFile DecodeEmbeddingFile(std::string_view bytes);
// One line per explanation: index then the values, for debugging.
std::string DumpEmbeddingText(const EmbeddingFile& file);

// Reads an embedding file and checks it covers exactly `num_explanations`.
// The projection is left empty; see InitProjection.
EmbeddingTable LoadEmbeddingTable(const std::string& path,
                                  std::size_t num_explanations);

using ModelParams = std::variant<FactorParams, CDParams, BperPlusParams>;

struct Checkpoint {
  std::string model;
  ModelParams params;
};

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
std::string EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);
Checkpoint DecodeCheckpoint(std::string_view text);

}  // namespace bper
