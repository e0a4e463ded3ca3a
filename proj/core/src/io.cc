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

#include "bper/io.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace bper {

namespace {

constexpr std::string_view kEmbeddingMagic = "BPEREMB1";
constexpr std::string_view kCheckpointHeader = "bper-checkpoint 1";

void PutU32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t pos) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + b]))
         << (8 * b);
  }
  return v;
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteAll(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << bytes;
}

}  // namespace

std::string EncodeEmbeddingFile(const EmbeddingFile& file) {
  std::string out(kEmbeddingMagic);
  PutU32(out, static_cast<std::uint32_t>(file.rows.rows()));
  PutU32(out, static_cast<std::uint32_t>(file.rows.cols()));
  PutU32(out, static_cast<std::uint32_t>(file.tag.size()));
  out += file.tag;
  for (double x : file.rows.data()) {
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  }
  return out;
}

void WriteEmbeddingFile(const std::string& path, const EmbeddingFile& file) {
  WriteAll(path, EncodeEmbeddingFile(file));
}

EmbeddingFile DecodeEmbeddingFile(std::string_view bytes) {
  const std::size_t header = kEmbeddingMagic.size() + 12;
  if (bytes.size() < header) throw DataError("embedding file truncated");
  if (bytes.substr(0, kEmbeddingMagic.size()) != kEmbeddingMagic) {
    throw DataError("embedding file has bad magic");
  }
  std::size_t pos = kEmbeddingMagic.size();
  std::uint32_t count = GetU32(bytes, pos);
  std::uint32_t dim = GetU32(bytes, pos + 4);
  std::uint32_t tag_len = GetU32(bytes, pos + 8);
  pos = header;
  if (bytes.size() < pos + tag_len) throw DataError("embedding file truncated");
  EmbeddingFile file;
  file.tag = std::string(bytes.substr(pos, tag_len));
  pos += tag_len;
  const std::size_t payload = static_cast<std::size_t>(count) * dim * 4;
  if (bytes.size() < pos + payload) {
    throw DataError("embedding file truncated: expected " +
                    std::to_string(count) + " rows of " +
                    std::to_string(dim) + " floats");
  }
  if (bytes.size() > pos + payload) {
    throw DataError("embedding file has trailing bytes");
  }
  file.rows = Matrix(count, dim);
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t k = 0; k < dim; ++k) {
      float v = std::bit_cast<float>(GetU32(bytes, pos));
      pos += 4;
      if (!std::isfinite(v)) {
        throw DataError("embedding row " + std::to_string(r) +
                        " has a non-finite value");
      }
      file.rows(r, k) = v;
    }
  }
  return file;
}

EmbeddingFile ReadEmbeddingFile(const std::string& path) {
  return DecodeEmbeddingFile(ReadAll(path));
}

std::string DumpEmbeddingText(const EmbeddingFile& file) {
  std::string out = "# count=" + std::to_string(file.rows.rows()) +
                    " dim=" + std::to_string(file.rows.cols()) +
                    " tag=" + file.tag + "\n";
  char buf[32];
  for (std::size_t r = 0; r < file.rows.rows(); ++r) {
    out += std::to_string(r);
    for (double x : file.rows.row(r)) {
      std::snprintf(buf, sizeof(buf), "\t%.9g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable LoadEmbeddingTable(const std::string& path,
                                  std::size_t num_explanations) {
  EmbeddingFile file = ReadEmbeddingFile(path);
  if (file.rows.rows() != num_explanations) {
    throw DataError("embedding file covers " +
                    std::to_string(file.rows.rows()) +
                    " explanations, dataset has " +
                    std::to_string(num_explanations));
  }
  EmbeddingTable table;
  table.raw = std::move(file.rows);
  table.tag = std::move(file.tag);
  return table;
}

namespace {

void PutTensor(std::string& out, const std::string& name, const Matrix& m) {
  out += "tensor " + name + " " + std::to_string(m.rows()) + " " +
         std::to_string(m.cols()) + "\n";
  char buf[40];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), c == 0 ? "%.17g" : " %.17g", m(r, c));
      out += buf;
    }
    out += '\n';
  }
}

Matrix ColumnOf(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  m.data() = v;
  return m;
}

void PutFactors(std::string& out, const FactorParams& fp) {
  PutTensor(out, "P", fp.user);
  PutTensor(out, "Q", fp.item);
  PutTensor(out, "OU", fp.expl_user);
  PutTensor(out, "OI", fp.expl_item);
  PutTensor(out, "bU", ColumnOf(fp.expl_user_bias));
  PutTensor(out, "bI", ColumnOf(fp.expl_item_bias));
  PutTensor(out, "b", ColumnOf(fp.item_bias));
}

using TensorMap = std::map<std::string, Matrix>;

const Matrix& Take(const TensorMap& t, const std::string& name) {
  auto it = t.find(name);
  if (it == t.end()) throw DataError("checkpoint lacks tensor " + name);
  return it->second;
}

std::vector<double> TakeVector(const TensorMap& t, const std::string& name) {
  const Matrix& m = Take(t, name);
  if (m.cols() != 1 && m.rows() != 0) {
    throw DataError("checkpoint tensor " + name + " must be a column");
  }
  return m.data();
}

FactorParams TakeFactors(const TensorMap& t) {
  return {Take(t, "P"),       Take(t, "Q"),       Take(t, "OU"),
          Take(t, "OI"),      TakeVector(t, "bU"), TakeVector(t, "bI"),
          TakeVector(t, "b")};
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  std::string out(kCheckpointHeader);
  out += "\nmodel " + ckpt.model + "\n";
  if (const auto* fp = std::get_if<FactorParams>(&ckpt.params)) {
    out += "params factor\n";
    PutFactors(out, *fp);
  } else if (const auto* cd = std::get_if<CDParams>(&ckpt.params)) {
    out += "params cd\n";
    PutTensor(out, "P", cd->user);
    PutTensor(out, "Q", cd->item);
    PutTensor(out, "O", cd->expl);
  } else {
    const auto& bp = std::get<BperPlusParams>(ckpt.params);
    out += "params bper+\n";
    out += "tag " + bp.embedding.tag + "\n";
    PutFactors(out, bp.factors);
    PutTensor(out, "EmbRaw", bp.embedding.raw);
    PutTensor(out, "W", bp.embedding.weight);
    PutTensor(out, "c", ColumnOf(bp.embedding.bias));
  }
  out += "end\n";
  return out;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  WriteAll(path, EncodeCheckpoint(ckpt));
}

Checkpoint DecodeCheckpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointHeader) {
    throw DataError("not a bper checkpoint (bad header)");
  }
  Checkpoint ckpt;
  std::string kind, tag;
  TensorMap tensors;
  bool ended = false;
  std::string word;
  while (in >> word) {
    if (word == "model") {
      in >> ckpt.model;
    } else if (word == "params") {
      in >> kind;
    } else if (word == "tag") {
      std::getline(in, tag);
      if (!tag.empty() && tag.front() == ' ') tag.erase(0, 1);
    } else if (word == "tensor") {
      std::string name;
      std::size_t rows = 0, cols = 0;
      if (!(in >> name >> rows >> cols)) {
        throw DataError("checkpoint: malformed tensor header");
      }
      Matrix m(rows, cols);
      for (double& x : m.data()) {
        std::string token;
        if (!(in >> token)) throw DataError("checkpoint truncated in " + name);
        x = std::strtod(token.c_str(), nullptr);
      }
      tensors[name] = std::move(m);
    } else if (word == "end") {
      ended = true;
      break;
    } else {
      throw DataError("checkpoint: unexpected token " + word);
    }
  }
  if (!ended) throw DataError("checkpoint truncated (no end marker)");

  if (kind == "factor") {
    ckpt.params = TakeFactors(tensors);
  } else if (kind == "cd") {
    ckpt.params = CDParams{Take(tensors, "P"), Take(tensors, "Q"),
                           Take(tensors, "O")};
  } else if (kind == "bper+") {
    BperPlusParams bp;
    bp.factors = TakeFactors(tensors);
    bp.embedding.raw = Take(tensors, "EmbRaw");
    bp.embedding.weight = Take(tensors, "W");
    bp.embedding.bias = TakeVector(tensors, "c");
    bp.embedding.tag = tag;
    ckpt.params = std::move(bp);
  } else {
    throw DataError("checkpoint: unknown params kind '" + kind + "'");
  }
  return ckpt;
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return DecodeCheckpoint(ReadAll(path));
}

}  // namespace bper
