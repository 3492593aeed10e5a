#pragma once

// Binary per-video embedding container.
//
//   offset  size  field
//   0       4     magic "CTEM"
//   4       2     format version (u16, little-endian)
//   6       4     embedding dimension D (u32, little-endian)
//   10      8     observation count (u64, little-endian)
//   18      ...   records: frame_index (u32) followed by D float32, all little-endian
//
// Records are addressed by byte offset so other files can reference them
// without inlining the vectors.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "catana/core/error.hpp"
#include "catana/core/types.hpp"

namespace catana {

inline constexpr std::array<char, 4> kEmbeddingMagic{'C', 'T', 'E', 'M'};
inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 18;

struct EmbeddingFile {
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> frame_indices;
  std::vector<float> values;  // row-major, frame_indices.size() x dim

  std::size_t size() const { return frame_indices.size(); }
  std::span<const float> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  std::uint64_t record_offset(std::size_t i) const {
    return kEmbeddingHeaderSize + i * (4 + std::uint64_t{dim} * 4);
  }
  // Inverse of record_offset; throws on offsets that do not start a record.
  std::size_t record_index(std::uint64_t offset) const {
    const std::uint64_t stride = 4 + std::uint64_t{dim} * 4;
    if (offset < kEmbeddingHeaderSize || (offset - kEmbeddingHeaderSize) % stride != 0 ||
        (offset - kEmbeddingHeaderSize) / stride >= size()) {
      throw ContractError("offset " + std::to_string(offset) + " is not a record boundary");
    }
    return static_cast<std::size_t>((offset - kEmbeddingHeaderSize) / stride);
  }

  bool operator==(const EmbeddingFile&) const = default;
};

namespace detail {

template <typename U>
void put_le(std::vector<char>& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename U>
U get_le(const char* p) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return value;
}

}  // namespace detail

inline std::vector<char> encode_embeddings(const EmbeddingFile& file) {
  if (file.values.size() != file.frame_indices.size() * file.dim) {
    throw ContractError("embedding value count does not match count x dim");
  }
  std::vector<char> out;
  out.reserve(kEmbeddingHeaderSize + file.size() * (4 + 4 * std::size_t{file.dim}));
  for (char c : kEmbeddingMagic) out.push_back(c);
  detail::put_le<std::uint16_t>(out, kEmbeddingFormatVersion);
  detail::put_le<std::uint32_t>(out, file.dim);
  detail::put_le<std::uint64_t>(out, file.size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    detail::put_le<std::uint32_t>(out, file.frame_indices[i]);
    for (float v : file.row(i)) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

inline EmbeddingFile decode_embeddings(std::span<const char> bytes) {
  if (bytes.size() < kEmbeddingHeaderSize ||
      std::memcmp(bytes.data(), kEmbeddingMagic.data(), 4) != 0) {
    throw ContractError("not an embedding container (bad magic)");
  }
  const auto version = detail::get_le<std::uint16_t>(bytes.data() + 4);
  if (version != kEmbeddingFormatVersion) {
    throw ContractError("unsupported embedding container version " + std::to_string(version));
  }
  EmbeddingFile file;
  file.dim = detail::get_le<std::uint32_t>(bytes.data() + 6);
  const auto count = detail::get_le<std::uint64_t>(bytes.data() + 10);
  const std::uint64_t stride = 4 + std::uint64_t{file.dim} * 4;
  if (count > (bytes.size() - kEmbeddingHeaderSize) / stride ||
      bytes.size() != kEmbeddingHeaderSize + count * stride) {
    throw ContractError("embedding container size does not match its header");
  }
  file.frame_indices.reserve(count);
  file.values.reserve(count * file.dim);
  const char* p = bytes.data() + kEmbeddingHeaderSize;
  for (std::uint64_t i = 0; i < count; ++i) {
    file.frame_indices.push_back(detail::get_le<std::uint32_t>(p));
    p += 4;
    for (std::uint32_t d = 0; d < file.dim; ++d, p += 4) {
      file.values.push_back(std::bit_cast<float>(detail::get_le<std::uint32_t>(p)));
    }
  }
  return file;
}

inline void write_embeddings(const std::filesystem::path& path, const EmbeddingFile& file) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto bytes = encode_embeddings(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline EmbeddingFile read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_embeddings(bytes);
}

inline std::vector<FaceObservation> to_observations(const std::string& video_id,
                                                    const EmbeddingFile& file) {
  std::vector<FaceObservation> out;
  out.reserve(file.size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    const auto row = file.row(i);
    out.push_back({video_id, file.frame_indices[i], {row.begin(), row.end()}});
  }
  return out;
}

inline EmbeddingFile from_observations(std::span<const FaceObservation> obs, std::uint32_t dim) {
  EmbeddingFile file;
  file.dim = dim;
  for (const auto& o : obs) {
    if (o.embedding.size() != dim) throw ContractError("observation dimension mismatch");
    file.frame_indices.push_back(o.frame_index);
    file.values.insert(file.values.end(), o.embedding.begin(), o.embedding.end());
  }
  return file;
}

}  // namespace catana
