#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace kd {

// FNV-1a over a byte range; used for checkpoint/record-store content hashes
// and pinned pixel checksums.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

// Hash of an entire file's contents. Throws Error(io) if unreadable.
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace kd
