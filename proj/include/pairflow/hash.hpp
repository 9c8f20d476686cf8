#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>

namespace pairflow {

// FNV-1a 64-bit; stable fingerprint for checkpoints/manifests (not crypto).
class Fnv1a {
 public:
  void update(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ull;
    }
  }
  template <typename T>
  void update_value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    update(&v, sizeof(T));
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

std::uint64_t fnv1a_file(const std::string& path);

}  // namespace pairflow
