#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace p3 {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

/// Domain-level rejection (bad input, violated precondition). CLI exit 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A budget (depth / states / coordinate bound) ran out before an answer
/// could be certified. CLI exit 2.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violation of an internal invariant that should be unreachable. CLI exit 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

inline void check_internal(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), seed);
}

inline std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

struct ArrayHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<VertexId, N>& a) const {
    return static_cast<std::size_t>(fnv1a64(a.data(), sizeof(VertexId) * N));
  }
};

struct VecHash {
  template <typename T>
  std::size_t operator()(const std::vector<T>& v) const {
    return static_cast<std::size_t>(
        fnv1a64(v.data(), sizeof(T) * v.size()));
  }
};

}  // namespace p3
