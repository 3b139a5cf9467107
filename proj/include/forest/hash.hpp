#pragma once

#include <cstddef>
#include <cstdint>
#include <concepts>
#include <functional>
#include <utility>
#include <vector>

namespace forest {

inline std::size_t hash_mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct VectorHash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) h = hash_mix(h, std::hash<T>{}(x));
    return h;
  }
};

struct PairHash {
  template <class A, class B, class HA = std::hash<A>, class HB = std::hash<B>>
  std::size_t operator()(const std::pair<A, B>& p) const {
    return hash_mix(HA{}(p.first), HB{}(p.second));
  }
};

template <class T>
concept HasHashMember = requires(const T& t) {
  { t.hash() } -> std::convertible_to<std::size_t>;
};

/// Hashes integers, pairs, tuples-free aggregates with a `hash()` member, and
/// vectors of any of these.
struct Hasher {
  template <class T>
  std::size_t operator()(const T& x) const {
    if constexpr (HasHashMember<T>) {
      return x.hash();
    } else {
      return std::hash<T>{}(x);
    }
  }
  template <class A, class B>
  std::size_t operator()(const std::pair<A, B>& p) const {
    return hash_mix((*this)(p.first), (*this)(p.second));
  }
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) h = hash_mix(h, (*this)(x));
    return h;
  }
};

/// 64-bit FNV-1a, used for stable input fingerprints in reports.
inline std::uint64_t fnv1a(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace forest
