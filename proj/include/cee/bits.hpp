#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace cee {

/// Bitmask over system elements; element i corresponds to bit i.
using NodeSet = std::uint32_t;

/// State index over a set of binary elements; element 0 is the
/// least-significant bit.
using State = std::uint32_t;

inline constexpr int kMaxElements = 16;

namespace bits {

inline int popcount(NodeSet m) { return std::popcount(m); }

inline bool contains(NodeSet m, int element) { return (m >> element) & 1u; }

inline bool is_subset(NodeSet a, NodeSet b) { return (a & ~b) == 0u; }

inline int lowest(NodeSet m) { return std::countr_zero(m); }

inline State num_states(int k) { return State{1} << k; }

/// Calls fn(element) for each set bit, ascending.
template <typename Fn>
inline void for_each(NodeSet m, Fn&& fn) {
  while (m) {
    fn(std::countr_zero(m));
    m &= m - 1;
  }
}

inline std::vector<int> to_elements(NodeSet m) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(popcount(m)));
  for_each(m, [&](int e) { out.push_back(e); });
  return out;
}

/// Compacts the bits of `state` selected by `mask` into the low bits.
inline State extract(State state, NodeSet mask) {
  State out = 0;
  int k = 0;
  while (mask) {
    int i = std::countr_zero(mask);
    out |= ((state >> i) & 1u) << k;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

/// Scatters the low bits of `compact` into the positions selected by `mask`.
inline State deposit(State compact, NodeSet mask) {
  State out = 0;
  int k = 0;
  while (mask) {
    int i = std::countr_zero(mask);
    out |= ((compact >> k) & 1u) << i;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

/// Next submask of `mask` after `cur` in ascending numeric order; wraps to 0
/// after `mask` itself.
inline NodeSet next_submask(NodeSet cur, NodeSet mask) {
  return (cur - mask) & mask;
}

/// Visits every submask of `mask` (including 0 and `mask`) ascending.
template <typename Fn>
inline void for_each_submask(NodeSet mask, Fn&& fn) {
  NodeSet s = 0;
  while (true) {
    fn(s);
    if (s == mask) break;
    s = next_submask(s, mask);
  }
}

}  // namespace bits
}  // namespace cee
