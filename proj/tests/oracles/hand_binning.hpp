#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

// Counts per window [k w, (k+1) w) by walking every window from the first
// occupied one to the last; returns (first window start, counts).
inline std::pair<std::int64_t, std::vector<std::int64_t>> bin(const std::vector<std::int64_t>& times,
                                                              std::int64_t width) {
  std::map<std::int64_t, std::int64_t> by_window;
  for (auto t : times) {
    std::int64_t k = t / width;
    if (t % width != 0 && t < 0) --k;
    ++by_window[k];
  }
  const std::int64_t first = by_window.begin()->first;
  const std::int64_t last = by_window.rbegin()->first;
  std::vector<std::int64_t> counts;
  for (std::int64_t k = first; k <= last; ++k) {
    auto it = by_window.find(k);
    counts.push_back(it == by_window.end() ? 0 : it->second);
  }
  return {first * width, counts};
}

}  // namespace oracle
