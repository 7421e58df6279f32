// Index-ordered parallel map over [0, count).
#pragma once

#include <algorithm>
#include <future>
#include <type_traits>
#include <vector>

namespace whichway {

/// out[r] = fn(r). Runs up to `threads` calls at a time; the result order
/// never depends on completion order.
template <typename Fn>
auto map_indexed(int count, int threads, Fn fn) -> std::vector<std::invoke_result_t<Fn&, int>> {
  using T = std::invoke_result_t<Fn&, int>;
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  if (threads <= 1) {
    for (int r = 0; r < count; ++r) out.push_back(fn(r));
    return out;
  }
  for (int begin = 0; begin < count; begin += threads) {
    std::vector<std::future<T>> batch;
    const int end = std::min(count, begin + threads);
    for (int r = begin; r < end; ++r) batch.push_back(std::async(std::launch::async, fn, r));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace whichway
