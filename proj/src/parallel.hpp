#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace axiflow::detail {

/// Runs fn(0..n-1) on up to `threads` workers with a fixed index-to-worker assignment.
/// Rethrows the failure with the lowest index.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](unsigned w, unsigned stride) {
    for (std::size_t i = w; i < n; i += stride) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (k == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < k; ++w) pool.emplace_back(work, w, k);
    for (auto& th : pool) th.join();
  }
  // Report the first failure in index order so runs are reproducible.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace axiflow::detail
