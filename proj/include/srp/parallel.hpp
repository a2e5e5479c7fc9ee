#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace srp {

// Splits [0, n) into `jobs` contiguous chunks, evaluates body(begin, end) for
// each on its own thread and folds the results with merge in chunk order.
// Callers keep results independent of the chunking by deriving randomness
// from the item index and merging symmetrically.
template <class R, class Body, class Merge>
R parallel_reduce(std::size_t n, int jobs, R init, Body body, Merge merge) {
  const std::size_t k = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n));
  if (k == 1) {
    merge(init, body(std::size_t{0}, n));
    return init;
  }
  std::vector<R> parts(k);
  std::vector<std::exception_ptr> errors(k);
  std::vector<std::thread> threads;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t lo = n * c / k, hi = n * (c + 1) / k;
    threads.emplace_back([&, c, lo, hi] {
      try {
        parts[c] = body(lo, hi);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& p : parts) merge(init, std::move(p));
  return init;
}

}  // namespace srp
