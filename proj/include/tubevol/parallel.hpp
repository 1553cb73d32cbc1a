#ifndef TUBEVOL_PARALLEL_HPP
#define TUBEVOL_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace tubevol {

// Runs fn(begin, end, chunk_id) over a partition of [0, n). Callers must keep
// per-index work independent of the partition so any thread count gives the
// same result.
template <typename Fn>
void parallel_chunks(std::uint64_t n, int threads, Fn&& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }
  if (n == 0) return;
  const std::uint64_t t = std::min<std::uint64_t>(threads, n);
  if (t <= 1) {
    fn(std::uint64_t{0}, n, 0);
    return;
  }
  const std::uint64_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::uint64_t c = 0; c < t; ++c) {
    const std::uint64_t b = c * chunk;
    const std::uint64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e, c] { fn(b, e, static_cast<int>(c)); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tubevol

#endif  // TUBEVOL_PARALLEL_HPP
