#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

// Sharing a depth-first inclusion-tree walk among threads. Every worker
// walks the same tree; at the split depth the subtrees are dealt out
// round-robin in visiting order, and work above the split depth is
// tallied by worker 0 only. Workers never touch each other's state.

namespace permpat::detail {

class SubtreeSplit {
 public:
  SubtreeSplit(int split_depth, int worker, int workers)
      : split_depth_(split_depth), worker_(worker), workers_(workers) {}

  /// Call when about to descend into a node at `depth`.
  bool owns(int depth) {
    if (workers_ <= 1 || depth != split_depth_) return true;
    return next_++ % static_cast<std::uint64_t>(workers_) == static_cast<std::uint64_t>(worker_);
  }

  /// Whether results produced at `depth` belong to this worker.
  bool tallies(int depth) const { return workers_ <= 1 || depth >= split_depth_ || worker_ == 0; }

 private:
  int split_depth_;
  int worker_;
  int workers_;
  std::uint64_t next_ = 0;
};

/// Runs fn(worker) on `threads` threads and rethrows the first exception.
template <class Fn>
void run_workers(int threads, Fn&& fn) {
  if (threads <= 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace permpat::detail
