#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sipf {

/// Worker count: an explicit request wins, otherwise hardware concurrency;
/// SIPF_THREADS in the environment caps either.
int resolve_threads(int requested);

/// Runs fn(block) for block in [0, blocks). Work is handed out dynamically but
/// every block writes only its own output slot, so results never depend on
/// the thread count.
void parallel_for(std::size_t blocks, int threads, const std::function<void(std::size_t)>& fn);

/// Pairwise tree reduction of equally sized buffers in fixed index order:
/// ((b0+b1)+(b2+b3))+... The result lands in parts[0].
template <typename T>
void tree_reduce(std::vector<std::vector<T>>& parts) {
  for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) {
      auto& dst = parts[i];
      const auto& src = parts[i + stride];
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
  }
}

}  // namespace sipf
