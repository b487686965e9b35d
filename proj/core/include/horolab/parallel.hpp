#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace horolab {

// Worker count: HOROLAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(begin, end) over a fixed partition of [0, n). The partition
// depends only on n and the chunk size, never on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t chunk = 1024);

// Pairwise summation with a fixed tree shape.
template <class T>
T pairwise_sum(const T* x, std::size_t n) {
    if (n == 0) return T{};
    if (n <= 8) {
        T s = x[0];
        for (std::size_t i = 1; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& x) {
    return pairwise_sum(x.data(), x.size());
}

}  // namespace horolab
