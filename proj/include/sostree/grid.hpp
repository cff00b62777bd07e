#ifndef SOSTREE_GRID_HPP
#define SOSTREE_GRID_HPP

// Parameter-plane grids and a deterministic block-parallel row driver used by
// the scanning front ends.

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sostree {

// Rectangular grid over (theta, theta1), endpoints inclusive, linear or
// logarithmic spacing. Row-major with theta as the outer (row) axis.
struct GridSpec {
    double theta_min, theta_max;
    int theta_n;
    double theta1_min, theta1_max;
    int theta1_n;
    bool log_spacing = false;

    void validate() const {
        if (theta_n < 2 || theta1_n < 2)
            throw std::invalid_argument("GridSpec: need at least 2 points per axis");
        if (!(theta_min > 0.0) || !(theta1_min > 0.0))
            throw std::invalid_argument("GridSpec: ranges must be positive");
        if (!(theta_max > theta_min) || !(theta1_max > theta1_min))
            throw std::invalid_argument("GridSpec: max must exceed min on both axes");
    }

    static double point(double lo, double hi, int n, int i, bool log_spaced) {
        if (log_spaced) {
            const double l = std::log(lo), h = std::log(hi);
            return std::exp(l + (h - l) * static_cast<double>(i) / (n - 1));
        }
        return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }

    double theta_at(int i) const { return point(theta_min, theta_max, theta_n, i, log_spacing); }
    double theta1_at(int j) const {
        return point(theta1_min, theta1_max, theta1_n, j, log_spacing);
    }

    long cell_count() const { return static_cast<long>(theta_n) * theta1_n; }
};

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(row) for row = 0..rows-1 across contiguous blocks. Each row writes
// only its own output slots, so the result is identical for any worker count.
template <class Fn>
void parallel_rows(int rows, int workers, Fn&& fn) {
    workers = std::min(resolve_workers(workers), rows);
    if (workers <= 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (rows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(rows, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int r = lo; r < hi; ++r) fn(r);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace detail

} // namespace sostree

#endif
