#ifndef TALBOT_NUMERICS_HPP
#define TALBOT_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace talbot::numerics {

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1,1]. Cached; thread-safe.
const QuadratureRule& gauss_legendre(int n);

/// Adaptive Simpson integration to a relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 60);

/// SplitMix64 step; used to derive independent RNG streams from (seed, index).
std::uint64_t splitmix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Runs fn(i) for i in [0, n) on a small worker pool. Each index writes only
/// its own pre-allocated output slot, so results do not depend on the worker
/// count or scheduling order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace talbot::numerics

#endif
