#ifndef SOSTREE_LATTICE_HPP
#define SOSTREE_LATTICE_HPP

// Finite binary Cayley tree, the three-state SOS Hamiltonian with competing
// nearest-neighbour / one-level next-nearest-neighbour interactions, and an
// exact brute-force partition-function oracle. The oracle is the ground truth
// every recursion in this library is checked against.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sostree/errors.hpp"
#include "sostree/params.hpp"

namespace sostree {

// Single spin value from {0, 1, 2}.
class Spin {
public:
    explicit Spin(int value) {
        if (value < 0 || value > 2)
            throw std::invalid_argument("Spin: value must be in {0,1,2}, got " +
                                        std::to_string(value));
        v_ = static_cast<std::int8_t>(value);
    }
    int value() const { return v_; }
    bool operator==(const Spin& o) const = default;

private:
    std::int8_t v_;
};

// Semi-infinite binary tree truncated at a given depth, root has exactly
// k = 2 successors. Vertices are numbered in level order: root is 0 and the
// successors of x are 2x+1 and 2x+2, so level m occupies [2^m - 1, 2^(m+1) - 2].
// Sibling pairs (the one-level next-nearest neighbours) are the two successors
// of a common parent: they sit on the same level at graph distance 2.
class FiniteTree {
public:
    static constexpr int order = 2;
    static constexpr int max_depth = 12;

    explicit FiniteTree(int depth) : depth_(depth) {
        if (depth < 0 || depth > max_depth)
            throw std::invalid_argument("FiniteTree: depth must be in [0, " +
                                        std::to_string(max_depth) + "], got " +
                                        std::to_string(depth));
        n_vertices_ = (std::size_t{1} << (depth + 1)) - 1;
        const std::size_t n_internal = n_vertices_ / 2; // vertices with successors
        edges_.reserve(2 * n_internal);
        sibling_pairs_.reserve(n_internal);
        for (std::uint32_t x = 0; x < n_internal; ++x) {
            edges_.emplace_back(x, 2 * x + 1);
            edges_.emplace_back(x, 2 * x + 2);
            sibling_pairs_.emplace_back(2 * x + 1, 2 * x + 2);
        }
    }

    int depth() const { return depth_; }
    std::size_t vertex_count() const { return n_vertices_; }
    std::size_t edge_count() const { return edges_.size(); }

    std::size_t level_begin(int m) const { return (std::size_t{1} << m) - 1; }
    std::size_t level_size(int m) const { return std::size_t{1} << m; }

    int level_of(std::size_t x) const {
        int m = 0;
        while (x >= level_begin(m + 1)) ++m;
        return m;
    }

    std::size_t parent(std::size_t x) const {
        if (x == 0 || x >= n_vertices_)
            throw std::invalid_argument("FiniteTree::parent: vertex " + std::to_string(x) +
                                        " has no parent");
        return (x - 1) / 2;
    }

    bool is_leaf(std::size_t x) const { return 2 * x + 1 >= n_vertices_; }

    std::array<std::size_t, 2> successors(std::size_t x) const {
        if (is_leaf(x))
            throw std::invalid_argument("FiniteTree::successors: vertex " + std::to_string(x) +
                                        " is a leaf");
        return {2 * x + 1, 2 * x + 2};
    }

    // Parent-child edges in deterministic order.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }

    // One-level next-nearest-neighbour pairs, one per non-leaf vertex.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& sibling_pairs() const {
        return sibling_pairs_;
    }

private:
    int depth_;
    std::size_t n_vertices_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sibling_pairs_;
};

inline FiniteTree build_tree(int depth) { return FiniteTree(depth); }

// Spin assignment on the vertices of a finite tree, indexed by vertex id.
class Configuration {
public:
    explicit Configuration(std::vector<Spin> spins) : spins_(std::move(spins)) {}

    static Configuration constant(const FiniteTree& tree, Spin s) {
        return Configuration(std::vector<Spin>(tree.vertex_count(), s));
    }

    std::size_t size() const { return spins_.size(); }

    Spin spin(std::size_t x) const {
        if (x >= spins_.size())
            throw std::invalid_argument("Configuration: no spin assigned to vertex " +
                                        std::to_string(x));
        return spins_[x];
    }

private:
    std::vector<Spin> spins_;
};

// H = -J * sum over edges |s(x)-s(y)| - J1 * sum over sibling pairs |s(x)-s(y)|,
// free boundary (no term for pairs leaving the volume).
inline double energy(const Configuration& config, const FiniteTree& tree,
                     const CouplingParams& params) {
    if (config.size() < tree.vertex_count())
        throw std::invalid_argument("energy: no spin assigned to vertex " +
                                    std::to_string(config.size()));
    long nn = 0, nnn = 0;
    for (const auto& [a, b] : tree.edges())
        nn += std::abs(config.spin(a).value() - config.spin(b).value());
    for (const auto& [a, b] : tree.sibling_pairs())
        nnn += std::abs(config.spin(a).value() - config.spin(b).value());
    return -params.J * static_cast<double>(nn) - params.J1 * static_cast<double>(nnn);
}

// The triple (Z0, Z1, Z2) of root-conditioned partition functions at some depth.
struct PartitionVector {
    double z0;
    double z1;
    double z2;
    int depth;

    double total() const { return z0 + z1 + z2; }
    RootRatios ratios() const { return RootRatios(z1 / z0, z2 / z0); }
};

// Z_i as an exact bivariate polynomial: coefficient (i, a, b) counts the
// configurations with root spin i whose nearest-neighbour differences sum to a
// and whose sibling-pair differences sum to b. Each such configuration carries
// Boltzmann weight theta^a * theta1^b, so Z_i(theta, theta1) is recovered by
// evaluation and is exact in any arithmetic the caller supplies.
class PartitionPolynomial {
public:
    PartitionPolynomial(int depth, std::size_t nn_powers, std::size_t nnn_powers)
        : depth_(depth), na_(nn_powers), nb_(nnn_powers), counts_(3 * na_ * nb_, 0) {}

    int depth() const { return depth_; }
    std::size_t nn_power_count() const { return na_; }
    std::size_t nnn_power_count() const { return nb_; }

    std::uint64_t count(int root_spin, std::size_t a, std::size_t b) const {
        return counts_[index(root_spin, a, b)];
    }

    void add(int root_spin, std::size_t a, std::size_t b) { ++counts_[index(root_spin, a, b)]; }

    std::uint64_t total_configurations() const {
        std::uint64_t t = 0;
        for (std::uint64_t c : counts_) t += c;
        return t;
    }

    // Works for double as well as exact rational scalars.
    template <class T>
    std::array<T, 3> evaluate_as(const T& theta, const T& theta1) const {
        std::vector<T> tp(na_), t1p(nb_);
        tp[0] = T(1);
        for (std::size_t a = 1; a < na_; ++a) tp[a] = tp[a - 1] * theta;
        t1p[0] = T(1);
        for (std::size_t b = 1; b < nb_; ++b) t1p[b] = t1p[b - 1] * theta1;
        std::array<T, 3> z{T(0), T(0), T(0)};
        for (int i = 0; i < 3; ++i)
            for (std::size_t a = 0; a < na_; ++a)
                for (std::size_t b = 0; b < nb_; ++b) {
                    const std::uint64_t c = counts_[index(i, a, b)];
                    if (c != 0) z[i] += T(c) * tp[a] * t1p[b];
                }
        return z;
    }

    PartitionVector evaluate(const ThetaParams& p) const {
        const auto z = evaluate_as<double>(p.theta, p.theta1);
        return PartitionVector{z[0], z[1], z[2], depth_};
    }

private:
    std::size_t index(int i, std::size_t a, std::size_t b) const {
        return (static_cast<std::size_t>(i) * na_ + a) * nb_ + b;
    }

    int depth_;
    std::size_t na_;
    std::size_t nb_;
    std::vector<std::uint64_t> counts_;
};

namespace detail {

// 3^|V| <= 10^8 keeps full enumeration at desk scale.
inline constexpr double kEnumerationBudget = 1e8;

inline bool enumeration_feasible(std::size_t n_vertices) {
    double total = 1.0;
    for (std::size_t i = 0; i < n_vertices; ++i) {
        total *= 3.0;
        if (total > kEnumerationBudget) return false;
    }
    return true;
}

} // namespace detail

// Full enumeration of all 3^|V| configurations, grouped by root spin and
// total (nn, nnn) level differences. Deterministic integer counting.
inline PartitionPolynomial enumerate_partition_polynomial(const FiniteTree& tree) {
    const std::size_t n = tree.vertex_count();
    if (!detail::enumeration_feasible(n))
        throw infeasible_error("oracle infeasible: 3^" + std::to_string(n) +
                               " configurations exceed the enumeration guard (depth " +
                               std::to_string(tree.depth()) + ")");

    const auto& edges = tree.edges();
    const auto& pairs = tree.sibling_pairs();
    PartitionPolynomial poly(tree.depth(), 2 * edges.size() + 1, 2 * pairs.size() + 1);

    std::vector<std::int8_t> s(n, 0);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;

    for (std::uint64_t cfg = 0;; ++cfg) {
        std::size_t a = 0, b = 0;
        for (const auto& [x, y] : edges) a += static_cast<std::size_t>(std::abs(s[x] - s[y]));
        for (const auto& [x, y] : pairs) b += static_cast<std::size_t>(std::abs(s[x] - s[y]));
        poly.add(s[0], a, b);

        if (cfg + 1 == total) break;
        // base-3 odometer, least significant digit at the last vertex
        std::size_t d = n - 1;
        while (true) {
            if (s[d] < 2) {
                ++s[d];
                break;
            }
            s[d] = 0;
            --d; // never underflows before cfg reaches total-1
        }
    }
    return poly;
}

// Ground-truth partition vector by full enumeration. Guarded; see
// partition_vector_recursive for larger depths.
inline PartitionVector partition_vector_bruteforce(int depth, const ThetaParams& params) {
    if (depth < 1)
        throw std::invalid_argument("partition_vector_bruteforce: depth must be >= 1");
    return enumerate_partition_polynomial(build_tree(depth)).evaluate(params);
}

// One level of the exact Z-recursion. Weights come straight from the
// Hamiltonian: child spins (j, m) under root spin i contribute
// theta^(|i-j|+|i-m|) * theta1^(|j-m|) * Z_j * Z_m.
inline PartitionVector recursion_step_z(const PartitionVector& z, const ThetaParams& p) {
    double tp[5] = {1, p.theta, p.theta * p.theta, 0, 0};
    tp[3] = tp[2] * p.theta;
    tp[4] = tp[3] * p.theta;
    const double t1p[3] = {1, p.theta1, p.theta1 * p.theta1};
    const double zin[3] = {z.z0, z.z1, z.z2};
    double out[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int m = 0; m < 3; ++m)
                out[i] += tp[std::abs(i - j) + std::abs(i - m)] * t1p[std::abs(j - m)] *
                          zin[j] * zin[m];
    for (double zi : out)
        if (!std::isfinite(zi))
            throw std::overflow_error("recursion_step_z: partition function overflowed "
                                      "(magnitude beyond double range)");
    return PartitionVector{out[0], out[1], out[2], z.depth + 1};
}

// Partition vector by iterating the Z-recursion from the free-boundary seed
// Z_i = 1. Not an oracle: agrees with enumeration only because the recursion
// is verified against it at small depth.
inline PartitionVector partition_vector_recursive(int depth, const ThetaParams& params) {
    if (depth < 0 || depth > 64)
        throw std::invalid_argument("partition_vector_recursive: depth must be in [0, 64]");
    PartitionVector z{1.0, 1.0, 1.0, 0};
    for (int n = 0; n < depth; ++n) z = recursion_step_z(z, params);
    return z;
}

// Root-spin marginal (p0, p1, p2) = (1, u, v) / (1 + u + v).
inline std::array<double, 3> root_marginal(const RootRatios& r) {
    const double s = 1.0 + r.u + r.v;
    return {1.0 / s, r.u / s, r.v / s};
}

} // namespace sostree

#endif
