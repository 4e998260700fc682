#pragma once

#include <span>

namespace cee {

/// Distance used between intact and cut repertoires.
///   Emd:                 earth-mover distance with Hamming ground metric,
///                        reported in bits (default everywhere).
///   IntrinsicDifference: max_s p(s) * log2(p(s)/q(s)); not symmetric.
enum class Metric { Emd, IntrinsicDifference };

/// Exact earth-mover distance between two distributions over the same state
/// space, with ground metric = Hamming distance between state indices.
/// Both spans must have equal length. Solved as a transportation problem.
double emd_hamming(std::span<const double> p, std::span<const double> q);

/// max over states of p(s) * log2(p(s)/q(s)); zero-probability p states
/// contribute 0, and a state with p > 0, q = 0 yields +infinity.
double intrinsic_difference(std::span<const double> p,
                            std::span<const double> q);

/// Dispatch on the configured metric; `p` is the intact side.
double distribution_distance(Metric metric, std::span<const double> p,
                             std::span<const double> q);

}  // namespace cee
