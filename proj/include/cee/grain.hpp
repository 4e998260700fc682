#pragma once

#include "cee/system.hpp"
#include "cee/tpm.hpp"

#include <span>
#include <vector>

namespace cee {

/// Spatiotemporal coarse-graining: a partition of micro elements into macro
/// elements, a monotone threshold map per macro element (macro bit = 1 iff
/// the group contains at least `threshold` ones), and a temporal stride.
struct CoarseGraining {
  std::vector<NodeSet> groups;  // partition, sorted by lowest member
  std::vector<int> thresholds;  // per group, in [1, |group|]
  int stride = 1;

  static CoarseGraining trivial(int n);
};

/// k-step TPM (matrix power). k must be >= 1.
Tpm temporal_grain(const Tpm& tpm, int k);

/// Stationary row vector by damped power iteration (the damping keeps
/// periodic chains convergent without moving the fixed point).
std::vector<double> stationary_distribution(const Tpm& tpm, double tol = 1e-12,
                                            size_t max_iter = 100000);

/// Macro state of a micro state under the grain's threshold maps.
SystemState map_state(const CoarseGraining& grain, SystemState micro);

/// Macro TPM over the grain's macro states: rows are weighted averages over
/// the micro states mapping to each macro state (uniform weights by default,
/// or the supplied stationary weights), columns total probabilities of the
/// micro successors in each macro class.
Tpm coarse_grain(const Tpm& tpm, const CoarseGraining& grain,
                 std::span<const double> stationary_weights = {});

struct GrainBudget {
  std::vector<int> strides{1, 2, 4};
  size_t max_grains = 20000;
  int micro_limit = 8;  // refuse exhaustive search above this many elements
};

struct GrainResult {
  CoarseGraining grain;
  double big_phi = 0.0;
};

struct GrainSearchResult {
  std::vector<GrainResult> maximal;  // grains within 1e-9 of the best phi
  double max_phi = 0.0;
  size_t evaluated = 0;
  bool partial = false;  // enumeration hit budget.max_grains
};

/// Enumerates every grain within the budget (element partitions x threshold
/// assignments x strides, canonical order), scores each by the maximal
/// complex big_phi of its macro TPM at the mapped state, and returns the full
/// argmax set. Deterministic given the budget.
GrainSearchResult grain_search(const Tpm& tpm, SystemState state,
                               const GrainBudget& budget = {},
                               const PhiOptions& options = {});

/// All set partitions of n elements in canonical (restricted growth) order.
std::vector<std::vector<NodeSet>> enumerate_partitions(int n);

}  // namespace cee
