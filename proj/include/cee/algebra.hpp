#pragma once

#include "cee/tpm.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cee {

/// Result of splitting a TPM into independent factors.
struct Factorization {
  std::vector<NodeSet> groups;  // disjoint, cover all elements, sorted by
                                // lowest member
  std::vector<Tpm> factors;     // marginal TPM per group, elements compacted
  double residual = 0.0;        // max-row total variation vs. the product
  // min bipartition residual, reported when nothing splits (n in [2, 8])
  std::optional<double> best_split_residual;
};

/// Tensor product; `a`'s elements occupy the low bits of the combined system.
Tpm tensor_product(const Tpm& a, const Tpm& b, int max_elements = 12);

/// Marginal TPM of a group of elements: inputs outside the group uniformly
/// averaged, outputs outside the group summed out.
Tpm group_marginal(const Tpm& tpm, NodeSet group);

/// Max over rows of the total-variation distance between the TPM and the
/// product of its group marginals. `groups` must partition the element set.
double product_residual(const Tpm& tpm, std::span<const NodeSet> groups);

/// Minimum of product_residual over all two-group splits (n >= 2).
double min_bipartition_residual(const Tpm& tpm);

/// Finest grouping whose marginal product reproduces the TPM within epsilon.
///
/// Elements are joined when a pairwise dependency test fails (direct
/// influence of one element's present on the other's next, or correlated
/// next-states in some row, beyond epsilon); groups are the connected
/// components, verified against the final residual. If the verification
/// fails, groups are merged greedily (n <= 10) until the residual fits,
/// ending at the trivial single group whose residual is zero by
/// construction.
Factorization factorize(const Tpm& tpm, double epsilon);

}  // namespace cee
