#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cee/metric.hpp"
#include "cee/system.hpp"
#include "cee/tpm.hpp"

// Brute-force reference implementations, written independently of the library
// paths they check: repertoires by literal filtering over all joint states,
// cut repertoires by part products, searches as plain nested loops.
namespace oracle {

using LinkSet = std::set<std::pair<int, int>>;

/// Factorized effect repertoire over `purview`, computed per element by
/// filtering the 2^n joint current states.
std::vector<double> effect_rep(const cee::Tpm& tpm, cee::NodeSet subset,
                               cee::State full_state, cee::NodeSet mechanism,
                               cee::NodeSet purview,
                               const LinkSet& severed = {});

/// Factorized cause repertoire; empty vector signals an empty cause.
std::vector<double> cause_rep(const cee::Tpm& tpm, cee::NodeSet subset,
                              cee::State full_state, cee::NodeSet mechanism,
                              cee::NodeSet purview,
                              const LinkSet& severed = {});

struct Bipartition {
  cee::NodeSet mech_a = 0, purview_a = 0, mech_b = 0, purview_b = 0;
};

struct SmallPhi {
  double phi = 0.0;
  bool empty_cause = false;
  Bipartition cut;
};

/// Minimum over bipartition cuts of distance(uncut, part-product repertoire).
SmallPhi small_phi(const cee::Tpm& tpm, cee::State full_state,
                   cee::NodeSet mechanism, cee::NodeSet purview,
                   cee::Direction direction, cee::Metric metric);

struct CorePurview {
  cee::NodeSet purview = 0;
  double phi = 0.0;
};

std::optional<CorePurview> core_purview(const cee::Tpm& tpm,
                                        cee::State full_state,
                                        cee::NodeSet mechanism,
                                        cee::Direction direction,
                                        cee::Metric metric);

struct Distinction {
  cee::NodeSet mechanism = 0;
  CorePurview cause;
  CorePurview effect;
  double phi = 0.0;
};

std::optional<Distinction> distinction(const cee::Tpm& tpm,
                                       cee::State full_state,
                                       cee::NodeSet mechanism,
                                       cee::Metric metric);

struct SystemPhi {
  double big_phi = 0.0;
  cee::NodeSet cut_from = 0, cut_to = 0;
};

SystemPhi system_phi(const cee::Tpm& tpm, cee::NodeSet subset,
                     cee::State full_state, cee::Metric metric);

struct Complex {
  cee::NodeSet elements = 0;
  double big_phi = 0.0;
};

std::vector<Complex> find_complexes(const cee::Tpm& tpm, cee::State full_state,
                                    cee::Metric metric);

/// All set partitions of n elements (each partition sorted by lowest member).
std::vector<std::vector<cee::NodeSet>> partitions(int n);

/// Max-row total variation between the TPM and the product of its group
/// marginals, all computed with local loops.
double product_residual(const cee::Tpm& tpm,
                        const std::vector<cee::NodeSet>& groups);

/// Finest partition with residual <= epsilon: maximal group count, ties to
/// the earliest partition in canonical order.
std::vector<cee::NodeSet> finest_factorization(const cee::Tpm& tpm,
                                               double epsilon);

struct GrainScore {
  std::vector<cee::NodeSet> groups;
  std::vector<int> thresholds;
  int stride = 1;
  double big_phi = 0.0;
};

/// Exhaustive grain enumeration; returns every grain within 1e-9 of the best
/// macro big_phi. Phi of each macro TPM is evaluated with the library's
/// system_phi (the macro construction and search are independent).
std::vector<GrainScore> grain_search(const cee::Tpm& tpm,
                                     cee::State full_state,
                                     const std::vector<int>& strides,
                                     cee::Metric metric);

}  // namespace oracle
