#pragma once

#include "cee/mechanism.hpp"

#include <optional>
#include <vector>

namespace cee {

/// Phi construction mode.
///   Mip:             minimum over directed bipartitions of the earth-mover
///                    distance between intact and cut whole-subset cause and
///                    effect repertoires, normalized by the smaller part's
///                    maximum entropy (bits).
///   SumDistinctions: minimum over directed bipartitions of the summed loss
///                    of distinction phi across all mechanisms, unnormalized.
enum class PhiMode { Mip, SumDistinctions };

struct PhiOptions {
  Metric metric = Metric::Emd;
  PhiMode mode = PhiMode::Mip;
};

/// Directed bipartition of a candidate subset: dependencies from elements of
/// `from` onto elements of `to` are severed. A single-element subset has
/// exactly one cut, the self-link cut, represented with from == to.
struct SystemCut {
  NodeSet from = 0;
  NodeSet to = 0;
};

struct SystemPhiResult {
  double big_phi = 0.0;
  std::optional<SystemCut> minimal_cut;  // nullopt iff the subset has no cause
};

/// System integrated information of a candidate subset. Elements outside the
/// subset are frozen at their current state for effect computations and
/// uniformly marginalized for cause computations. Cuts are enumerated with
/// the source part ascending over nonempty proper submasks; ties keep the
/// earliest cut.
SystemPhiResult system_phi(const Tpm& tpm, NodeSet subset, SystemState state,
                           const PhiOptions& options = {});

struct Complex {
  NodeSet elements = 0;
  double big_phi = 0.0;
  SystemState state;  // full system state; restrict via `elements`
  std::optional<SystemCut> minimal_cut;
};

/// Evaluates system_phi over every non-empty subset and returns every local
/// maximum with positive big_phi (no evaluated strict subset or superset
/// scores higher), sorted by big_phi descending, mask ascending.
std::vector<Complex> find_complexes(const Tpm& tpm, SystemState state,
                                    const PhiOptions& options = {});

/// Greedy exclusion: walk the sorted complexes, accepting each one that does
/// not overlap an already-accepted complex.
std::vector<Complex> exclusion_filter(const std::vector<Complex>& complexes);

/// Purview overlap among distinctions. `members` index into the owning
/// structure's distinction list; `faces[k]` lists which sides of member k
/// intersect the overlap.
struct Relation {
  std::vector<size_t> members;
  NodeSet overlap = 0;
  std::vector<std::vector<Direction>> faces;
};

struct CauseEffectStructure {
  NodeSet complex = 0;
  std::vector<Distinction> distinctions;        // mechanism mask ascending
  std::vector<NodeSet> reducible_mechanisms;    // evaluated, no distinction
  std::vector<Relation> relations;
  double sum_phi = 0.0;
};

/// Distinctions for every non-empty mechanism within the complex plus their
/// purview-overlap relations (pairs by default, triples at order 3).
CauseEffectStructure cause_effect_structure(const Tpm& tpm, NodeSet complex,
                                            SystemState state,
                                            const PhiOptions& options = {},
                                            int relations_order = 2);

}  // namespace cee
