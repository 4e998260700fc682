#pragma once

#include "cee/metric.hpp"
#include "cee/repertoire.hpp"

#include <optional>
#include <vector>

namespace cee {

/// A cut of the mechanism/purview dependency structure. Cuts produced by the
/// canonical enumeration are bipartitions in factorized style: part 1 keeps
/// its own mechanism-purview links, part 2 likewise, and all cross links are
/// severed (noised). Arbitrary severed sets can be built with from_links for
/// direct application.
struct MechanismCut {
  std::vector<SeveredLink> severed;
  // bipartition form, when applicable
  NodeSet mech_a = 0, purview_a = 0, mech_b = 0, purview_b = 0;
  bool is_bipartition = false;

  static MechanismCut from_bipartition(NodeSet mech_a, NodeSet purview_a,
                                       NodeSet mech_b, NodeSet purview_b);
  static MechanismCut from_links(std::vector<SeveredLink> links);
};

/// All admissible cuts for a mechanism/purview pair in canonical order:
/// mechanism halves enumerated with the lowest mechanism element pinned to
/// part 2, purview splits enumerated over all submasks, degenerate (null)
/// assignments skipped.
std::vector<MechanismCut> enumerate_mechanism_cuts(NodeSet mechanism,
                                                   NodeSet purview);

/// Repertoire with the cut's severed dependencies noised. Throws if a severed
/// pair lies outside mechanism x purview, or on an empty cause.
Repertoire apply_cut(const Tpm& tpm, NodeSet mechanism, SystemState mech_state,
                     NodeSet purview, Direction direction,
                     const MechanismCut& cut);

struct SmallPhiResult {
  double phi = 0.0;
  std::optional<MechanismCut> minimal_cut;  // nullopt iff empty cause
  Repertoire repertoire;                    // uncut repertoire
};

/// Integrated information of a mechanism over one purview: minimum over the
/// admissible cuts of distance(uncut repertoire, cut repertoire), in bits.
/// Ties keep the earliest cut in canonical order.
SmallPhiResult small_phi(const Tpm& tpm, NodeSet mechanism,
                         SystemState mech_state, NodeSet purview,
                         Direction direction, Metric metric = Metric::Emd);

/// Subsystem-scoped variant used by the system-level machinery.
SmallPhiResult small_phi(const Subsystem& sub, NodeSet mechanism,
                         NodeSet purview, Direction direction,
                         Metric metric = Metric::Emd);

struct CorePurview {
  NodeSet purview = 0;
  double phi = 0.0;
  Repertoire repertoire;
  MechanismCut minimal_cut;
};

/// Purview maximizing small_phi; candidates are scanned ascending by
/// (cardinality, mask) and replaced only on strictly larger phi, so ties
/// resolve to the smallest-cardinality, lowest-mask purview. nullopt when
/// every purview is reducible (phi = 0).
std::optional<CorePurview> core_purview(const Tpm& tpm, NodeSet mechanism,
                                        SystemState mech_state,
                                        Direction direction,
                                        Metric metric = Metric::Emd);

std::optional<CorePurview> core_purview(const Subsystem& sub, NodeSet mechanism,
                                        Direction direction,
                                        Metric metric = Metric::Emd);

struct Distinction {
  NodeSet mechanism = 0;
  CorePurview cause;
  CorePurview effect;
  double phi = 0.0;  // min(cause.phi, effect.phi)
};

/// Core cause and core effect assembled independently; none if either side
/// is reducible.
std::optional<Distinction> distinction(const Tpm& tpm, NodeSet mechanism,
                                       SystemState state,
                                       Metric metric = Metric::Emd);

std::optional<Distinction> distinction(const Subsystem& sub, NodeSet mechanism,
                                       Metric metric = Metric::Emd);

/// Subsystem variant with extra severed links applied to every repertoire
/// (used to re-evaluate distinctions under a system-level cut).
std::optional<Distinction> distinction_under_cut(
    const Subsystem& sub, NodeSet mechanism,
    std::span<const SeveredLink> effect_severed,
    std::span<const SeveredLink> cause_severed, Metric metric = Metric::Emd);

}  // namespace cee
