#include "cee/mechanism.hpp"

#include <algorithm>

namespace cee {

namespace {

// Base-severed links (from an enclosing system cut) merged with the cut's own.
std::vector<SeveredLink> merge_links(std::span<const SeveredLink> base,
                                     const std::vector<SeveredLink>& cut) {
  std::vector<SeveredLink> all(base.begin(), base.end());
  all.insert(all.end(), cut.begin(), cut.end());
  return all;
}

std::optional<Repertoire> compute(const Subsystem& sub, Direction direction,
                                  NodeSet mechanism, NodeSet purview,
                                  std::span<const SeveredLink> severed) {
  if (direction == Direction::Effect) {
    return sub.effect_repertoire(mechanism, purview, severed);
  }
  return sub.cause_repertoire(mechanism, purview, severed);
}

std::vector<NodeSet> purview_candidates(NodeSet universe) {
  std::vector<NodeSet> candidates;
  bits::for_each_submask(universe, [&](NodeSet p) {
    if (p != 0) candidates.push_back(p);
  });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](NodeSet a, NodeSet b) {
                     int ca = bits::popcount(a), cb = bits::popcount(b);
                     return ca != cb ? ca < cb : a < b;
                   });
  return candidates;
}

SmallPhiResult small_phi_impl(const Subsystem& sub, NodeSet mechanism,
                              NodeSet purview, Direction direction,
                              Metric metric,
                              std::span<const SeveredLink> base_severed) {
  if (purview == 0) {
    throw ValidationError("empty-purview", "small_phi needs a purview");
  }
  SmallPhiResult result;
  auto uncut = compute(sub, direction, mechanism, purview, base_severed);
  if (!uncut) {
    result.repertoire = Repertoire(purview);  // all-zero: empty cause
    return result;
  }
  result.repertoire = *uncut;
  if (mechanism == 0) return result;  // unconstrained already; nothing to cut

  double best = -1.0;
  for (const auto& cut : enumerate_mechanism_cuts(mechanism, purview)) {
    auto links = merge_links(base_severed, cut.severed);
    auto cut_rep = compute(sub, direction, mechanism, purview, links);
    // noising only widens likelihood support, so the cause stays non-empty
    double d = distribution_distance(metric, uncut->probs(), cut_rep.value().probs());
    if (best < 0.0 || d < best) {
      best = d;
      result.minimal_cut = cut;
    }
  }
  result.phi = std::max(0.0, best);
  return result;
}

std::optional<CorePurview> core_purview_impl(
    const Subsystem& sub, NodeSet mechanism, Direction direction,
    Metric metric, std::span<const SeveredLink> base_severed) {
  if (mechanism == 0) {
    throw ValidationError("empty-mechanism", "core purview needs a mechanism");
  }
  CorePurview best;
  bool found = false;
  for (NodeSet p : purview_candidates(sub.subset())) {
    auto r = small_phi_impl(sub, mechanism, p, direction, metric, base_severed);
    if (r.phi > best.phi) {
      best.purview = p;
      best.phi = r.phi;
      best.repertoire = r.repertoire;
      best.minimal_cut = r.minimal_cut ? *r.minimal_cut : MechanismCut{};
      found = true;
    }
  }
  if (!found || best.phi <= 0.0) return std::nullopt;
  return best;
}

}  // namespace

MechanismCut MechanismCut::from_bipartition(NodeSet mech_a, NodeSet purview_a,
                                            NodeSet mech_b, NodeSet purview_b) {
  MechanismCut cut;
  cut.mech_a = mech_a;
  cut.purview_a = purview_a;
  cut.mech_b = mech_b;
  cut.purview_b = purview_b;
  cut.is_bipartition = true;
  bits::for_each(mech_a, [&](int m) {
    bits::for_each(purview_b, [&](int p) { cut.severed.emplace_back(m, p); });
  });
  bits::for_each(mech_b, [&](int m) {
    bits::for_each(purview_a, [&](int p) { cut.severed.emplace_back(m, p); });
  });
  return cut;
}

MechanismCut MechanismCut::from_links(std::vector<SeveredLink> links) {
  MechanismCut cut;
  cut.severed = std::move(links);
  return cut;
}

std::vector<MechanismCut> enumerate_mechanism_cuts(NodeSet mechanism,
                                                   NodeSet purview) {
  std::vector<MechanismCut> cuts;
  if (mechanism == 0) return cuts;
  const NodeSet anchor = NodeSet{1} << bits::lowest(mechanism);
  const NodeSet free_mech = mechanism & ~anchor;
  bits::for_each_submask(free_mech, [&](NodeSet mech_a) {
    bits::for_each_submask(purview, [&](NodeSet purview_a) {
      if (mech_a == 0 && purview_a == 0) return;  // degenerate part
      cuts.push_back(MechanismCut::from_bipartition(
          mech_a, purview_a, mechanism & ~mech_a, purview & ~purview_a));
    });
  });
  return cuts;
}

Repertoire apply_cut(const Tpm& tpm, NodeSet mechanism, SystemState mech_state,
                     NodeSet purview, Direction direction,
                     const MechanismCut& cut) {
  for (const auto& [m, p] : cut.severed) {
    if (!bits::contains(mechanism, m) || !bits::contains(purview, p)) {
      throw ValidationError("cut-pair-out-of-range",
                            "(" + std::to_string(m) + ", " + std::to_string(p) +
                                ") outside mechanism x purview");
    }
  }
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  Subsystem sub(tpm, all, mech_state);
  auto rep = compute(sub, direction, mechanism, purview, cut.severed);
  if (!rep) throw ValidationError("empty-cause", "mechanism state unreachable");
  return *rep;
}

SmallPhiResult small_phi(const Tpm& tpm, NodeSet mechanism,
                         SystemState mech_state, NodeSet purview,
                         Direction direction, Metric metric) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  return small_phi_impl(Subsystem(tpm, all, mech_state), mechanism, purview,
                        direction, metric, {});
}

SmallPhiResult small_phi(const Subsystem& sub, NodeSet mechanism,
                         NodeSet purview, Direction direction, Metric metric) {
  return small_phi_impl(sub, mechanism, purview, direction, metric, {});
}

std::optional<CorePurview> core_purview(const Tpm& tpm, NodeSet mechanism,
                                        SystemState mech_state,
                                        Direction direction, Metric metric) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  return core_purview_impl(Subsystem(tpm, all, mech_state), mechanism,
                           direction, metric, {});
}

std::optional<CorePurview> core_purview(const Subsystem& sub, NodeSet mechanism,
                                        Direction direction, Metric metric) {
  return core_purview_impl(sub, mechanism, direction, metric, {});
}

std::optional<Distinction> distinction(const Tpm& tpm, NodeSet mechanism,
                                       SystemState state, Metric metric) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  return distinction(Subsystem(tpm, all, state), mechanism, metric);
}

std::optional<Distinction> distinction(const Subsystem& sub, NodeSet mechanism,
                                       Metric metric) {
  return distinction_under_cut(sub, mechanism, {}, {}, metric);
}

std::optional<Distinction> distinction_under_cut(
    const Subsystem& sub, NodeSet mechanism,
    std::span<const SeveredLink> effect_severed,
    std::span<const SeveredLink> cause_severed, Metric metric) {
  auto cause = core_purview_impl(sub, mechanism, Direction::Cause, metric,
                                 cause_severed);
  if (!cause) return std::nullopt;
  auto effect = core_purview_impl(sub, mechanism, Direction::Effect, metric,
                                  effect_severed);
  if (!effect) return std::nullopt;
  Distinction d;
  d.mechanism = mechanism;
  d.cause = std::move(*cause);
  d.effect = std::move(*effect);
  d.phi = std::min(d.cause.phi, d.effect.phi);
  return d;
}

}  // namespace cee
