#include "cee/system.hpp"

#include <algorithm>

#include "cee/parallel.hpp"

namespace cee {

namespace {

struct CutLinks {
  std::vector<SeveredLink> effect;  // (mechanism element, purview element)
  std::vector<SeveredLink> cause;
};

// Physical links from -> to, expressed per direction: an effect repertoire of
// a purview element in `to` loses the mechanism elements in `from`; a cause
// repertoire of a mechanism element in `to` loses the past purview elements
// in `from`.
CutLinks cut_links(const SystemCut& cut) {
  CutLinks links;
  bits::for_each(cut.from, [&](int a) {
    bits::for_each(cut.to, [&](int b) {
      links.effect.emplace_back(a, b);
      links.cause.emplace_back(b, a);
    });
  });
  return links;
}

std::vector<SystemCut> enumerate_system_cuts(NodeSet subset) {
  std::vector<SystemCut> cuts;
  if (bits::popcount(subset) == 1) {
    cuts.push_back({subset, subset});
    return cuts;
  }
  bits::for_each_submask(subset, [&](NodeSet from) {
    if (from == 0 || from == subset) return;
    cuts.push_back({from, subset & ~from});
  });
  return cuts;
}

double mip_cut_value(const Subsystem& sub, const Repertoire& effect_intact,
                     const Repertoire& cause_intact, const SystemCut& cut,
                     Metric metric) {
  const NodeSet subset = sub.subset();
  auto links = cut_links(cut);
  Repertoire effect_cut = sub.effect_repertoire(subset, subset, links.effect);
  auto cause_cut = sub.cause_repertoire(subset, subset, links.cause);
  // cutting only widens the cause support, so a non-empty cause stays so
  double d = distribution_distance(metric, effect_intact.probs(), effect_cut.probs()) +
             distribution_distance(metric, cause_intact.probs(), cause_cut.value().probs());
  int norm = cut.from == cut.to
                 ? 1
                 : std::min(bits::popcount(cut.from), bits::popcount(cut.to));
  return d / norm;
}

double sum_distinction_cut_value(const Subsystem& sub,
                                 const std::vector<double>& intact_phi,
                                 const std::vector<NodeSet>& mechanisms,
                                 const SystemCut& cut, Metric metric) {
  auto links = cut_links(cut);
  double total = 0.0;
  for (size_t i = 0; i < mechanisms.size(); ++i) {
    if (intact_phi[i] <= 0.0) continue;
    auto d = distinction_under_cut(sub, mechanisms[i], links.effect,
                                   links.cause, metric);
    double cut_phi = d ? d->phi : 0.0;
    total += std::max(0.0, intact_phi[i] - cut_phi);
  }
  return total;
}

std::vector<NodeSet> nonempty_submasks(NodeSet universe) {
  std::vector<NodeSet> out;
  bits::for_each_submask(universe, [&](NodeSet m) {
    if (m != 0) out.push_back(m);
  });
  return out;
}

}  // namespace

SystemPhiResult system_phi(const Tpm& tpm, NodeSet subset, SystemState state,
                           const PhiOptions& options) {
  if (subset == 0) {
    throw ValidationError("empty-subset", "system_phi needs elements");
  }
  Subsystem sub(tpm, subset, state);
  SystemPhiResult result;

  Repertoire effect_intact = sub.effect_repertoire(subset, subset);
  auto cause_intact = sub.cause_repertoire(subset, subset);
  if (!cause_intact) return result;  // no cause: the subset does not exist

  std::vector<NodeSet> mechanisms;
  std::vector<double> intact_phi;
  if (options.mode == PhiMode::SumDistinctions) {
    mechanisms = nonempty_submasks(subset);
    intact_phi.reserve(mechanisms.size());
    for (NodeSet m : mechanisms) {
      auto d = distinction(sub, m, options.metric);
      intact_phi.push_back(d ? d->phi : 0.0);
    }
  }

  double best = -1.0;
  for (const auto& cut : enumerate_system_cuts(subset)) {
    double value =
        options.mode == PhiMode::Mip
            ? mip_cut_value(sub, effect_intact, *cause_intact, cut,
                            options.metric)
            : sum_distinction_cut_value(sub, intact_phi, mechanisms, cut,
                                        options.metric);
    if (best < 0.0 || value < best) {
      best = value;
      result.minimal_cut = cut;
    }
  }
  result.big_phi = std::max(0.0, best);
  return result;
}

std::vector<Complex> find_complexes(const Tpm& tpm, SystemState state,
                                    const PhiOptions& options) {
  const NodeSet full = static_cast<NodeSet>(tpm.size() - 1);
  const size_t count = tpm.size();  // index = subset mask; 0 unused
  std::vector<SystemPhiResult> phi(count);
  parallel_for(count - 1, [&](size_t i) {
    NodeSet subset = static_cast<NodeSet>(i + 1);
    phi[subset] = system_phi(tpm, subset, state, options);
  });

  std::vector<Complex> complexes;
  for (NodeSet subset = 1; subset <= full; ++subset) {
    double value = phi[subset].big_phi;
    if (value <= 0.0) continue;
    bool is_max = true;
    bits::for_each_submask(subset, [&](NodeSet u) {
      if (u != 0 && u != subset && phi[u].big_phi > value) is_max = false;
    });
    if (is_max) {
      bits::for_each_submask(full & ~subset, [&](NodeSet extra) {
        if (extra != 0 && phi[subset | extra].big_phi > value) is_max = false;
      });
    }
    if (!is_max) continue;
    complexes.push_back(
        {subset, value, state, phi[subset].minimal_cut});
  }
  std::stable_sort(complexes.begin(), complexes.end(),
                   [](const Complex& a, const Complex& b) {
                     if (a.big_phi != b.big_phi) return a.big_phi > b.big_phi;
                     return a.elements < b.elements;
                   });
  return complexes;
}

std::vector<Complex> exclusion_filter(const std::vector<Complex>& complexes) {
  std::vector<Complex> accepted;
  NodeSet covered = 0;
  for (const auto& c : complexes) {
    if ((c.elements & covered) == 0) {
      accepted.push_back(c);
      covered |= c.elements;
    }
  }
  return accepted;
}

CauseEffectStructure cause_effect_structure(const Tpm& tpm, NodeSet complex,
                                            SystemState state,
                                            const PhiOptions& options,
                                            int relations_order) {
  if (complex == 0) {
    throw ValidationError("empty-subset", "cause_effect_structure needs elements");
  }
  if (relations_order < 2 || relations_order > 3) {
    throw ValidationError("relations-order-out-of-range",
                          std::to_string(relations_order));
  }
  Subsystem sub(tpm, complex, state);
  CauseEffectStructure ces;
  ces.complex = complex;

  for (NodeSet mech : nonempty_submasks(complex)) {
    auto d = distinction(sub, mech, options.metric);
    if (d) {
      ces.sum_phi += d->phi;
      ces.distinctions.push_back(std::move(*d));
    } else {
      ces.reducible_mechanisms.push_back(mech);
    }
  }

  auto purview_union = [&](const Distinction& d) {
    return d.cause.purview | d.effect.purview;
  };
  auto faces_of = [&](const Distinction& d, NodeSet overlap) {
    std::vector<Direction> sides;
    if (d.cause.purview & overlap) sides.push_back(Direction::Cause);
    if (d.effect.purview & overlap) sides.push_back(Direction::Effect);
    return sides;
  };

  const size_t nd = ces.distinctions.size();
  for (size_t i = 0; i < nd; ++i) {
    for (size_t j = i + 1; j < nd; ++j) {
      NodeSet overlap =
          purview_union(ces.distinctions[i]) & purview_union(ces.distinctions[j]);
      if (overlap == 0) continue;
      Relation r;
      r.members = {i, j};
      r.overlap = overlap;
      r.faces = {faces_of(ces.distinctions[i], overlap),
                 faces_of(ces.distinctions[j], overlap)};
      ces.relations.push_back(std::move(r));
    }
  }
  if (relations_order >= 3) {
    for (size_t i = 0; i < nd; ++i) {
      for (size_t j = i + 1; j < nd; ++j) {
        for (size_t k = j + 1; k < nd; ++k) {
          NodeSet overlap = purview_union(ces.distinctions[i]) &
                            purview_union(ces.distinctions[j]) &
                            purview_union(ces.distinctions[k]);
          if (overlap == 0) continue;
          Relation r;
          r.members = {i, j, k};
          r.overlap = overlap;
          r.faces = {faces_of(ces.distinctions[i], overlap),
                     faces_of(ces.distinctions[j], overlap),
                     faces_of(ces.distinctions[k], overlap)};
          ces.relations.push_back(std::move(r));
        }
      }
    }
  }
  return ces;
}

}  // namespace cee
