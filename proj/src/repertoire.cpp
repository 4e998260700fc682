#include "cee/repertoire.hpp"

#include <array>
#include <cmath>

namespace cee {

Repertoire::Repertoire(NodeSet purview, std::vector<double> probs)
    : purview_(purview), probs_(std::move(probs)) {
  if (probs_.size() != bits::num_states(bits::popcount(purview_))) {
    throw ValidationError("repertoire-size-mismatch",
                          std::to_string(probs_.size()) + " probs for purview " +
                              std::to_string(purview_));
  }
}

double Repertoire::sum() const {
  double s = 0.0;
  for (double v : probs_) s += v;
  return s;
}

void Repertoire::normalize() {
  double s = sum();
  if (s > 0.0) {
    for (double& v : probs_) v /= s;
  }
}

Repertoire Repertoire::uniform(NodeSet purview) {
  Repertoire r(purview);
  double p = 1.0 / r.num_states();
  for (State s = 0; s < r.num_states(); ++s) r[s] = p;
  return r;
}

Subsystem::Subsystem(const Tpm& tpm, NodeSet subset, SystemState state)
    : tpm_(&tpm), subset_(subset), state_(state) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  if (!bits::is_subset(subset, all)) {
    throw ValidationError("mask-out-of-range",
                          "subset " + std::to_string(subset) + " for n = " +
                              std::to_string(tpm.n()));
  }
  if (state.n != tpm.n()) {
    throw ValidationError("state-length-mismatch",
                          "state over " + std::to_string(state.n) +
                              " elements, tpm has " + std::to_string(tpm.n()));
  }
}

double Subsystem::effect_on_prob(int element, NodeSet cond_mask) const {
  const NodeSet all = static_cast<NodeSet>(tpm_->size() - 1);
  const NodeSet background = all & ~subset_;
  const NodeSet uniform_mask = subset_ & ~cond_mask;
  // fixed bits: conditioned subset elements + frozen background
  const State base = state_.index & (cond_mask | background);

  double acc = 0.0;
  State count = 0;
  bits::for_each_submask(uniform_mask, [&](NodeSet w) {
    acc += tpm_->next_on(base | w, element);
    ++count;
  });
  return acc / count;
}

Repertoire Subsystem::effect_repertoire(
    NodeSet mechanism, NodeSet purview,
    std::span<const SeveredLink> severed) const {
  if (!bits::is_subset(mechanism, subset_) || !bits::is_subset(purview, subset_)) {
    throw ValidationError("mask-out-of-range",
                          "mechanism/purview outside the candidate subset");
  }
  std::array<NodeSet, kMaxElements> severed_sources{};
  for (const auto& [m, p] : severed) severed_sources[static_cast<size_t>(p)] |= NodeSet{1} << m;

  // per purview element: P(next = 1 | unsevered mechanism elements)
  std::array<double, kMaxElements> on_prob{};
  bits::for_each(purview, [&](int p) {
    NodeSet cond = mechanism & ~severed_sources[static_cast<size_t>(p)];
    on_prob[static_cast<size_t>(p)] = effect_on_prob(p, cond);
  });

  Repertoire rep(purview);
  const auto elements = bits::to_elements(purview);
  for (State u = 0; u < rep.num_states(); ++u) {
    double prob = 1.0;
    for (size_t k = 0; k < elements.size(); ++k) {
      double p1 = on_prob[static_cast<size_t>(elements[k])];
      prob *= ((u >> k) & 1u) ? p1 : 1.0 - p1;
    }
    rep[u] = prob;
  }
  return rep;
}

std::optional<Repertoire> Subsystem::cause_repertoire(
    NodeSet mechanism, NodeSet purview,
    std::span<const SeveredLink> severed) const {
  if (!bits::is_subset(mechanism, subset_) || !bits::is_subset(purview, subset_)) {
    throw ValidationError("mask-out-of-range",
                          "mechanism/purview outside the candidate subset");
  }
  std::array<NodeSet, kMaxElements> severed_targets{};
  for (const auto& [m, p] : severed) severed_targets[static_cast<size_t>(m)] |= NodeSet{1} << p;

  const NodeSet all = static_cast<NodeSet>(tpm_->size() - 1);
  Repertoire rep(purview);
  const State purview_states = rep.num_states();
  std::vector<double> joint(purview_states, 1.0);

  bits::for_each(mechanism, [&](int m) {
    // likelihood factor over the unsevered purview elements
    const NodeSet kept = purview & ~severed_targets[static_cast<size_t>(m)];
    const NodeSet marg = all & ~kept;  // everything else in the past is uniform
    const int mech_bit = state_.bit(m);
    const State kept_states = bits::num_states(bits::popcount(kept));

    std::vector<double> factor(kept_states, 0.0);
    for (State ks = 0; ks < kept_states; ++ks) {
      const State kept_bits = bits::deposit(ks, kept);
      double acc = 0.0;
      State count = 0;
      bits::for_each_submask(marg, [&](NodeSet w) {
        double p1 = tpm_->next_on(kept_bits | w, m);
        acc += mech_bit ? p1 : 1.0 - p1;
        ++count;
      });
      factor[ks] = acc / count;
    }
    for (State u = 0; u < purview_states; ++u) {
      const State full_bits = bits::deposit(u, purview);
      joint[u] *= factor[bits::extract(full_bits, kept)];
    }
  });

  double total = 0.0;
  for (double v : joint) total += v;
  if (total <= 0.0) return std::nullopt;
  for (State u = 0; u < purview_states; ++u) rep[u] = joint[u] / total;
  return rep;
}

Repertoire Subsystem::unconstrained_repertoire(Direction direction,
                                               NodeSet purview) const {
  if (direction == Direction::Effect) return effect_repertoire(0, purview);
  return cause_repertoire(0, purview).value();  // uniform; cannot be empty
}

Repertoire Subsystem::repertoire_or_uniform(
    Direction direction, NodeSet mechanism, NodeSet purview,
    std::span<const SeveredLink> severed) const {
  if (direction == Direction::Effect) {
    return effect_repertoire(mechanism, purview, severed);
  }
  auto rep = cause_repertoire(mechanism, purview, severed);
  return rep ? *rep : Repertoire::uniform(purview);
}

Repertoire effect_repertoire(const Tpm& tpm, NodeSet mechanism,
                             SystemState mech_state, NodeSet purview) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  return Subsystem(tpm, all, mech_state).effect_repertoire(mechanism, purview);
}

std::optional<Repertoire> cause_repertoire(const Tpm& tpm, NodeSet mechanism,
                                           SystemState mech_state,
                                           NodeSet purview) {
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  return Subsystem(tpm, all, mech_state).cause_repertoire(mechanism, purview);
}

Repertoire unconstrained_repertoire(const Tpm& tpm, NodeSet purview,
                                    Direction direction) {
  if (purview == 0) {
    throw ValidationError("empty-purview",
                          "unconstrained repertoire needs a purview");
  }
  NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  SystemState any(0, tpm.n());
  return Subsystem(tpm, all, any).unconstrained_repertoire(direction, purview);
}

}  // namespace cee
