#pragma once

#include "cee/bits.hpp"
#include "cee/tpm.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cee {

enum class Direction { Cause, Effect };

/// Probability distribution over the states of a purview subset, stored as a
/// flat array indexed little-endian in the purview's element order.
class Repertoire {
 public:
  Repertoire() = default;

  explicit Repertoire(NodeSet purview)
      : purview_(purview),
        probs_(bits::num_states(bits::popcount(purview)), 0.0) {}

  Repertoire(NodeSet purview, std::vector<double> probs);

  NodeSet purview() const { return purview_; }
  State num_states() const { return static_cast<State>(probs_.size()); }

  double& operator[](State s) { return probs_[s]; }
  double operator[](State s) const { return probs_[s]; }
  std::span<const double> probs() const { return probs_; }

  double sum() const;
  void normalize();

  static Repertoire uniform(NodeSet purview);

 private:
  NodeSet purview_ = 0;
  std::vector<double> probs_{1.0};  // empty purview: the trivial scalar
};

/// A severed dependency between a mechanism element and a purview element.
/// In the effect direction the pair (m, p) removes the influence of present
/// element m on next-step element p; in the cause direction it removes the
/// constraint that present element m places on past element p. Severed
/// dependencies are replaced by uniform marginalization.
using SeveredLink = std::pair<int, int>;  // (mechanism element, purview element)

/// Computation context: a candidate subset of a system in a definite state.
///
/// Repertoires follow the factorized-element convention: effect repertoires
/// are products over single-purview-element conditionals, cause repertoires
/// are normalized products over single-mechanism-element likelihood factors.
/// Elements outside the subset are frozen at their current state for effect
/// computations and uniformly marginalized for cause computations.
class Subsystem {
 public:
  Subsystem(const Tpm& tpm, NodeSet subset, SystemState state);

  const Tpm& tpm() const { return *tpm_; }
  NodeSet subset() const { return subset_; }
  SystemState state() const { return state_; }

  Repertoire effect_repertoire(NodeSet mechanism, NodeSet purview,
                               std::span<const SeveredLink> severed = {}) const;

  /// nullopt signals an empty cause: the mechanism state has zero likelihood
  /// under every past purview state (phi_c = 0 downstream).
  std::optional<Repertoire> cause_repertoire(
      NodeSet mechanism, NodeSet purview,
      std::span<const SeveredLink> severed = {}) const;

  Repertoire unconstrained_repertoire(Direction direction,
                                      NodeSet purview) const;

  Repertoire repertoire_or_uniform(Direction direction, NodeSet mechanism,
                                   NodeSet purview,
                                   std::span<const SeveredLink> severed = {}) const;

 private:
  /// P(next state of `element` = 1 | elements of cond_mask fixed at the
  /// subsystem state, subset elements outside cond_mask uniform, background
  /// frozen).
  double effect_on_prob(int element, NodeSet cond_mask) const;

  const Tpm* tpm_;
  NodeSet subset_;
  SystemState state_;
};

// Whole-system entry points (subset = all elements).

Repertoire effect_repertoire(const Tpm& tpm, NodeSet mechanism,
                             SystemState mech_state, NodeSet purview);

std::optional<Repertoire> cause_repertoire(const Tpm& tpm, NodeSet mechanism,
                                           SystemState mech_state,
                                           NodeSet purview);

/// Repertoire with an empty mechanism. Requires a non-empty purview.
Repertoire unconstrained_repertoire(const Tpm& tpm, NodeSet purview,
                                    Direction direction);

}  // namespace cee
