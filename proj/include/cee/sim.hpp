#pragma once

#include "cee/tpm.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace cee {

/// Deterministic 64-bit generator (splitmix64) so runs reproduce bit-exactly
/// across platforms and standard libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// Configuration of a lattice imaginary-time run. The lattice is a ring of
/// `lattice_size` sites (or an L x L torus with dims = 2); sites are indexed
/// x + lattice_size * y. Natural units: hbar = 1, lattice spacing = 1.
struct SimConfig {
  int num_particles = 1;
  int lattice_size = 8;
  int dims = 1;  // 1 = ring, 2 = torus
  int steps = 1000;
  double d_tau = 1.0;
  double mass = 2.0 * std::numbers::ln2;  // one bit of action per hop
  double hop_prob = 0.5;
  double coupling = 0.0;  // attractive direction bias toward nearest particle
  std::uint64_t seed = 1;
  std::uint64_t area_tn = 0;  // boundary-area bookkeeping, in bits

  void validate() const;
};

/// One recorded information-acquisition event: the particle's site at the
/// step in which the accumulated action crossed a multiple of ln 2.
struct ReadoutEvent {
  int step = 0;
  int particle = 0;
  int site = 0;
};

/// Per-particle site sequences; length steps + 1, consecutive entries differ
/// by at most one hop.
struct TrajectoryEnsemble {
  SimConfig config;
  std::vector<std::vector<int>> paths;
};

/// Kinetic-action bookkeeping. Each hop adds (m/2)(a/d_tau)^2 d_tau with
/// a = 1; interactions bias the dynamics but never enter the ledger. The
/// event count always equals floor(action / ln 2).
struct ActionLedger {
  double kinetic_action = 0.0;  // in units of hbar
  std::uint64_t bit_count = 0;
  std::vector<ReadoutEvent> events;
};

struct SimOutput {
  TrajectoryEnsemble ensemble;
  ActionLedger ledger;
};

/// Seeded stochastic evolution; deterministic given the config.
SimOutput simulate(const SimConfig& config);

struct InfoBits {
  double bits = 0.0;          // action / ln 2
  std::uint64_t events = 0;   // floor(bits)
};

/// Acquired information carried by an accumulated action (action >= 0).
InfoBits info_bits(double action);

enum class Regime { Lorentzian, Euclidean };

struct PhysicalityResult {
  double work = 0.0;
  bool physical = false;  // work > 0
};

/// Work required for event reading. Euclidean: always zero. Lorentzian:
/// k_b_t when the measured and measuring systems differ, zero otherwise.
PhysicalityResult physicality(Regime regime, bool measured_equals_measuring,
                              double k_b_t);

/// Boundary-area entropy bookkeeping: area_tn bits, one per unit of
/// discretized area.
std::uint64_t area_entropy_bits(std::uint64_t area_tn);

/// Maps each joint particle configuration to a binary system state.
struct Encoder {
  int out_bits = 0;
  std::function<State(std::span<const int> sites)> map;

  /// One bit per particle: which half of the ring the particle occupies
  /// (x-coordinate half on a torus).
  static Encoder half_ring(const SimConfig& config);
};

/// Transition counts over consecutive steps, Laplace-smoothed per cell and
/// row-normalized.
Tpm empirical_tpm(const TrajectoryEnsemble& ensemble, const Encoder& encoder,
                  double smoothing = 1.0);

// Trajectory file JSON:
//   { "config": {...}, "paths": [[site, ...], ...],
//     "ledger": { "s_e0": x, "bits": y, "events": [[step, particle, site]...] } }
std::string trajectory_to_json(const SimOutput& output);
SimOutput trajectory_from_json(const std::string& text);
SimConfig sim_config_from_json(const std::string& text);
SimOutput read_trajectory_file(const std::string& path);
SimConfig read_sim_config_file(const std::string& path);

}  // namespace cee
