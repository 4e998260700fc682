#pragma once

#include <cstdint>
#include <vector>

#include "cee/algebra.hpp"
#include "cee/tpm.hpp"

// Named systems and seeded generators shared by the unit and acceptance
// suites.
namespace fixtures {

// splitmix64; kept separate from the library generator on purpose
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// 1-element NOT: state flips every step.
cee::Tpm not_element();

/// 1-element uniform noise.
cee::Tpm noise_element();

/// 2 elements: element 1 copies element 0's current value and element 0
/// copies element 1's (a swap), so each element reads one neighbor and
/// writes the other.
cee::Tpm copy_system();

/// 2 elements: element 1 computes AND of both current values; element 0 noise.
cee::Tpm and_system();

/// 2 elements: element 1 computes XOR of both current values; element 0 noise.
cee::Tpm xor_pair();

/// 3 elements: every element's next value is the majority of the current state.
cee::Tpm majority3();

/// 2 elements that move together: equal states flip jointly, mixed states
/// resynchronize to (0,0) or (1,1) with probability 1/2 each.
cee::Tpm resync_pair();

/// Noisy correlated NOT pair: each element independently turns on with
/// probability 0.9 / 0.5 / 0.1 when the pair currently holds 0 / 1 / 2 ones.
/// The pair acts as one noisy NOT of its own aggregate; grouping it into one
/// macro element sharpens the dynamics.
cee::Tpm noisy_not_pair();

/// Two independent noisy NOT pairs: elements {0,1} and {2,3}.
cee::Tpm two_correlated_not_pairs();

/// Dense random TPM, rows drawn from a flat Dirichlet.
cee::Tpm random_tpm(int n, std::uint64_t seed);

/// Random deterministic permutation TPM.
cee::Tpm random_permutation_tpm(int n, std::uint64_t seed);

/// Random distribution on `size` states (flat Dirichlet).
std::vector<double> random_distribution(int size, std::uint64_t seed);

/// TPM with elements relabeled by perm (element i of the input becomes
/// element perm[i] of the output).
cee::Tpm permute_elements(const cee::Tpm& tpm, const std::vector<int>& perm);

cee::State permute_state(cee::State s, const std::vector<int>& perm);
cee::NodeSet permute_mask(cee::NodeSet m, const std::vector<int>& perm);

}  // namespace fixtures
