#include "support/fixtures.hpp"

#include <cmath>
#include <numeric>

namespace fixtures {

using cee::NodeSet;
using cee::State;
using cee::Tpm;

Tpm not_element() {
  return Tpm::from_rows({{0, 1}, {1, 0}}, 1);
}

Tpm noise_element() {
  return Tpm::from_rows({{0.5, 0.5}, {0.5, 0.5}}, 1);
}

namespace {

// per-element next-value rule -> deterministic-in-element-1 style builder
Tpm from_rule(int n, double (*on_prob)(State, int)) {
  const State size = cee::bits::num_states(n);
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 0.0));
  for (State s = 0; s < size; ++s) {
    for (State t = 0; t < size; ++t) {
      double p = 1.0;
      for (int e = 0; e < n; ++e) {
        double p1 = on_prob(s, e);
        p *= ((t >> e) & 1u) ? p1 : 1.0 - p1;
      }
      rows[s][t] = p;
    }
  }
  return Tpm::from_rows(rows, n);
}

}  // namespace

Tpm copy_system() {
  return from_rule(2, [](State s, int e) {
    if (e == 0) return (s & 2u) ? 1.0 : 0.0;
    return (s & 1u) ? 1.0 : 0.0;
  });
}

Tpm and_system() {
  return from_rule(2, [](State s, int e) {
    if (e == 0) return 0.5;
    return ((s & 1u) && (s & 2u)) ? 1.0 : 0.0;
  });
}

Tpm xor_pair() {
  return from_rule(2, [](State s, int e) {
    if (e == 0) return 0.5;
    return (((s >> 1) ^ s) & 1u) ? 1.0 : 0.0;
  });
}

Tpm majority3() {
  return from_rule(3, [](State s, int e) {
    (void)e;
    return cee::bits::popcount(s) >= 2 ? 1.0 : 0.0;
  });
}

Tpm resync_pair() {
  // states: 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1)
  return Tpm::from_rows(
      {
          {0.0, 0.0, 0.0, 1.0},
          {0.5, 0.0, 0.0, 0.5},
          {0.5, 0.0, 0.0, 0.5},
          {1.0, 0.0, 0.0, 0.0},
      },
      2);
}

Tpm noisy_not_pair() {
  std::vector<std::vector<double>> rows;
  for (State s = 0; s < 4; ++s) {
    const int ones = cee::bits::popcount(s);
    const double p1 = ones == 0 ? 0.9 : (ones == 1 ? 0.5 : 0.1);
    std::vector<double> row(4);
    for (State t = 0; t < 4; ++t) {
      double p = 1.0;
      for (int e = 0; e < 2; ++e) p *= ((t >> e) & 1u) ? p1 : 1.0 - p1;
      row[t] = p;
    }
    rows.push_back(std::move(row));
  }
  return Tpm::from_rows(rows, 2);
}

Tpm two_correlated_not_pairs() {
  Tpm pair = noisy_not_pair();
  return cee::tensor_product(pair, pair);
}

Tpm random_tpm(int n, std::uint64_t seed) {
  TestRng rng(seed);
  const State size = cee::bits::num_states(n);
  std::vector<std::vector<double>> rows(size, std::vector<double>(size));
  for (State s = 0; s < size; ++s) {
    double total = 0.0;
    for (State t = 0; t < size; ++t) {
      double u = rng.next_unit();
      rows[s][t] = -std::log(1.0 - u);
      total += rows[s][t];
    }
    for (State t = 0; t < size; ++t) rows[s][t] /= total;
  }
  return Tpm::from_rows(rows, n);
}

Tpm random_permutation_tpm(int n, std::uint64_t seed) {
  TestRng rng(seed);
  const State size = cee::bits::num_states(n);
  std::vector<State> image(size);
  std::iota(image.begin(), image.end(), State{0});
  for (State i = size; i > 1; --i) {
    State j = static_cast<State>(rng.next_u64() % i);
    std::swap(image[i - 1], image[j]);
  }
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 0.0));
  for (State s = 0; s < size; ++s) rows[s][image[s]] = 1.0;
  return Tpm::from_rows(rows, n);
}

std::vector<double> random_distribution(int size, std::uint64_t seed) {
  TestRng rng(seed);
  std::vector<double> probs(static_cast<size_t>(size));
  double total = 0.0;
  for (auto& p : probs) {
    p = -std::log(1.0 - rng.next_unit());
    total += p;
  }
  for (auto& p : probs) p /= total;
  return probs;
}

cee::State permute_state(State s, const std::vector<int>& perm) {
  State out = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if ((s >> i) & 1u) out |= State{1} << perm[i];
  }
  return out;
}

cee::NodeSet permute_mask(NodeSet m, const std::vector<int>& perm) {
  NodeSet out = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if ((m >> i) & 1u) out |= NodeSet{1} << perm[i];
  }
  return out;
}

Tpm permute_elements(const Tpm& tpm, const std::vector<int>& perm) {
  const State size = tpm.size();
  std::vector<std::vector<double>> rows(size, std::vector<double>(size));
  for (State s = 0; s < size; ++s) {
    for (State t = 0; t < size; ++t) {
      rows[permute_state(s, perm)][permute_state(t, perm)] = tpm(s, t);
    }
  }
  return Tpm::from_rows(rows, tpm.n(), tpm.labels());
}

}  // namespace fixtures
