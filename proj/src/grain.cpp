#include "cee/grain.hpp"

#include <algorithm>
#include <cmath>

#include "cee/parallel.hpp"

namespace cee {

CoarseGraining CoarseGraining::trivial(int n) {
  CoarseGraining g;
  for (int i = 0; i < n; ++i) {
    g.groups.push_back(NodeSet{1} << i);
    g.thresholds.push_back(1);
  }
  g.stride = 1;
  return g;
}

namespace {

constexpr int kMaxStride = 1 << 20;

std::vector<double> multiply(const std::vector<double>& a,
                             const std::vector<double>& b, State size) {
  std::vector<double> out(static_cast<size_t>(size) * size, 0.0);
  for (State i = 0; i < size; ++i) {
    const double* arow = a.data() + static_cast<size_t>(i) * size;
    double* orow = out.data() + static_cast<size_t>(i) * size;
    for (State k = 0; k < size; ++k) {
      const double v = arow[k];
      if (v == 0.0) continue;
      const double* brow = b.data() + static_cast<size_t>(k) * size;
      for (State j = 0; j < size; ++j) orow[j] += v * brow[j];
    }
  }
  return out;
}

void validate_grain(const Tpm& tpm, const CoarseGraining& grain) {
  NodeSet seen = 0;
  if (grain.groups.empty() || grain.groups.size() != grain.thresholds.size()) {
    throw ValidationError("invalid-partition", "groups/thresholds mismatch");
  }
  for (size_t i = 0; i < grain.groups.size(); ++i) {
    NodeSet g = grain.groups[i];
    if (g == 0 || (g & seen)) {
      throw ValidationError("invalid-partition", "empty or overlapping group");
    }
    seen |= g;
    int t = grain.thresholds[i];
    if (t < 1 || t > bits::popcount(g)) {
      throw ValidationError("invalid-threshold",
                            "threshold " + std::to_string(t) + " for group of " +
                                std::to_string(bits::popcount(g)));
    }
  }
  if (seen != static_cast<NodeSet>(tpm.size() - 1)) {
    throw ValidationError("invalid-partition", "groups do not cover all elements");
  }
}

}  // namespace

Tpm temporal_grain(const Tpm& tpm, int k) {
  if (k < 1) throw ValidationError("stride-out-of-range", std::to_string(k));
  if (k > kMaxStride) throw ValidationError("stride-limit", std::to_string(k));
  if (k == 1) return tpm;

  const State size = tpm.size();
  std::vector<double> base(static_cast<size_t>(size) * size);
  for (State s = 0; s < size; ++s) {
    auto row = tpm.row(s);
    std::copy(row.begin(), row.end(),
              base.begin() + static_cast<size_t>(s) * size);
  }
  std::vector<double> acc;
  bool have = false;
  int e = k;
  while (e > 0) {
    if (e & 1) {
      acc = have ? multiply(acc, base, size) : base;
      have = true;
    }
    e >>= 1;
    if (e > 0) base = multiply(base, base, size);
  }
  return Tpm::from_flat(std::move(acc), tpm.n());
}

std::vector<double> stationary_distribution(const Tpm& tpm, double tol,
                                            size_t max_iter) {
  const State size = tpm.size();
  std::vector<double> x(size, 1.0 / size), next(size);
  for (size_t it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (State s = 0; s < size; ++s) {
      const double v = x[s];
      if (v == 0.0) continue;
      auto row = tpm.row(s);
      for (State t = 0; t < size; ++t) next[t] += v * row[t];
    }
    double diff = 0.0;
    for (State t = 0; t < size; ++t) {
      next[t] = 0.5 * x[t] + 0.5 * next[t];
      diff += std::abs(next[t] - x[t]);
    }
    x.swap(next);
    if (diff < tol) {
      // transient states decay geometrically but never reach zero exactly
      double total = 0.0;
      for (double& v : x) {
        if (v < 1e-9) v = 0.0;
        total += v;
      }
      for (double& v : x) v /= total;
      return x;
    }
  }
  throw ValidationError("stationary-not-converged",
                        std::to_string(max_iter) + " iterations");
}

SystemState map_state(const CoarseGraining& grain, SystemState micro) {
  State macro = 0;
  for (size_t g = 0; g < grain.groups.size(); ++g) {
    int ones = bits::popcount(static_cast<NodeSet>(micro.index) & grain.groups[g]);
    if (ones >= grain.thresholds[g]) macro |= State{1} << g;
  }
  return SystemState(macro, static_cast<int>(grain.groups.size()));
}

Tpm coarse_grain(const Tpm& tpm, const CoarseGraining& grain,
                 std::span<const double> stationary_weights) {
  validate_grain(tpm, grain);
  if (!stationary_weights.empty() && stationary_weights.size() != tpm.size()) {
    throw ValidationError("weights-length-mismatch",
                          std::to_string(stationary_weights.size()));
  }
  const Tpm base = temporal_grain(tpm, grain.stride);
  const int macro_n = static_cast<int>(grain.groups.size());
  const State macro_size = bits::num_states(macro_n);

  std::vector<State> macro_of(base.size());
  for (State s = 0; s < base.size(); ++s) {
    macro_of[s] = map_state(grain, SystemState(s, tpm.n())).index;
  }

  std::vector<double> flat(static_cast<size_t>(macro_size) * macro_size, 0.0);
  std::vector<double> class_weight(macro_size, 0.0);
  for (State s = 0; s < base.size(); ++s) {
    double w = stationary_weights.empty() ? 1.0 : stationary_weights[s];
    if (w < 0.0) throw ValidationError("negative-weight", std::to_string(w));
    class_weight[macro_of[s]] += w;
  }
  for (State m = 0; m < macro_size; ++m) {
    if (class_weight[m] <= 0.0) {
      throw ValidationError("zero-weight-macro-state", std::to_string(m));
    }
  }
  for (State s = 0; s < base.size(); ++s) {
    double w = stationary_weights.empty() ? 1.0 : stationary_weights[s];
    if (w == 0.0) continue;
    const double scale = w / class_weight[macro_of[s]];
    auto row = base.row(s);
    double* orow = flat.data() + static_cast<size_t>(macro_of[s]) * macro_size;
    for (State t = 0; t < base.size(); ++t) {
      if (row[t] != 0.0) orow[macro_of[t]] += scale * row[t];
    }
  }
  return Tpm::from_flat(std::move(flat), macro_n);
}

std::vector<std::vector<NodeSet>> enumerate_partitions(int n) {
  std::vector<std::vector<NodeSet>> out;
  std::vector<int> assign(static_cast<size_t>(n), 0);
  while (true) {
    int num_groups = 0;
    for (int i = 0; i < n; ++i) num_groups = std::max(num_groups, assign[static_cast<size_t>(i)] + 1);
    std::vector<NodeSet> groups(static_cast<size_t>(num_groups), 0);
    for (int i = 0; i < n; ++i) groups[static_cast<size_t>(assign[static_cast<size_t>(i)])] |= NodeSet{1} << i;
    out.push_back(std::move(groups));

    // next restricted growth string
    int i = n - 1;
    while (i > 0) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, assign[static_cast<size_t>(j)]);
      if (assign[static_cast<size_t>(i)] <= prefix_max) break;
      --i;
    }
    if (i == 0) break;
    ++assign[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) assign[static_cast<size_t>(j)] = 0;
  }
  return out;
}

GrainSearchResult grain_search(const Tpm& tpm, SystemState state,
                               const GrainBudget& budget,
                               const PhiOptions& options) {
  if (tpm.n() > budget.micro_limit) {
    throw ValidationError("micro-size-exceeds-bound",
                          std::to_string(tpm.n()) + " > " +
                              std::to_string(budget.micro_limit));
  }
  std::vector<int> strides = budget.strides;
  std::sort(strides.begin(), strides.end());
  strides.erase(std::unique(strides.begin(), strides.end()), strides.end());
  for (int s : strides) {
    if (s < 1) throw ValidationError("stride-out-of-range", std::to_string(s));
  }

  GrainSearchResult result;
  std::vector<CoarseGraining> grains;
  for (const auto& groups : enumerate_partitions(tpm.n())) {
    std::vector<int> thresholds(groups.size(), 1);
    while (true) {
      for (int stride : strides) {
        if (grains.size() >= budget.max_grains) {
          result.partial = true;
          break;
        }
        grains.push_back({groups, thresholds, stride});
      }
      if (result.partial) break;
      // odometer over threshold ranges, last group fastest
      size_t g = groups.size();
      while (g > 0) {
        --g;
        if (thresholds[g] < bits::popcount(groups[g])) {
          ++thresholds[g];
          for (size_t h = g + 1; h < groups.size(); ++h) thresholds[h] = 1;
          break;
        }
        if (g == 0) goto next_partition;
      }
    }
  next_partition:;
    if (result.partial) break;
  }

  std::vector<double> phi(grains.size(), 0.0);
  parallel_for(grains.size(), [&](size_t i) {
    Tpm macro = coarse_grain(tpm, grains[i]);
    SystemState macro_state = map_state(grains[i], state);
    double best = 0.0;
    NodeSet full = static_cast<NodeSet>(macro.size() - 1);
    for (NodeSet subset = 1; subset <= full; ++subset) {
      best = std::max(best,
                      system_phi(macro, subset, macro_state, options).big_phi);
    }
    phi[i] = best;
  });

  result.evaluated = grains.size();
  for (double v : phi) result.max_phi = std::max(result.max_phi, v);
  for (size_t i = 0; i < grains.size(); ++i) {
    if (phi[i] >= result.max_phi - 1e-9) {
      result.maximal.push_back({grains[i], phi[i]});
    }
  }
  std::stable_sort(result.maximal.begin(), result.maximal.end(),
                   [](const GrainResult& a, const GrainResult& b) {
                     return a.big_phi > b.big_phi;
                   });
  return result;
}

}  // namespace cee
