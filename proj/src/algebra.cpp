#include "cee/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cee/bits.hpp"

namespace cee {

Tpm tensor_product(const Tpm& a, const Tpm& b, int max_elements) {
  const int n = a.n() + b.n();
  if (n > max_elements) {
    throw ValidationError("tensor-size-limit",
                          std::to_string(n) + " elements exceeds limit " +
                              std::to_string(max_elements));
  }
  const State size = bits::num_states(n);
  const State size_a = a.size();
  std::vector<double> flat(static_cast<size_t>(size) * size);
  for (State sb = 0; sb < b.size(); ++sb) {
    for (State sa = 0; sa < size_a; ++sa) {
      const State s = (sb << a.n()) | sa;
      double* row = flat.data() + static_cast<size_t>(s) * size;
      for (State tb = 0; tb < b.size(); ++tb) {
        const double pb = b(sb, tb);
        if (pb == 0.0) continue;
        for (State ta = 0; ta < size_a; ++ta) {
          row[(tb << a.n()) | ta] = a(sa, ta) * pb;
        }
      }
    }
  }
  return Tpm::from_flat(std::move(flat), n);
}

Tpm group_marginal(const Tpm& tpm, NodeSet group) {
  const int k = bits::popcount(group);
  const State gsize = bits::num_states(k);
  const double weight = static_cast<double>(gsize) / tpm.size();
  std::vector<double> flat(static_cast<size_t>(gsize) * gsize, 0.0);
  for (State s = 0; s < tpm.size(); ++s) {
    const State gu = bits::extract(s, group);
    double* row = flat.data() + static_cast<size_t>(gu) * gsize;
    auto src = tpm.row(s);
    for (State t = 0; t < tpm.size(); ++t) {
      if (src[t] == 0.0) continue;
      row[bits::extract(t, group)] += src[t] * weight;
    }
  }
  return Tpm::from_flat(std::move(flat), k);
}

namespace {

void check_partition(const Tpm& tpm, std::span<const NodeSet> groups) {
  NodeSet seen = 0;
  for (NodeSet g : groups) {
    if (g == 0 || (g & seen)) {
      throw ValidationError("groups-not-partition", "empty or overlapping group");
    }
    seen |= g;
  }
  if (seen != static_cast<NodeSet>(tpm.size() - 1)) {
    throw ValidationError("groups-not-partition", "groups do not cover all elements");
  }
}

double residual_against(const Tpm& tpm, std::span<const NodeSet> groups,
                        std::span<const Tpm> marginals) {
  double worst = 0.0;
  for (State s = 0; s < tpm.size(); ++s) {
    auto row = tpm.row(s);
    double tv = 0.0;
    for (State t = 0; t < tpm.size(); ++t) {
      double prod = 1.0;
      for (size_t gi = 0; gi < groups.size(); ++gi) {
        prod *= marginals[gi](bits::extract(s, groups[gi]),
                              bits::extract(t, groups[gi]));
        if (prod == 0.0) break;
      }
      tv += std::abs(row[t] - prod);
    }
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

}  // namespace

double product_residual(const Tpm& tpm, std::span<const NodeSet> groups) {
  check_partition(tpm, groups);
  std::vector<Tpm> marginals;
  marginals.reserve(groups.size());
  for (NodeSet g : groups) marginals.push_back(group_marginal(tpm, g));
  return residual_against(tpm, groups, marginals);
}

double min_bipartition_residual(const Tpm& tpm) {
  const NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  if (tpm.n() < 2) {
    throw ValidationError("too-few-elements", "bipartition needs n >= 2");
  }
  double best = -1.0;
  // fix element 0 in the second part to visit each unordered split once
  const NodeSet free = all & ~NodeSet{1};
  bits::for_each_submask(free, [&](NodeSet a) {
    if (a == 0) return;
    NodeSet groups[2] = {a, all & ~a};
    double r = product_residual(tpm, groups);
    if (best < 0.0 || r < best) best = r;
  });
  return best;
}

Factorization factorize(const Tpm& tpm, double epsilon) {
  if (epsilon < 0.0) {
    throw ValidationError("negative-epsilon", std::to_string(epsilon));
  }
  const int n = tpm.n();
  const NodeSet all = static_cast<NodeSet>(tpm.size() - 1);
  Factorization out;

  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  };

  if (n > 1) {
    // direct influence: flipping element i's present moves element j's next
    std::vector<double> influence(static_cast<size_t>(n) * n, 0.0);
    for (State s = 0; s < tpm.size(); ++s) {
      for (int i = 0; i < n; ++i) {
        const State flipped = s ^ (State{1} << i);
        if (flipped < s) continue;
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          double d = std::abs(tpm.next_on(s, j) - tpm.next_on(flipped, j));
          auto& cell = influence[static_cast<size_t>(i) * n + j];
          cell = std::max(cell, d);
        }
      }
    }
    // correlated outputs: joint next-pair distribution vs product of marginals
    std::vector<double> corr(static_cast<size_t>(n) * n, 0.0);
    for (State s = 0; s < tpm.size(); ++s) {
      auto row = tpm.row(s);
      std::vector<double> joint11(static_cast<size_t>(n) * n, 0.0);
      for (State t = 0; t < tpm.size(); ++t) {
        if (row[t] == 0.0) continue;
        for (int i = 0; i < n; ++i) {
          if (!((t >> i) & 1u)) continue;
          for (int j = i + 1; j < n; ++j) {
            if ((t >> j) & 1u) joint11[static_cast<size_t>(i) * n + j] += row[t];
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          double d = 2.0 * std::abs(joint11[static_cast<size_t>(i) * n + j] -
                                    tpm.next_on(s, i) * tpm.next_on(s, j));
          auto& cell = corr[static_cast<size_t>(i) * n + j];
          cell = std::max(cell, d);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        bool coupled = influence[static_cast<size_t>(i) * n + j] > epsilon ||
                       influence[static_cast<size_t>(j) * n + i] > epsilon ||
                       corr[static_cast<size_t>(i) * n + j] > epsilon;
        if (coupled) unite(i, j);
      }
    }
  }

  std::vector<NodeSet> groups;
  for (int root = 0; root < n; ++root) {
    if (find(root) != root) continue;
    NodeSet g = 0;
    for (int e = 0; e < n; ++e) {
      if (find(e) == root) g |= NodeSet{1} << e;
    }
    groups.push_back(g);
  }

  double residual = product_residual(tpm, groups);
  while (residual > epsilon && groups.size() > 1 && n <= 10) {
    size_t best_i = 0, best_j = 1;
    double best_r = -1.0;
    for (size_t i = 0; i < groups.size(); ++i) {
      for (size_t j = i + 1; j < groups.size(); ++j) {
        std::vector<NodeSet> candidate;
        for (size_t k = 0; k < groups.size(); ++k) {
          if (k != i && k != j) candidate.push_back(groups[k]);
        }
        candidate.push_back(groups[i] | groups[j]);
        std::sort(candidate.begin(), candidate.end(),
                  [](NodeSet a, NodeSet b) { return bits::lowest(a) < bits::lowest(b); });
        double r = product_residual(tpm, candidate);
        if (best_r < 0.0 || r < best_r) {
          best_r = r;
          best_i = i;
          best_j = j;
        }
      }
    }
    groups[best_i] |= groups[best_j];
    groups.erase(groups.begin() + static_cast<long>(best_j));
    std::sort(groups.begin(), groups.end(),
              [](NodeSet a, NodeSet b) { return bits::lowest(a) < bits::lowest(b); });
    residual = best_r;
  }
  if (residual > epsilon && groups.size() > 1) {
    groups = {all};
    residual = product_residual(tpm, groups);
  }

  out.groups = groups;
  out.residual = residual;
  for (NodeSet g : groups) out.factors.push_back(group_marginal(tpm, g));
  if (groups.size() == 1 && n >= 2 && n <= 8) {
    out.best_split_residual = min_bipartition_residual(tpm);
  }
  return out;
}

}  // namespace cee
