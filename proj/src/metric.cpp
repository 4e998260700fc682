#include "cee/metric.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cee/tpm.hpp"

namespace cee {

namespace {

constexpr double kMassEps = 1e-15;

int hamming(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

}  // namespace

// Successive-shortest-path min-cost flow on the transportation problem
// between the positive and negative parts of p - q. Ground costs are the
// Hamming distances between state indices, so every arc cost is a small
// positive integer and Dijkstra with node potentials applies directly.
double emd_hamming(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("distribution-size-mismatch",
                          std::to_string(p.size()) + " vs " +
                              std::to_string(q.size()));
  }
  struct Node {
    std::uint32_t state;
    double remaining;
  };
  std::vector<Node> src, snk;
  for (size_t i = 0; i < p.size(); ++i) {
    double d = p[i] - q[i];
    if (d > kMassEps) src.push_back({static_cast<std::uint32_t>(i), d});
    else if (d < -kMassEps) snk.push_back({static_cast<std::uint32_t>(i), -d});
  }
  if (src.empty() || snk.empty()) return 0.0;

  const size_t ns = src.size(), nt = snk.size();
  std::vector<double> flow(ns * nt, 0.0);
  std::vector<double> pot_s(ns, 0.0), pot_t(nt, 0.0);
  const double inf = std::numeric_limits<double>::infinity();

  double supply_left = 0.0;
  for (const auto& s : src) supply_left += s.remaining;

  size_t guard = 4 * (ns + nt) * (ns + nt) + 64;
  while (supply_left > kMassEps && guard-- > 0) {
    // Dijkstra over sources (ids 0..ns-1) and sinks (ids ns..ns+nt-1) in the
    // residual graph; reduced costs are nonnegative under the potentials.
    std::vector<double> dist(ns + nt, inf);
    std::vector<int> parent(ns + nt, -1);
    std::vector<bool> done(ns + nt, false);
    for (size_t i = 0; i < ns; ++i) {
      if (src[i].remaining > kMassEps) dist[i] = 0.0;
    }
    while (true) {
      size_t u = ns + nt;
      double best = inf;
      for (size_t v = 0; v < ns + nt; ++v) {
        if (!done[v] && dist[v] < best) { best = dist[v]; u = v; }
      }
      if (u == ns + nt) break;
      done[u] = true;
      if (u < ns) {
        // forward arcs source u -> every sink
        for (size_t j = 0; j < nt; ++j) {
          double rc = hamming(src[u].state, snk[j].state) - pot_s[u] + pot_t[j];
          if (rc < 0.0) rc = 0.0;  // clip fp slack
          if (dist[u] + rc < dist[ns + j]) {
            dist[ns + j] = dist[u] + rc;
            parent[ns + j] = static_cast<int>(u);
          }
        }
      } else {
        // backward arcs sink -> source where flow exists
        size_t j = u - ns;
        for (size_t i = 0; i < ns; ++i) {
          if (flow[i * nt + j] <= kMassEps) continue;
          double rc = -hamming(src[i].state, snk[j].state) + pot_s[i] - pot_t[j];
          if (rc < 0.0) rc = 0.0;
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            parent[i] = static_cast<int>(u);
          }
        }
      }
    }
    // pick the reachable sink with remaining demand and least distance
    size_t tgt = ns + nt;
    double best = inf;
    for (size_t j = 0; j < nt; ++j) {
      if (snk[j].remaining > kMassEps && dist[ns + j] < best) {
        best = dist[ns + j];
        tgt = ns + j;
      }
    }
    if (tgt == ns + nt) break;  // numerically exhausted

    // bottleneck along the alternating path
    double push = snk[tgt - ns].remaining;
    for (size_t v = tgt; parent[v] != -1;) {
      size_t u = static_cast<size_t>(parent[v]);
      if (v >= ns && u < ns) {
        // forward arc: no capacity bound
      } else {
        push = std::min(push, flow[v * nt + (u - ns)]);
      }
      v = u;
      if (parent[v] == -1 && v < ns) push = std::min(push, src[v].remaining);
    }
    if (push <= kMassEps) break;

    for (size_t v = tgt; parent[v] != -1;) {
      size_t u = static_cast<size_t>(parent[v]);
      if (v >= ns && u < ns) flow[u * nt + (v - ns)] += push;
      else flow[v * nt + (u - ns)] -= push;
      v = u;
      if (parent[v] == -1 && v < ns) src[v].remaining -= push;
    }
    snk[tgt - ns].remaining -= push;
    supply_left -= push;

    for (size_t v = 0; v < ns + nt; ++v) {
      if (dist[v] < inf) {
        if (v < ns) pot_s[v] -= dist[v];
        else pot_t[v - ns] -= dist[v];
      }
    }
  }

  double cost = 0.0;
  for (size_t i = 0; i < ns; ++i) {
    for (size_t j = 0; j < nt; ++j) {
      if (flow[i * nt + j] > 0.0) {
        cost += flow[i * nt + j] * hamming(src[i].state, snk[j].state);
      }
    }
  }
  return cost;
}

double intrinsic_difference(std::span<const double> p,
                            std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("distribution-size-mismatch",
                          std::to_string(p.size()) + " vs " +
                              std::to_string(q.size()));
  }
  double best = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    double v = p[i] * std::log2(p[i] / q[i]);
    if (v > best) best = v;
  }
  return best;
}

double distribution_distance(Metric metric, std::span<const double> p,
                             std::span<const double> q) {
  switch (metric) {
    case Metric::Emd: return emd_hamming(p, q);
    case Metric::IntrinsicDifference: return intrinsic_difference(p, q);
  }
  return 0.0;
}

}  // namespace cee
