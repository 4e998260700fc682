#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "cee/algebra.hpp"
#include "cee/sim.hpp"
#include "support/fixtures.hpp"

using namespace cee;

namespace {

constexpr double kLn2 = std::numbers::ln2;

SimConfig small_config() {
  SimConfig c;
  c.num_particles = 2;
  c.lattice_size = 8;
  c.steps = 500;
  c.hop_prob = 0.7;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("no hops, no action, no bits") {
  SimConfig c = small_config();
  c.hop_prob = 0.0;
  auto out = simulate(c);
  CHECK(out.ledger.kinetic_action == 0.0);
  CHECK(out.ledger.bit_count == 0);
  CHECK(out.ledger.events.empty());
  for (const auto& path : out.ensemble.paths) {
    for (int site : path) CHECK(site == path.front());
  }
}

TEST_CASE("one hop at the default mass acquires exactly one bit") {
  SimConfig c;
  c.num_particles = 1;
  c.lattice_size = 2;
  c.steps = 1;
  c.hop_prob = 1.0;
  c.d_tau = 1.0;
  c.mass = 2.0 * kLn2;
  c.seed = 3;
  auto out = simulate(c);
  CHECK(out.ledger.kinetic_action == kLn2);
  CHECK(out.ledger.bit_count == 1);
  REQUIRE(out.ledger.events.size() == 1);
  CHECK(out.ledger.events[0].step == 0);
  CHECK(out.ledger.events[0].site == out.ensemble.paths[0][1]);
}

TEST_CASE("four hops make four bits") {
  SimConfig c;
  c.num_particles = 1;
  c.lattice_size = 2;
  c.steps = 4;
  c.hop_prob = 1.0;
  c.mass = 2.0 * kLn2;
  c.seed = 9;
  auto out = simulate(c);
  CHECK(out.ledger.kinetic_action == doctest::Approx(4 * kLn2).epsilon(1e-15));
  CHECK(out.ledger.bit_count == 4);
  CHECK(out.ledger.events.size() == 4);
}

TEST_CASE("event count tracks floor(action / ln2) after every step") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig c = small_config();
    c.seed = seed;
    c.mass = 1.7;  // misaligned with ln2 on purpose
    auto out = simulate(c);
    const double hop_action = c.mass / (2.0 * c.d_tau);
    double action = 0.0;
    size_t events_seen = 0;
    for (int step = 0; step < c.steps; ++step) {
      for (int p = 0; p < c.num_particles; ++p) {
        const auto& path = out.ensemble.paths[static_cast<size_t>(p)];
        if (path[static_cast<size_t>(step) + 1] != path[static_cast<size_t>(step)]) {
          action += hop_action;
        }
      }
      const auto expected = static_cast<std::uint64_t>(std::floor(action / kLn2));
      while (events_seen < out.ledger.events.size() &&
             out.ledger.events[events_seen].step <= step) {
        ++events_seen;
      }
      CHECK(events_seen == expected);
    }
    CHECK(out.ledger.kinetic_action == doctest::Approx(action).epsilon(1e-12));
    CHECK(out.ledger.bit_count == out.ledger.events.size());
  }
}

TEST_CASE("paths move by at most one hop per step") {
  SimConfig c = small_config();
  c.dims = 2;
  c.lattice_size = 5;
  auto out = simulate(c);
  const int L = c.lattice_size;
  for (const auto& path : out.ensemble.paths) {
    CHECK(path.size() == static_cast<size_t>(c.steps) + 1);
    for (size_t t = 1; t < path.size(); ++t) {
      int ax = path[t - 1] % L, ay = path[t - 1] / L;
      int bx = path[t] % L, by = path[t] / L;
      int dx = std::min(std::abs(ax - bx), L - std::abs(ax - bx));
      int dy = std::min(std::abs(ay - by), L - std::abs(ay - by));
      CHECK(dx + dy <= 1);
    }
  }
}

TEST_CASE("identical configs give bit-identical runs and files") {
  SimConfig c = small_config();
  c.coupling = 0.5;
  auto a = simulate(c);
  auto b = simulate(c);
  CHECK(a.ensemble.paths == b.ensemble.paths);
  CHECK(a.ledger.kinetic_action == b.ledger.kinetic_action);
  CHECK(trajectory_to_json(a) == trajectory_to_json(b));
  auto parsed = trajectory_from_json(trajectory_to_json(a));
  CHECK(parsed.ensemble.paths == a.ensemble.paths);
  CHECK(parsed.ledger.bit_count == a.ledger.bit_count);
}

TEST_CASE("action is nondecreasing and zero only without hops") {
  SimConfig c = small_config();
  c.steps = 50;
  auto out = simulate(c);
  int hops = 0;
  for (const auto& path : out.ensemble.paths) {
    for (size_t t = 1; t < path.size(); ++t) {
      if (path[t] != path[t - 1]) ++hops;
    }
  }
  CHECK(out.ledger.kinetic_action ==
        doctest::Approx(hops * c.mass / (2 * c.d_tau)).epsilon(1e-12));
  CHECK((hops == 0) == (out.ledger.kinetic_action == 0.0));
}

TEST_CASE("info_bits follows the action-to-bits rule") {
  CHECK(info_bits(3 * kLn2).bits == 3.0);
  CHECK(info_bits(3 * kLn2).events == 3);
  CHECK(info_bits(0.0).bits == 0.0);
  CHECK(info_bits(kLn2 / 2).bits == doctest::Approx(0.5));
  CHECK(info_bits(kLn2 / 2).events == 0);
  CHECK_THROWS_WITH_AS(info_bits(-0.1), doctest::Contains("negative-action"),
                       ValidationError);
}

TEST_CASE("physicality table") {
  const double kbt = 1.7;
  auto euclid = physicality(Regime::Euclidean, false, kbt);
  CHECK(euclid.work == 0.0);
  CHECK_FALSE(euclid.physical);
  CHECK(physicality(Regime::Euclidean, true, kbt).work == 0.0);

  auto mediated = physicality(Regime::Lorentzian, false, kbt);
  CHECK(mediated.work == kbt);
  CHECK(mediated.physical);

  auto self = physicality(Regime::Lorentzian, true, kbt);
  CHECK(self.work == 0.0);
  CHECK_FALSE(self.physical);

  CHECK_THROWS_AS(physicality(Regime::Lorentzian, false, -1.0), ValidationError);
}

TEST_CASE("area entropy is one bit per unit area") {
  CHECK(area_entropy_bits(100) == 100);
  CHECK(area_entropy_bits(0) == 0);
  CHECK(area_entropy_bits(7) == 7);
}

TEST_CASE("the two-site alternator estimates a NOT chain") {
  SimConfig c;
  c.num_particles = 1;
  c.lattice_size = 2;
  c.steps = 20000;
  c.hop_prob = 1.0;
  c.seed = 5;
  auto out = simulate(c);
  Tpm t = empirical_tpm(out.ensemble, Encoder::half_ring(c), 1.0);
  const double tol = 2.0 * 1.0 / c.steps;
  CHECK(std::abs(t(0, 1) - 1.0) <= tol);
  CHECK(std::abs(t(1, 0) - 1.0) <= tol);
}

TEST_CASE("a frozen walker estimates a near-identity chain") {
  SimConfig c = small_config();
  c.num_particles = 1;
  c.hop_prob = 0.0;
  c.steps = 1000;
  auto out = simulate(c);
  Tpm t = empirical_tpm(out.ensemble, Encoder::half_ring(c), 1.0);
  State occupied = 2 * (out.ensemble.paths[0][0] % c.lattice_size) >= c.lattice_size;
  CHECK(t(occupied, occupied) >= 0.99);
}

TEST_CASE("independent walkers give a near-product empirical TPM") {
  SimConfig c;
  c.num_particles = 2;
  c.lattice_size = 8;
  c.steps = 100000;
  c.hop_prob = 0.8;
  c.coupling = 0.0;
  c.seed = 11;
  auto out = simulate(c);
  Tpm t = empirical_tpm(out.ensemble, Encoder::half_ring(c));
  CHECK(min_bipartition_residual(t) <= 0.05);
}

TEST_CASE("config invariants are enforced") {
  SimConfig c;
  c.num_particles = 0;
  CHECK_THROWS_WITH_AS(simulate(c), doctest::Contains("config-invalid"),
                       ValidationError);
  c = SimConfig{};
  c.hop_prob = 1.5;
  CHECK_THROWS_AS(simulate(c), ValidationError);
  c = SimConfig{};
  c.d_tau = 0.0;
  CHECK_THROWS_AS(simulate(c), ValidationError);
  CHECK_THROWS_AS(sim_config_from_json(R"({"steps": -1})"), ValidationError);
}

TEST_CASE("encoder totality is checked") {
  SimConfig c = small_config();
  c.steps = 10;
  auto out = simulate(c);
  Encoder bad;
  bad.out_bits = 1;
  bad.map = [](std::span<const int>) { return State{7}; };
  CHECK_THROWS_WITH_AS(empirical_tpm(out.ensemble, bad),
                       doctest::Contains("encoder-not-total"), ValidationError);
}
