#include "cee/sim.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cee/ioutil.hpp"
#include "json.hpp"

namespace cee {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Position {
  int x = 0;
  int y = 0;
};

int ring_distance(int a, int b, int length) {
  int d = std::abs(a - b) % length;
  return std::min(d, length - d);
}

// +1, -1, or 0 (equidistant / same coordinate) toward `b` along a ring
int ring_step_toward(int a, int b, int length) {
  int forward = ((b - a) % length + length) % length;
  if (forward == 0) return 0;
  int backward = length - forward;
  if (forward < backward) return 1;
  if (backward < forward) return -1;
  return 0;
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw ValidationError("config-invalid", what);
  };
  if (num_particles < 1) fail("num_particles must be >= 1");
  if (lattice_size < 2) fail("lattice_size must be >= 2");
  if (dims != 1 && dims != 2) fail("dims must be 1 or 2");
  if (steps < 1) fail("steps must be >= 1");
  if (!(d_tau > 0.0)) fail("d_tau must be > 0");
  if (mass < 0.0) fail("mass must be >= 0");
  if (hop_prob < 0.0 || hop_prob > 1.0) fail("hop_prob must be in [0, 1]");
  if (coupling < 0.0) fail("coupling must be >= 0");
}

SimOutput simulate(const SimConfig& config) {
  config.validate();
  const int np = config.num_particles;
  const int L = config.lattice_size;
  const double hop_action = config.mass / (2.0 * config.d_tau);

  Rng rng(config.seed);
  std::vector<Position> pos(static_cast<size_t>(np));
  for (int p = 0; p < np; ++p) {
    pos[static_cast<size_t>(p)].x = static_cast<int>(
        (static_cast<long long>(p) * L) / np % L);
  }
  auto site_of = [&](const Position& q) { return q.x + L * q.y; };

  SimOutput out;
  out.ensemble.config = config;
  out.ensemble.paths.assign(static_cast<size_t>(np), {});
  for (int p = 0; p < np; ++p) {
    out.ensemble.paths[static_cast<size_t>(p)].reserve(
        static_cast<size_t>(config.steps) + 1);
    out.ensemble.paths[static_cast<size_t>(p)].push_back(
        site_of(pos[static_cast<size_t>(p)]));
  }

  ActionLedger& ledger = out.ledger;
  for (int step = 0; step < config.steps; ++step) {
    const std::vector<Position> before = pos;  // synchronous update
    for (int p = 0; p < np; ++p) {
      Position& me = pos[static_cast<size_t>(p)];
      if (rng.next_unit() >= config.hop_prob) {
        out.ensemble.paths[static_cast<size_t>(p)].push_back(site_of(me));
        continue;
      }
      int axis = 0;
      if (config.dims == 2) axis = rng.next_unit() < 0.5 ? 0 : 1;

      // nearest other particle before this step (ties: lowest index)
      int toward = 0;
      if (np > 1 && config.coupling > 0.0) {
        int nearest = -1, nearest_dist = 0;
        for (int q = 0; q < np; ++q) {
          if (q == p) continue;
          const Position& other = before[static_cast<size_t>(q)];
          int d = ring_distance(before[static_cast<size_t>(p)].x, other.x, L);
          if (config.dims == 2) {
            d += ring_distance(before[static_cast<size_t>(p)].y, other.y, L);
          }
          if (nearest < 0 || d < nearest_dist) {
            nearest = q;
            nearest_dist = d;
          }
        }
        const Position& other = before[static_cast<size_t>(nearest)];
        toward = axis == 0
                     ? ring_step_toward(before[static_cast<size_t>(p)].x, other.x, L)
                     : ring_step_toward(before[static_cast<size_t>(p)].y, other.y, L);
      }

      int dir;
      const double u = rng.next_unit();
      if (toward != 0) {
        const double p_toward = (1.0 + config.coupling) / (2.0 + config.coupling);
        dir = u < p_toward ? toward : -toward;
      } else {
        dir = u < 0.5 ? 1 : -1;
      }
      int& coord = axis == 0 ? me.x : me.y;
      coord = ((coord + dir) % L + L) % L;

      ledger.kinetic_action += hop_action;
      const auto target = static_cast<std::uint64_t>(
          std::floor(ledger.kinetic_action / kLn2));
      while (ledger.bit_count < target) {
        ledger.events.push_back({step, p, site_of(me)});
        ++ledger.bit_count;
      }
      out.ensemble.paths[static_cast<size_t>(p)].push_back(site_of(me));
    }
  }
  return out;
}

InfoBits info_bits(double action) {
  if (action < 0.0) {
    throw ValidationError("negative-action", std::to_string(action));
  }
  InfoBits out;
  out.bits = action / kLn2;
  out.events = static_cast<std::uint64_t>(std::floor(out.bits));
  return out;
}

PhysicalityResult physicality(Regime regime, bool measured_equals_measuring,
                              double k_b_t) {
  if (k_b_t < 0.0) {
    throw ValidationError("negative-temperature", std::to_string(k_b_t));
  }
  PhysicalityResult out;
  if (regime == Regime::Lorentzian && !measured_equals_measuring) {
    out.work = k_b_t;
  }
  out.physical = out.work > 0.0;
  return out;
}

std::uint64_t area_entropy_bits(std::uint64_t area_tn) { return area_tn; }

Encoder Encoder::half_ring(const SimConfig& config) {
  Encoder enc;
  enc.out_bits = config.num_particles;
  const int L = config.lattice_size;
  enc.map = [L](std::span<const int> sites) {
    State s = 0;
    for (size_t p = 0; p < sites.size(); ++p) {
      int x = sites[p] % L;
      if (2 * x >= L) s |= State{1} << p;
    }
    return s;
  };
  return enc;
}

Tpm empirical_tpm(const TrajectoryEnsemble& ensemble, const Encoder& encoder,
                  double smoothing) {
  if (smoothing < 0.0) {
    throw ValidationError("negative-smoothing", std::to_string(smoothing));
  }
  if (encoder.out_bits < 1 || encoder.out_bits > Tpm::kMaxTpmElements) {
    throw ValidationError("element-count-out-of-range",
                          std::to_string(encoder.out_bits));
  }
  const int np = static_cast<int>(ensemble.paths.size());
  if (np == 0 || ensemble.paths[0].empty()) {
    throw ValidationError("empty-ensemble", "no paths");
  }
  const size_t length = ensemble.paths[0].size();
  for (const auto& path : ensemble.paths) {
    if (path.size() != length) {
      throw ValidationError("ragged-ensemble", "path lengths differ");
    }
  }
  const State size = bits::num_states(encoder.out_bits);
  std::vector<int> sites(static_cast<size_t>(np));
  auto encode = [&](size_t t) {
    for (int p = 0; p < np; ++p) {
      sites[static_cast<size_t>(p)] = ensemble.paths[static_cast<size_t>(p)][t];
    }
    State s = encoder.map(sites);
    if (s >= size) {
      throw ValidationError("encoder-not-total",
                            "encoded state " + std::to_string(s));
    }
    return s;
  };

  std::vector<double> counts(static_cast<size_t>(size) * size, smoothing);
  State prev = encode(0);
  for (size_t t = 1; t < length; ++t) {
    State cur = encode(t);
    counts[static_cast<size_t>(prev) * size + cur] += 1.0;
    prev = cur;
  }
  for (State s = 0; s < size; ++s) {
    double* row = counts.data() + static_cast<size_t>(s) * size;
    double total = 0.0;
    for (State t = 0; t < size; ++t) total += row[t];
    if (total == 0.0) {
      for (State t = 0; t < size; ++t) row[t] = 1.0 / size;
    } else {
      for (State t = 0; t < size; ++t) row[t] /= total;
    }
  }
  return Tpm::from_flat(std::move(counts), encoder.out_bits);
}

namespace {

nlohmann::json config_to_json(const SimConfig& c) {
  nlohmann::json j;
  j["num_particles"] = c.num_particles;
  j["lattice_size"] = c.lattice_size;
  j["dims"] = c.dims;
  j["steps"] = c.steps;
  j["d_tau"] = round_12sig(c.d_tau);
  j["mass"] = round_12sig(c.mass);
  j["hop_prob"] = round_12sig(c.hop_prob);
  j["coupling"] = round_12sig(c.coupling);
  j["seed"] = c.seed;
  j["area_tn"] = c.area_tn;
  return j;
}

SimConfig config_from_parsed(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ValidationError("config-invalid", "not an object");
  }
  SimConfig c;
  auto get_int = [&](const char* key, int& slot) {
    if (j.contains(key)) slot = j.at(key).get<int>();
  };
  get_int("num_particles", c.num_particles);
  get_int("lattice_size", c.lattice_size);
  get_int("dims", c.dims);
  get_int("steps", c.steps);
  if (j.contains("d_tau")) c.d_tau = j.at("d_tau").get<double>();
  if (j.contains("mass")) c.mass = j.at("mass").get<double>();
  if (j.contains("hop_prob")) c.hop_prob = j.at("hop_prob").get<double>();
  if (j.contains("coupling")) c.coupling = j.at("coupling").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("area_tn")) c.area_tn = j.at("area_tn").get<std::uint64_t>();
  c.validate();
  return c;
}

}  // namespace

std::string trajectory_to_json(const SimOutput& output) {
  nlohmann::json j;
  j["config"] = config_to_json(output.ensemble.config);
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& path : output.ensemble.paths) paths.push_back(path);
  j["paths"] = std::move(paths);
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : output.ledger.events) {
    events.push_back({e.step, e.particle, e.site});
  }
  j["ledger"] = {{"s_e0", round_12sig(output.ledger.kinetic_action)},
                 {"bits", output.ledger.bit_count},
                 {"events", std::move(events)}};
  return j.dump(2);
}

SimOutput trajectory_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("json-parse-error", e.what());
  }
  SimOutput out;
  out.ensemble.config = config_from_parsed(j.at("config"));
  for (const auto& path : j.at("paths")) {
    out.ensemble.paths.push_back(path.get<std::vector<int>>());
  }
  const auto& ledger = j.at("ledger");
  out.ledger.kinetic_action = ledger.at("s_e0").get<double>();
  out.ledger.bit_count = ledger.at("bits").get<std::uint64_t>();
  for (const auto& e : ledger.at("events")) {
    out.ledger.events.push_back(
        {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
  }
  return out;
}

SimConfig sim_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("json-parse-error", e.what());
  }
  return config_from_parsed(j);
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("file-not-found", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SimOutput read_trajectory_file(const std::string& path) {
  return trajectory_from_json(slurp(path));
}

SimConfig read_sim_config_file(const std::string& path) {
  return sim_config_from_json(slurp(path));
}

}  // namespace cee
