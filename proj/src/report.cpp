#include "cee/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cee/ioutil.hpp"

namespace cee {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("file-write-error", tmp.string());
    out << content;
    if (!out) throw ValidationError("file-write-error", tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("file-not-found", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

nlohmann::json mask_to_json(NodeSet mask) {
  nlohmann::json arr = nlohmann::json::array();
  bits::for_each(mask, [&](int e) { arr.push_back(e); });
  return arr;
}

const char* direction_name(Direction d) {
  return d == Direction::Cause ? "cause" : "effect";
}

}  // namespace

std::string metric_name(Metric metric) {
  return metric == Metric::Emd ? "emd" : "id";
}

std::string phi_mode_name(PhiMode mode) {
  return mode == PhiMode::Mip ? "mip" : "sum-distinctions";
}

nlohmann::json repertoire_to_json(const Repertoire& rep) {
  nlohmann::json probs = nlohmann::json::array();
  for (State s = 0; s < rep.num_states(); ++s) probs.push_back(round_12sig(rep[s]));
  return {{"purview", mask_to_json(rep.purview())}, {"probs", std::move(probs)}};
}

nlohmann::json mechanism_cut_to_json(const MechanismCut& cut) {
  nlohmann::json severed = nlohmann::json::array();
  for (const auto& [m, p] : cut.severed) severed.push_back({m, p});
  nlohmann::json j{{"severed", std::move(severed)}};
  if (cut.is_bipartition) {
    j["parts"] = {{"mechanism_a", mask_to_json(cut.mech_a)},
                  {"purview_a", mask_to_json(cut.purview_a)},
                  {"mechanism_b", mask_to_json(cut.mech_b)},
                  {"purview_b", mask_to_json(cut.purview_b)}};
  }
  return j;
}

nlohmann::json distinction_to_json(const Distinction& d) {
  auto side = [](const CorePurview& cp) {
    return nlohmann::json{{"purview", mask_to_json(cp.purview)},
                          {"phi", round_12sig(cp.phi)},
                          {"repertoire", repertoire_to_json(cp.repertoire)},
                          {"minimal_cut", mechanism_cut_to_json(cp.minimal_cut)}};
  };
  return {{"mechanism", mask_to_json(d.mechanism)},
          {"cause", side(d.cause)},
          {"effect", side(d.effect)},
          {"phi", round_12sig(d.phi)}};
}

nlohmann::json system_cut_to_json(const SystemCut& cut) {
  return {{"from", mask_to_json(cut.from)}, {"to", mask_to_json(cut.to)}};
}

nlohmann::json complex_to_json(const Complex& c) {
  nlohmann::json state_bits = nlohmann::json::array();
  bits::for_each(c.elements, [&](int e) { state_bits.push_back(c.state.bit(e)); });
  nlohmann::json j{{"elements", mask_to_json(c.elements)},
                   {"big_phi", round_12sig(c.big_phi)},
                   {"state", std::move(state_bits)}};
  if (c.minimal_cut) j["minimal_cut"] = system_cut_to_json(*c.minimal_cut);
  return j;
}

nlohmann::json ces_to_json(const CauseEffectStructure& ces) {
  nlohmann::json distinctions = nlohmann::json::array();
  for (const auto& d : ces.distinctions) distinctions.push_back(distinction_to_json(d));
  nlohmann::json reducible = nlohmann::json::array();
  for (NodeSet m : ces.reducible_mechanisms) reducible.push_back(mask_to_json(m));
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : ces.relations) {
    nlohmann::json faces = nlohmann::json::array();
    for (const auto& sides : r.faces) {
      nlohmann::json f = nlohmann::json::array();
      for (Direction d : sides) f.push_back(direction_name(d));
      faces.push_back(std::move(f));
    }
    relations.push_back({{"members", r.members},
                         {"overlap", mask_to_json(r.overlap)},
                         {"faces", std::move(faces)}});
  }
  return {{"complex", mask_to_json(ces.complex)},
          {"distinctions", std::move(distinctions)},
          {"reducible_mechanisms", std::move(reducible)},
          {"relations", std::move(relations)},
          {"sum_phi", round_12sig(ces.sum_phi)}};
}

nlohmann::json factorization_to_json(const Factorization& f) {
  nlohmann::json groups = nlohmann::json::array();
  for (NodeSet g : f.groups) groups.push_back(mask_to_json(g));
  nlohmann::json j{{"groups", std::move(groups)},
                   {"num_factors", f.groups.size()},
                   {"residual", round_12sig(f.residual)}};
  if (f.best_split_residual) {
    j["best_split_residual"] = round_12sig(*f.best_split_residual);
  }
  return j;
}

nlohmann::json grain_to_json(const CoarseGraining& grain) {
  nlohmann::json groups = nlohmann::json::array();
  for (NodeSet g : grain.groups) groups.push_back(mask_to_json(g));
  return {{"groups", std::move(groups)},
          {"thresholds", grain.thresholds},
          {"stride", grain.stride}};
}

nlohmann::json grain_search_to_json(const GrainSearchResult& result) {
  nlohmann::json maximal = nlohmann::json::array();
  for (const auto& r : result.maximal) {
    maximal.push_back({{"grain", grain_to_json(r.grain)},
                       {"big_phi", round_12sig(r.big_phi)}});
  }
  return {{"maximal", std::move(maximal)},
          {"max_phi", round_12sig(result.max_phi)},
          {"evaluated", result.evaluated},
          {"partial", result.partial}};
}

nlohmann::json ledger_to_json(const ActionLedger& ledger, std::uint64_t area_tn,
                              const PhysicalityResult& phys) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : ledger.events) events.push_back({e.step, e.particle, e.site});
  return {{"s_e0", round_12sig(ledger.kinetic_action)},
          {"bits", ledger.bit_count},
          {"events", std::move(events)},
          {"entropy_area_bits", area_entropy_bits(area_tn)},
          {"physicality_work", round_12sig(phys.work)},
          {"physical", phys.physical}};
}

}  // namespace cee
