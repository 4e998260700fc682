#pragma once

#include "cee/algebra.hpp"
#include "cee/grain.hpp"
#include "cee/sim.hpp"
#include "cee/system.hpp"

#include "json.hpp"

namespace cee {

inline constexpr const char* kToolVersion = "0.1.0";

// JSON views of the analysis structures. All floats pass through round_12sig
// and nlohmann::json keeps object keys sorted, so serialization is
// deterministic byte for byte.

nlohmann::json repertoire_to_json(const Repertoire& rep);
nlohmann::json mechanism_cut_to_json(const MechanismCut& cut);
nlohmann::json distinction_to_json(const Distinction& d);
nlohmann::json system_cut_to_json(const SystemCut& cut);
nlohmann::json complex_to_json(const Complex& c);
nlohmann::json ces_to_json(const CauseEffectStructure& ces);
nlohmann::json factorization_to_json(const Factorization& f);
nlohmann::json grain_to_json(const CoarseGraining& grain);
nlohmann::json grain_search_to_json(const GrainSearchResult& result);
nlohmann::json ledger_to_json(const ActionLedger& ledger, std::uint64_t area_tn,
                              const PhysicalityResult& phys);

std::string metric_name(Metric metric);
std::string phi_mode_name(PhiMode mode);

}  // namespace cee
