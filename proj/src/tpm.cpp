#include "cee/tpm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cee/ioutil.hpp"
#include "json.hpp"

namespace cee {

SystemState::SystemState(State idx, int num_elements) : index(idx), n(num_elements) {
  if (num_elements < 0 || num_elements > kMaxElements) {
    throw ValidationError("element-count-out-of-range",
                          "n = " + std::to_string(num_elements));
  }
  if (num_elements < kMaxElements && idx >= bits::num_states(num_elements)) {
    throw ValidationError("state-out-of-range",
                          "index " + std::to_string(idx) + " for n = " +
                              std::to_string(num_elements));
  }
}

SystemState SystemState::from_bits(std::span<const int> bit_values) {
  State idx = 0;
  for (size_t i = 0; i < bit_values.size(); ++i) {
    if (bit_values[i] != 0 && bit_values[i] != 1) {
      throw ValidationError("state-bit-invalid", std::to_string(bit_values[i]));
    }
    idx |= State(bit_values[i]) << i;
  }
  return SystemState(idx, static_cast<int>(bit_values.size()));
}

std::vector<int> SystemState::to_bits() const {
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = bit(i);
  return out;
}

Tpm::Tpm(int n, std::vector<double> rows, std::vector<std::string> labels)
    : n_(n), size_(bits::num_states(n)), rows_(std::move(rows)),
      labels_(std::move(labels)) {
  next_on_.assign(static_cast<size_t>(size_) * n_, 0.0);
  for (State s = 0; s < size_; ++s) {
    const double* row = rows_.data() + static_cast<size_t>(s) * size_;
    for (State t = 0; t < size_; ++t) {
      double p = row[t];
      if (p == 0.0) continue;
      for (int e = 0; e < n_; ++e) {
        if ((t >> e) & 1u) next_on_[static_cast<size_t>(s) * n_ + e] += p;
      }
    }
  }
}

Tpm Tpm::from_flat(std::vector<double> flat, int n,
                   std::vector<std::string> labels) {
  if (n < 1 || n > kMaxTpmElements) {
    throw ValidationError("element-count-out-of-range", std::to_string(n));
  }
  const State size = bits::num_states(n);
  if (flat.size() != static_cast<size_t>(size) * size) {
    throw ValidationError("dimension-mismatch",
                          "expected " + std::to_string(size) + "x" +
                              std::to_string(size) + " matrix");
  }
  if (!labels.empty() && labels.size() != static_cast<size_t>(n)) {
    throw ValidationError("labels-length-mismatch",
                          std::to_string(labels.size()) + " labels for n = " +
                              std::to_string(n));
  }
  for (State s = 0; s < size; ++s) {
    double* row = flat.data() + static_cast<size_t>(s) * size;
    double sum = 0.0;
    for (State t = 0; t < size; ++t) {
      if (row[t] < 0.0) {
        throw ValidationError("negative-entry",
                              "row " + std::to_string(s) + ", col " +
                                  std::to_string(t));
      }
      sum += row[t];
    }
    if (std::abs(sum - 1.0) > kInputRowTolerance) {
      throw ValidationError("row-not-stochastic",
                            "row " + std::to_string(s) + " sums to " +
                                std::to_string(sum));
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      for (State t = 0; t < size; ++t) row[t] /= sum;
    }
  }
  return Tpm(n, std::move(flat), std::move(labels));
}

Tpm Tpm::from_rows(const std::vector<std::vector<double>>& raw, int n,
                   std::vector<std::string> labels) {
  if (n < 1 || n > kMaxTpmElements) {
    throw ValidationError("element-count-out-of-range", std::to_string(n));
  }
  const State size = bits::num_states(n);
  if (raw.size() != size) {
    throw ValidationError("dimension-mismatch",
                          std::to_string(raw.size()) + " rows, expected " +
                              std::to_string(size));
  }
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(size) * size);
  for (const auto& row : raw) {
    if (row.size() != size) {
      throw ValidationError("dimension-mismatch",
                            "row has " + std::to_string(row.size()) +
                                " entries, expected " + std::to_string(size));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_flat(std::move(flat), n, std::move(labels));
}

Tpm Tpm::identity(int n) {
  const State size = bits::num_states(n);
  std::vector<double> flat(static_cast<size_t>(size) * size, 0.0);
  for (State s = 0; s < size; ++s) flat[static_cast<size_t>(s) * size + s] = 1.0;
  return from_flat(std::move(flat), n);
}

Tpm Tpm::uniform_noise(int n) {
  const State size = bits::num_states(n);
  std::vector<double> flat(static_cast<size_t>(size) * size, 1.0 / size);
  return from_flat(std::move(flat), n);
}

Tpm validate_tpm(const std::vector<std::vector<double>>& raw, int n) {
  return Tpm::from_rows(raw, n);
}

namespace {

Tpm tpm_from_parsed(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("tpm-file-invalid", "not an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw ValidationError("tpm-file-invalid", "missing integer field 'n'");
  }
  int n = j["n"].get<int>();
  if (j.contains("convention")) {
    const auto& c = j["convention"];
    if (!c.is_string() || c.get<std::string>() != "little-endian") {
      throw ValidationError("unknown-convention", c.dump());
    }
  }
  if (!j.contains("tpm") || !j["tpm"].is_array()) {
    throw ValidationError("tpm-file-invalid", "missing array field 'tpm'");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& r : j["tpm"]) {
    if (!r.is_array()) throw ValidationError("tpm-file-invalid", "row is not an array");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw ValidationError("tpm-file-invalid", "non-numeric entry");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
  }
  return Tpm::from_rows(rows, n, std::move(labels));
}

}  // namespace

Tpm read_tpm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("file-not-found", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tpm_from_json(ss.str());
}

Tpm tpm_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("json-parse-error", e.what());
  }
  return tpm_from_parsed(j);
}

std::string tpm_to_json(const Tpm& tpm) {
  nlohmann::json j;
  j["n"] = tpm.n();
  j["convention"] = "little-endian";
  if (!tpm.labels().empty()) j["labels"] = tpm.labels();
  nlohmann::json rows = nlohmann::json::array();
  for (State s = 0; s < tpm.size(); ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (State t = 0; t < tpm.size(); ++t) row.push_back(round_12sig(tpm(s, t)));
    rows.push_back(std::move(row));
  }
  j["tpm"] = std::move(rows);
  return j.dump(2);
}

}  // namespace cee
