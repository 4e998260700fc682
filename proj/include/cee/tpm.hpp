#pragma once

#include "cee/bits.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cee {

/// Error with a short machine-readable code (kebab-case) plus detail text.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Assignment of binary values to the n elements of a system, carried both as
/// a packed index (element 0 = least-significant bit) and queryable per bit.
struct SystemState {
  State index = 0;
  int n = 0;

  SystemState() = default;
  SystemState(State idx, int num_elements);

  static SystemState from_bits(std::span<const int> bit_values);

  int bit(int element) const { return (index >> element) & 1u; }
  std::vector<int> to_bits() const;
};

/// Row-stochastic one-step transition probability matrix over the joint
/// states of n binary elements.
///
/// Rows are indexed by the current state, columns by the next state, both
/// little-endian in the element order. Instances are immutable after
/// construction; all accessors are safe for concurrent reads.
class Tpm {
 public:
  /// Validates and builds a Tpm from raw rows. Rows whose sums deviate from 1
  /// by at most `kInputRowTolerance` are renormalized; larger deviations,
  /// negative entries, and dimension mismatches raise ValidationError.
  static Tpm from_rows(const std::vector<std::vector<double>>& raw, int n,
                       std::vector<std::string> labels = {});

  /// Same validation applied to an already-flat row-major matrix.
  static Tpm from_flat(std::vector<double> flat, int n,
                       std::vector<std::string> labels = {});

  static Tpm identity(int n);
  static Tpm uniform_noise(int n);

  int n() const { return n_; }
  State size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double operator()(State current, State next) const {
    return rows_[static_cast<size_t>(current) * size_ + next];
  }

  std::span<const double> row(State current) const {
    return {rows_.data() + static_cast<size_t>(current) * size_, size_};
  }

  /// P(next state of `element` is 1 | current state). Precomputed.
  double next_on(State current, int element) const {
    return next_on_[static_cast<size_t>(current) * n_ + element];
  }

  static constexpr double kInputRowTolerance = 1e-6;
  static constexpr double kInternalTolerance = 1e-9;

  /// Full matrices are dense in the joint state space; 12 elements is
  /// already a 4096 x 4096 matrix.
  static constexpr int kMaxTpmElements = 12;

 private:
  Tpm(int n, std::vector<double> rows, std::vector<std::string> labels);

  int n_;
  State size_;
  std::vector<double> rows_;     // size_ * size_, row-major
  std::vector<double> next_on_;  // size_ * n_
  std::vector<std::string> labels_;
};

/// Validates a raw matrix into a Tpm.
Tpm validate_tpm(const std::vector<std::vector<double>>& raw, int n);

/// Reads a TPM JSON file:
///   { "n": int, "convention": "little-endian", "tpm": [[...], ...],
///     "labels": [...]? }
/// A missing "convention" defaults to little-endian; any other value is
/// rejected.
Tpm read_tpm_file(const std::string& path);

/// Serializes a Tpm to the same schema (floats rounded to 12 significant
/// digits). Returns the JSON text; does not touch the filesystem.
std::string tpm_to_json(const Tpm& tpm);

/// Parses the same schema from a JSON string.
Tpm tpm_from_json(const std::string& text);

}  // namespace cee
