#pragma once

#include <string>

#include "json.hpp"

namespace cyclesparse {

using OrderedJson = nlohmann::ordered_json;

// Per-run verification record. Deterministic given (input bytes, seed,
// flags): floats are rounded to 12 significant digits and wall-clock time is
// never serialized.
class ApproxReport {
 public:
  ApproxReport(const std::string& command, std::uint64_t seed,
               const std::string& input_bytes);

  void set_flag(const std::string& key, const OrderedJson& value);
  void set(const std::string& key, const OrderedJson& value);
  void set_real(const std::string& key, double value);
  void add_round(const OrderedJson& round);

  std::string serialize() const;

  static std::string hash_bytes(const std::string& bytes);  // fnv1a-64 hex
  static double round_sig(double v, int digits = 12);

 private:
  OrderedJson doc_;
};

}  // namespace cyclesparse
