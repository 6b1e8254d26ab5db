#include "cyclesparse/report.hpp"

#include <cmath>
#include <cstdio>

namespace cyclesparse {

ApproxReport::ApproxReport(const std::string& command, std::uint64_t seed,
                           const std::string& input_bytes) {
  doc_["schema"] = "cyclesparse-report/1";
  doc_["command"] = command;
  doc_["seed"] = seed;
  doc_["input_hash"] = hash_bytes(input_bytes);
  doc_["flags"] = OrderedJson::object();
  doc_["rounds"] = OrderedJson::array();
}

void ApproxReport::set_flag(const std::string& key, const OrderedJson& value) {
  doc_["flags"][key] = value;
}

void ApproxReport::set(const std::string& key, const OrderedJson& value) {
  doc_[key] = value;
}

void ApproxReport::set_real(const std::string& key, double value) {
  doc_[key] = round_sig(value);
}

void ApproxReport::add_round(const OrderedJson& round) {
  doc_["rounds"].push_back(round);
}

std::string ApproxReport::serialize() const { return doc_.dump(2) + "\n"; }

std::string ApproxReport::hash_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double ApproxReport::round_sig(double v, int digits) {
  if (v == 0 || !std::isfinite(v)) return v;
  double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * mag) / mag;
}

}  // namespace cyclesparse
