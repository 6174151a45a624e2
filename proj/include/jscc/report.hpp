#pragma once

#include <string>

#include "json.hpp"
#include "jscc/feasibility.hpp"
#include "jscc/optimize.hpp"
#include "jscc/sim.hpp"

namespace jscc {

inline constexpr const char* tool_version = "0.1.0";

// Command envelope. Text output prints elapsed_seconds; the structured form
// deliberately omits it so equal inputs serialize byte-identically.
struct Report {
  std::string command;
  std::uint64_t digest = 0;  // scenario digest
  nlohmann::json flags = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  double elapsed_seconds = 0.0;
};

// 12 significant digits.
std::string fmt_bits(double v);

nlohmann::json to_json(const Condition& c);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const SumBound& b);
nlohmann::json to_json(const ParamChain& c);
nlohmann::json to_json(const OptResult& r);
nlohmann::json to_json(const GridResult& r);
nlohmann::json to_json(const SimConfig& c);
nlohmann::json to_json(const SimReport& r);
nlohmann::json to_json(const TraceRow& t);
nlohmann::json to_json(const RateHint& h);
nlohmann::json to_json(const UncodedReport& r);

// text: aligned tables for people; structured: sorted-key JSON document,
// stable byte-for-byte for equal inputs; csv: fixed header plus one row per
// condition, trace row, optimizer start, or summary.
std::string emit_text(const Report& rep);
std::string emit_structured(const Report& rep);
std::string emit_csv(const Report& rep);

std::string emit(const Report& rep, const std::string& format);  // throws on unknown name

}  // namespace jscc
