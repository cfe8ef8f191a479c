// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic CSV/JSON emission. Doubles print as %.17g so outputs are
// byte-stable and round-trip exactly; every persisted document starts with a
// provenance block (version, seed, config hash).
#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dynwalk/estimators.hpp"
#include "dynwalk/stats.hpp"
#include "dynwalk/sweep.hpp"
#include "dynwalk/timeline.hpp"
#include "dynwalk/version.hpp"

namespace dynwalk {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Provenance {
    std::string subcommand;
    std::uint64_t seed = 0;
    std::string args;  // canonical argument string

    std::string config_hash() const { return hex64(fnv1a(subcommand + "|" + args)); }
};

inline void write_csv_provenance(std::ostream& os, const Provenance& p) {
    os << "# dynwalk " << kVersion << " " << p.subcommand << "\n";
    os << "# seed=" << p.seed << " config=" << p.config_hash() << "\n";
    os << "# args: " << p.args << "\n";
}

inline nlohmann::json provenance_json(const Provenance& p) {
    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["subcommand"] = p.subcommand;
    meta["seed"] = p.seed;
    meta["config"] = p.config_hash();
    meta["args"] = p.args;
    return meta;
}

inline nlohmann::json to_json(const McEstimate& e) {
    nlohmann::json j;
    j["trials"] = e.trials;
    j["successes"] = e.successes;
    j["estimate"] = e.estimate;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    if (e.reference) j["reference"] = *e.reference;
    if (e.z) j["z"] = *e.z;
    return j;
}

inline nlohmann::json to_json(const RatioEstimate& r) {
    nlohmann::json j;
    j["ratio"] = r.ratio;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    return j;
}

inline nlohmann::json to_json(const SweepResult& r) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["n"] = r.n;
    nlohmann::json iv = nlohmann::json::array();
    for (const auto& [a, b] : r.intervals) iv.push_back({a, b});
    j["intervals"] = iv;
    j["total_measure"] = r.total_measure;
    j["event_count"] = r.event_count;
    return j;
}

inline nlohmann::json to_json(const StepTimeline& tl) {
    nlohmann::json j;
    j["index"] = tl.index;
    j["initial"] = {tl.initial.dx, tl.initial.dy};
    j["horizon"] = tl.horizon;
    nlohmann::json ev = nlohmann::json::array();
    for (const TimedValue& e : tl.events) ev.push_back({e.time, e.value.dx, e.value.dy});
    j["events"] = ev;
    return j;
}

/// One CSV row of the shared estimate schema:
/// lemma,params,trials,successes,estimate,ci_low,ci_high,reference,z
inline constexpr const char* kEstimateCsvHeader =
    "lemma,params,trials,successes,estimate,ci_low,ci_high,reference,z";

inline std::string estimate_csv_row(const std::string& lemma, const std::string& params,
                                    const McEstimate& e) {
    std::string row = lemma + "," + params + "," + std::to_string(e.trials) + "," +
                      std::to_string(e.successes) + "," + format_double(e.estimate) + "," +
                      format_double(e.ci_low) + "," + format_double(e.ci_high) + ",";
    if (e.reference) row += format_double(*e.reference);
    row += ",";
    if (e.z) row += format_double(*e.z);
    return row;
}

}  // namespace dynwalk
