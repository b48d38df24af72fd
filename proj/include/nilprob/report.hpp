#pragma once

#include <string>

#include <json.hpp>

#include "nilprob/rational.hpp"
#include "nilprob/sampling.hpp"

namespace nilprob {

inline constexpr const char* kLibraryVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// exact rationals are serialized as strings so no precision is lost
inline Json rational_json(const Rational& r) {
    Json j;
    j["num"] = r.numerator().to_string();
    j["den"] = r.denominator().to_string();
    j["decimal"] = r.to_double();
    return j;
}

inline Json estimate_json(const EstimateResult& e) {
    Json j;
    j["point"] = e.point;
    j["trials"] = e.trials;
    j["successes"] = e.successes;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["seed"] = e.seed;
    return j;
}

struct Report {
    Json body;
    std::string csv;  // populated by commands with a CSV view

    std::string render(const std::string& format) const {
        if (format == "csv" && !csv.empty()) return csv;
        return body.dump(2) + "\n";
    }
};

}  // namespace nilprob
