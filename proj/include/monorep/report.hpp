#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace monorep {

// Outcome of a semi-decidable probe.  HOLDS is reserved for conclusions that
// do not depend on a discretization; grid scans can only reach
// HOLDS_AT_RESOLUTION.  POSSIBLE_FAIL flags a violation seen through a
// lower-bound evaluation that no exact path could confirm.
enum class Verdict {
    Holds,
    HoldsAtResolution,
    Fails,
    PossibleFail,
    Inapplicable,
    Error,
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "HOLDS";
        case Verdict::HoldsAtResolution: return "HOLDS_AT_RESOLUTION";
        case Verdict::Fails: return "FAILS";
        case Verdict::PossibleFail: return "POSSIBLE_FAIL";
        case Verdict::Inapplicable: return "INAPPLICABLE";
        default: return "ERROR";
    }
}

struct CheckReport {
    Verdict verdict = Verdict::Error;
    std::string what;                      // short description of the check
    std::optional<PairedPoint> witness;    // violating point, when FAILS
    double worst = 0.0;                    // worst signed deviation observed
    double tol = 0.0;                      // tolerance the verdict used
    double resolution = 0.0;               // grid resolution, when relevant
    std::vector<CheckReport> sub;          // component probes

    bool passed() const {
        return verdict == Verdict::Holds || verdict == Verdict::HoldsAtResolution;
    }
    bool failed() const { return verdict == Verdict::Fails; }
};

}  // namespace monorep
