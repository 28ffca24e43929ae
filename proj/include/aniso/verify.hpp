#pragma once

#include <string>
#include <vector>

namespace aniso {

struct VerifyOptions {
    bool fast = false;          ///< desk-scale subset, well under a minute
    bool corrupt_beta = false;  ///< fault injection: the DP beta is perturbed by +1
    unsigned threads = 0;
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double runtime_ms = 0.0;
};

/// Cross-engine invariant suite: beta agreement, counting lemma, supermultiplicativity,
/// partition identity, engine agreement, forced value, sandwich consistency,
/// threshold equivalence and Monte Carlo agreement.
std::vector<VerifyCheck> run_verify(const VerifyOptions& options = {});

}  // namespace aniso
