#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpr/documents.hpp"

namespace qpr {

enum class Suite { All, Qubit, Qudit };

std::string to_string(Suite suite);
/// "all", "qubit" or "qudit"; InvalidArgumentError otherwise.
Suite parse_suite(const std::string& text);

struct VerifyOptions {
    Suite suite = Suite::All;
    /// Overrides every randomized criterion's trial count when set.
    std::optional<std::size_t> trials;
    std::uint64_t seed = 7;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Real-valued entries are mode-tagged numbers.
    Json details;
};

struct VerifyReport {
    Suite suite = Suite::All;
    std::uint64_t seed = 0;
    std::optional<std::size_t> trials;
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    Json to_json() const;
};

/// Criterion ids run by a suite: qubit 1-10 and 12, qudit 11, all 1-12.
std::vector<int> suite_criteria(Suite suite);

/// One acceptance criterion. Deterministic for a given seed and trial count.
CriterionResult run_criterion(int id, const VerifyOptions& options);

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace qpr
