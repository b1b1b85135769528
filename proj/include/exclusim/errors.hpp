#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace exclusim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdmissibilityViolation : SimError {
    using SimError::SimError;
};
struct EmptyConfiguration : SimError {
    using SimError::SimError;
};
struct DegenerateCircumference : SimError {
    using SimError::SimError;
};
struct InfeasibleSpec : SimError {
    using SimError::SimError;
};
struct EmptyWindow : SimError {
    using SimError::SimError;
};
struct WrongModelKind : SimError {
    using SimError::SimError;
};
struct SignViolation : SimError {
    using SimError::SimError;
};
struct PostAdmissibilityFailure : SimError {
    using SimError::SimError;
};
struct InfeasibleGrid : SimError {
    using SimError::SimError;
};
struct NonLatticeInput : SimError {
    using SimError::SimError;
};
struct MismatchedReplicas : SimError {
    using SimError::SimError;
};
struct CrossingDetected : SimError {
    using SimError::SimError;
};
struct RecursionBudgetExceeded : SimError {
    using SimError::SimError;
};
struct DegenerateOrdering : SimError {
    using SimError::SimError;
};
struct SchemaError : SimError {
    std::vector<std::string> issues;
    explicit SchemaError(std::vector<std::string> problems)
        : SimError(join(problems)), issues(std::move(problems)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "config validation failed:";
        for (const auto& e : v) {
            s += "\n  - " + e;
        }
        return s;
    }
};
struct IOFailure : SimError {
    using SimError::SimError;
};

}  // namespace exclusim
