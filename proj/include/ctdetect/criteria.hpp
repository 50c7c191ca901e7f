#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctdetect/correlation.hpp"
#include "ctdetect/norms.hpp"
#include "ctdetect/states.hpp"

namespace ctd {

enum class CriterionId { T1, T2, T3, T4, CHSH };

enum class DetectedClass { GME, NOT_FULLY_SEPARABLE, CHSH_VIOLATION, NONE };

const char* to_string(CriterionId id);
const char* to_string(DetectedClass c);
std::optional<CriterionId> parse_criterion(const std::string& token); // "t1".."t4", "chsh"

// One elementary threshold comparison inside a criterion. `label` names the
// statistic (matricization or aggregate), `k` the Ky Fan order where that
// applies (0 otherwise). A violation is strict: value > threshold.
struct CriterionTest {
    std::string label;
    int k = 0;
    double value = 0.0;
    double threshold = 0.0;

    double margin() const { return value - threshold; }
};

struct CriterionResult {
    CriterionId criterion_id;
    std::vector<CriterionTest> tests;
    bool violated = false;
    double margin = 0.0; // max over tests of value - threshold
    DetectedClass detected_class = DetectedClass::NONE;

    const CriterionTest& best_test() const;
    std::string to_json() const;
};

// Pretty-printed JSON array of results, the detect command's output shape.
std::string results_to_json(const std::vector<CriterionResult>& results);

// T1: three parties of equal dimension d. The standard norm of the full
// correlation tensor certifies GME above sqrt(8(d-1)(d^2-1)/d^3)
// (sqrt(3) for qubits).
CriterionResult evaluate_t1(const DensityMatrix& rho);

// T2: three qubits. For k = 1..3 the average of the Ky Fan k norms of the
// three single-party matricizations certifies GME above (2k+sqrt(3))/3.
// The per-matricization variant (thresholds sqrt(3), 2, 3) is evaluated too.
CriterionResult evaluate_t2(const DensityMatrix& rho);

// T3: four qubits. Averages the Ky Fan k norms of the three two-party
// matricizations 12|34, 13|24, 14|23; GME above 2 sqrt(k) for k <= 3 and
// 1 + 2k/3 for k = 4..9.
CriterionResult evaluate_t3(const DensityMatrix& rho);

// T4: any party count and local dimensions. The trace norm of every
// matricization with party 1 on the row side is tested against
// prod_j sqrt(2(d_j-1)/d_j); any violation rules out full separability.
CriterionResult evaluate_t4(const DensityMatrix& rho);

// Two qubits: sum of the two largest squared singular values of the
// correlation matrix exceeds 1 iff some CHSH setting violates the bound.
CriterionResult evaluate_chsh(const DensityMatrix& rho);

CriterionResult evaluate_criterion(CriterionId id, const DensityMatrix& rho);

// Criteria a state's dimensions admit, in enum order.
std::vector<CriterionId> applicable_criteria(const std::vector<int>& dims);

// Condensed view of a T4 result: overall best matricization plus the
// restriction to unfoldings (one party against the rest).
struct T4Summary {
    std::string best_label;
    double best_value = 0.0;
    double threshold = 0.0;
    double margin = 0.0;
    bool violated = false;
    double unfolding_value = 0.0;
    double unfolding_margin = 0.0;
    bool unfolding_violated = false;
};
T4Summary summarize_t4(const CriterionResult& r);

struct ToleranceResult {
    double p_star = 0.0;  // supremum of p with the criterion still violated
    bool detected = false; // false when even p = 0 shows no violation
};

// Closed-form white-noise tolerance: every test statistic of the linear
// criteria scales as (1-p), the CHSH statistic as (1-p)^2.
ToleranceResult white_noise_tolerance(const PureState& psi, CriterionId id);

// Bisection on the violation boundary, for cross-checking the closed form.
ToleranceResult white_noise_tolerance_bisection(const PureState& psi, CriterionId id,
                                                double tol = 1e-6);

// One bound of the always-true family: named inequality, the parties it
// was evaluated on, the Ky Fan order (0 = standard/trace norm), value,
// threshold and slack = threshold - value (negative would be a violation).
struct BoundAuditEntry {
    std::string bound;
    std::vector<int> parties;
    int k = 0;
    double value = 0.0;
    double threshold = 0.0;
    double slack = 0.0;
};

struct BoundAuditReport {
    std::vector<BoundAuditEntry> entries;
    double min_slack = 0.0;
};

// Evaluates every universally valid bound the state's dimensions admit:
// single-party Bloch norms, pair norms, Ky Fan bounds of qubit-pair
// correlation matrices and the qubit-triple matricization bounds.
BoundAuditReport meaningful_bound_audit(const DensityMatrix& rho);

} // namespace ctd
