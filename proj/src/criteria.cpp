#include "ctdetect/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ctd {

namespace {

const double kSqrt3 = std::sqrt(3.0);

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string join_parties(const std::vector<int>& parties) {
    std::string s;
    for (int p : parties) s += std::to_string(p);
    return s;
}

// "12|34" style: row-side party labels, bar, column-side labels
std::string cut_label(const std::vector<int>& parties, const std::vector<int>& row_positions) {
    std::vector<bool> is_row(parties.size(), false);
    for (int pos : row_positions) is_row[pos - 1] = true;
    std::vector<int> rows, cols;
    for (std::size_t j = 0; j < parties.size(); ++j)
        (is_row[j] ? rows : cols).push_back(parties[j]);
    return join_parties(rows) + "|" + join_parties(cols);
}

CriterionResult finalize(CriterionId id, std::vector<CriterionTest> tests,
                         DetectedClass positive_class) {
    CriterionResult r;
    r.criterion_id = id;
    r.tests = std::move(tests);
    r.margin = r.tests.front().margin();
    for (const CriterionTest& t : r.tests) r.margin = std::max(r.margin, t.margin());
    r.violated = r.margin > 0.0;
    r.detected_class = r.violated ? positive_class : DetectedClass::NONE;
    return r;
}

double product_threshold(const std::vector<int>& dims) {
    double t = 1.0;
    for (int d : dims) t *= std::sqrt(2.0 * (d - 1) / d);
    return t;
}

nlohmann::json result_json(const CriterionResult& r) {
    nlohmann::json tests = nlohmann::json::array();
    for (const CriterionTest& t : r.tests)
        tests.push_back({{"label", t.label},
                         {"k", t.k},
                         {"value", t.value},
                         {"threshold", t.threshold}});
    return {{"criterion", to_string(r.criterion_id)},
            {"tests", std::move(tests)},
            {"violated", r.violated},
            {"margin", r.margin},
            {"detected_class", to_string(r.detected_class)}};
}

} // namespace

const char* to_string(CriterionId id) {
    switch (id) {
        case CriterionId::T1: return "T1";
        case CriterionId::T2: return "T2";
        case CriterionId::T3: return "T3";
        case CriterionId::T4: return "T4";
        case CriterionId::CHSH: return "CHSH";
    }
    return "?";
}

const char* to_string(DetectedClass c) {
    switch (c) {
        case DetectedClass::GME: return "GME";
        case DetectedClass::NOT_FULLY_SEPARABLE: return "NOT_FULLY_SEPARABLE";
        case DetectedClass::CHSH_VIOLATION: return "CHSH_VIOLATION";
        case DetectedClass::NONE: return "NONE";
    }
    return "?";
}

std::optional<CriterionId> parse_criterion(const std::string& token) {
    std::string t;
    for (char c : token) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "t1") return CriterionId::T1;
    if (t == "t2") return CriterionId::T2;
    if (t == "t3") return CriterionId::T3;
    if (t == "t4") return CriterionId::T4;
    if (t == "chsh") return CriterionId::CHSH;
    return std::nullopt;
}

const CriterionTest& CriterionResult::best_test() const {
    if (tests.empty()) throw std::logic_error("criterion result has no tests");
    const CriterionTest* best = &tests.front();
    for (const CriterionTest& t : tests)
        if (t.margin() > best->margin()) best = &t;
    return *best;
}

std::string CriterionResult::to_json() const { return result_json(*this).dump(); }

std::string results_to_json(const std::vector<CriterionResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CriterionResult& r : results) arr.push_back(result_json(r));
    return arr.dump(2);
}

CriterionResult evaluate_t1(const DensityMatrix& rho) {
    require(rho.n_parties() == 3, "T1 needs exactly three parties");
    const int d = rho.dims[0];
    require(rho.dims[1] == d && rho.dims[2] == d, "T1 needs three parties of equal dimension");

    const double value = standard_norm(full_correlation_tensor(rho));
    const double threshold =
        std::sqrt(8.0 * (d - 1) * (static_cast<double>(d) * d - 1) / (static_cast<double>(d) * d * d));
    return finalize(CriterionId::T1, {{"standard_norm", 0, value, threshold}}, DetectedClass::GME);
}

CriterionResult evaluate_t2(const DensityMatrix& rho) {
    require(rho.dims == std::vector<int>{2, 2, 2}, "T2 needs three qubits");

    const CorrelationTensor t = full_correlation_tensor(rho);
    const std::vector<std::vector<int>> cuts = {{1}, {2}, {3}};
    std::vector<SingularSpectrum> spectra;
    for (const auto& cut : cuts) spectra.push_back(singular_values(matricize(t, {cut})));

    // one-against-the-rest Ky Fan bounds; averaged variant first, then the
    // single-matricization thresholds sqrt(3), 2, 3
    std::vector<CriterionTest> tests;
    for (int k = 1; k <= 3; ++k) {
        const double avg =
            (spectra[0].sum_top(k) + spectra[1].sum_top(k) + spectra[2].sum_top(k)) / 3.0;
        tests.push_back({"avg", k, avg, (2.0 * k + kSqrt3) / 3.0});
    }
    const double single_thresholds[3] = {kSqrt3, 2.0, 3.0};
    for (std::size_t m = 0; m < cuts.size(); ++m)
        for (int k = 1; k <= 3; ++k)
            tests.push_back({cut_label(t.parties, cuts[m]), k, spectra[m].sum_top(k),
                             single_thresholds[k - 1]});
    return finalize(CriterionId::T2, std::move(tests), DetectedClass::GME);
}

CriterionResult evaluate_t3(const DensityMatrix& rho) {
    require(rho.dims == std::vector<int>{2, 2, 2, 2}, "T3 needs four qubits");

    const CorrelationTensor t = full_correlation_tensor(rho);
    const std::vector<std::vector<int>> cuts = {{1, 2}, {1, 3}, {1, 4}};
    std::vector<SingularSpectrum> spectra;
    for (const auto& cut : cuts) spectra.push_back(singular_values(matricize(t, {cut})));

    std::vector<CriterionTest> tests;
    for (int k = 1; k <= 9; ++k) {
        const double avg =
            (spectra[0].sum_top(k) + spectra[1].sum_top(k) + spectra[2].sum_top(k)) / 3.0;
        const double threshold = k <= 3 ? 2.0 * std::sqrt(static_cast<double>(k)) : 1.0 + 2.0 * k / 3.0;
        tests.push_back({"avg22", k, avg, threshold});
    }
    return finalize(CriterionId::T3, std::move(tests), DetectedClass::GME);
}

CriterionResult evaluate_t4(const DensityMatrix& rho) {
    const int n = rho.n_parties();
    require(n >= 2, "T4 needs at least two parties");

    const CorrelationTensor t = full_correlation_tensor(rho);
    const double threshold = product_threshold(rho.dims);

    // every bipartition with party 1 on the row side; the complementary
    // matricizations are transposes with identical singular values
    std::vector<CriterionTest> tests;
    for (unsigned mask = 0; mask + 1 < (1u << (n - 1)); ++mask) {
        std::vector<int> rows{1};
        for (int j = 1; j < n; ++j)
            if (mask & (1u << (j - 1))) rows.push_back(j + 1);
        tests.push_back({cut_label(t.parties, rows), 0, trace_norm(matricize(t, {rows})), threshold});
    }
    return finalize(CriterionId::T4, std::move(tests), DetectedClass::NOT_FULLY_SEPARABLE);
}

CriterionResult evaluate_chsh(const DensityMatrix& rho) {
    require(rho.dims == std::vector<int>{2, 2}, "CHSH needs exactly two qubits");

    const SingularSpectrum s = singular_values(matricize(full_correlation_tensor(rho), {{1}}));
    const double value = s.values[0] * s.values[0] + s.values[1] * s.values[1];
    return finalize(CriterionId::CHSH, {{"s1^2+s2^2", 0, value, 1.0}},
                    DetectedClass::CHSH_VIOLATION);
}

CriterionResult evaluate_criterion(CriterionId id, const DensityMatrix& rho) {
    switch (id) {
        case CriterionId::T1: return evaluate_t1(rho);
        case CriterionId::T2: return evaluate_t2(rho);
        case CriterionId::T3: return evaluate_t3(rho);
        case CriterionId::T4: return evaluate_t4(rho);
        case CriterionId::CHSH: return evaluate_chsh(rho);
    }
    throw std::logic_error("unknown criterion");
}

std::vector<CriterionId> applicable_criteria(const std::vector<int>& dims) {
    std::vector<CriterionId> ids;
    const int n = static_cast<int>(dims.size());
    if (n == 3 && dims[0] == dims[1] && dims[1] == dims[2]) ids.push_back(CriterionId::T1);
    if (dims == std::vector<int>{2, 2, 2}) ids.push_back(CriterionId::T2);
    if (dims == std::vector<int>{2, 2, 2, 2}) ids.push_back(CriterionId::T3);
    if (n >= 2) ids.push_back(CriterionId::T4);
    if (dims == std::vector<int>{2, 2}) ids.push_back(CriterionId::CHSH);
    return ids;
}

T4Summary summarize_t4(const CriterionResult& r) {
    require(r.criterion_id == CriterionId::T4, "summarize_t4 needs a T4 result");
    T4Summary s;
    const CriterionTest& best = r.best_test();
    s.best_label = best.label;
    s.best_value = best.value;
    s.threshold = best.threshold;
    s.margin = r.margin;
    s.violated = r.violated;

    bool have_unfolding = false;
    for (const CriterionTest& t : r.tests) {
        const auto bar = t.label.find('|');
        const std::size_t row_count = bar;
        const std::size_t col_count = t.label.size() - bar - 1;
        if (row_count != 1 && col_count != 1) continue;
        if (!have_unfolding || t.value > s.unfolding_value) {
            s.unfolding_value = t.value;
            s.unfolding_margin = t.margin();
            have_unfolding = true;
        }
    }
    s.unfolding_violated = have_unfolding && s.unfolding_margin > 0.0;
    return s;
}

ToleranceResult white_noise_tolerance(const PureState& psi, CriterionId id) {
    const CriterionResult base = evaluate_criterion(id, psi.to_density());
    ToleranceResult out;
    for (const CriterionTest& t : base.tests) {
        if (!(t.value > t.threshold)) continue;
        const double ratio = t.threshold / t.value;
        // linear statistics scale as (1-p); the CHSH statistic is quadratic
        const double p = id == CriterionId::CHSH ? 1.0 - std::sqrt(ratio) : 1.0 - ratio;
        out.p_star = std::max(out.p_star, p);
        out.detected = true;
    }
    return out;
}

ToleranceResult white_noise_tolerance_bisection(const PureState& psi, CriterionId id,
                                                double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
    auto violated_at = [&](double p) {
        return evaluate_criterion(id, white_noise_mix(psi, p)).violated;
    };
    if (!violated_at(0.0)) return {0.0, false};
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 0.25 * tol) {
        const double mid = 0.5 * (lo + hi);
        (violated_at(mid) ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), true};
}

BoundAuditReport meaningful_bound_audit(const DensityMatrix& rho) {
    rho.validate();
    const int n = rho.n_parties();
    BoundAuditReport report;

    for (int j = 1; j <= n; ++j) {
        const double v = standard_norm(m_body_tensor(rho, {j}));
        const int d = rho.dims[j - 1];
        report.entries.push_back(
            {"single_party_bloch", {j}, 0, v, std::sqrt(2.0 * (d - 1) / d), 0.0});
    }

    for (int j = 1; j <= n; ++j)
        for (int l = j + 1; l <= n; ++l) {
            const CorrelationTensor t = m_body_tensor(rho, {j, l});
            const double dd = static_cast<double>(rho.dims[j - 1]) * rho.dims[l - 1];
            report.entries.push_back(
                {"pair_norm", {j, l}, 0, standard_norm(t), 2.0 * std::sqrt((dd - 1.0) / dd), 0.0});
            if (rho.dims[j - 1] == 2 && rho.dims[l - 1] == 2) {
                const SingularSpectrum s = singular_values(matricize(t, {{1}}));
                for (int k = 1; k <= 3; ++k)
                    report.entries.push_back({"pair_ky_fan", {j, l}, k, s.sum_top(k),
                                              static_cast<double>(k), 0.0});
            }
        }

    for (int j = 1; j <= n; ++j)
        for (int l = j + 1; l <= n; ++l)
            for (int m = l + 1; m <= n; ++m) {
                if (rho.dims[j - 1] != 2 || rho.dims[l - 1] != 2 || rho.dims[m - 1] != 2) continue;
                const CorrelationTensor t = m_body_tensor(rho, {j, l, m});
                report.entries.push_back({"triple_norm", {j, l, m}, 0, standard_norm(t), 2.0, 0.0});
                for (int pos = 1; pos <= 3; ++pos) {
                    const SingularSpectrum s = singular_values(matricize(t, {{pos}}));
                    for (int k = 1; k <= 3; ++k)
                        report.entries.push_back({"triple_ky_fan:u" + std::to_string(pos),
                                                  {j, l, m}, k, s.sum_top(k),
                                                  2.0 * std::sqrt(static_cast<double>(k)), 0.0});
                }
            }

    report.min_slack = std::numeric_limits<double>::infinity();
    for (BoundAuditEntry& e : report.entries) {
        e.slack = e.threshold - e.value;
        report.min_slack = std::min(report.min_slack, e.slack);
    }
    return report;
}

} // namespace ctd
