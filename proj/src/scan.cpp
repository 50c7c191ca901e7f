#include "ctdetect/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ctdetect/version.hpp"
#include "format_util.hpp"

namespace ctd {

namespace {

using detail::format_double;

// fixed worker pool over cell indices; results land in preallocated slots,
// so output order never depends on scheduling
void run_parallel(int total, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, total);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= total || failed.load()) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string axis_desc(const char* name, const GridAxis& a) {
    std::ostringstream os;
    os << name << "=[" << format_double(a.lo) << "," << format_double(a.hi) << "]x" << a.points;
    return os.str();
}

} // namespace

double GridAxis::value(int i) const {
    return lo + (hi - lo) * static_cast<double>(i) / (points - 1);
}

void GridAxis::validate(const char* name) const {
    if (points < 2) throw std::invalid_argument(std::string(name) + " axis needs at least 2 points");
    if (!(hi > lo)) throw std::invalid_argument(std::string(name) + " axis needs hi > lo");
}

std::string run_region_scan(const RegionScanConfig& cfg) {
    cfg.alpha.validate("alpha");
    cfg.beta.validate("beta");
    if (cfg.family != "fig1" && cfg.family != "fig3")
        throw std::invalid_argument("scan-region family must be fig1 or fig3");

    const std::vector<int> dims =
        cfg.family == "fig1" ? std::vector<int>(3, cfg.d) : std::vector<int>{2, 2, 2, 2};

    std::vector<CriterionId> criteria = cfg.criteria;
    if (criteria.empty())
        criteria.push_back(cfg.family == "fig1" ? CriterionId::T1 : CriterionId::T3);
    const std::vector<CriterionId> admissible = applicable_criteria(dims);
    for (CriterionId id : criteria)
        if (std::find(admissible.begin(), admissible.end(), id) == admissible.end())
            throw std::invalid_argument(std::string("criterion ") + to_string(id) +
                                        " does not apply to the scanned family's dimensions");

    const int total = cfg.alpha.points * cfg.beta.points;
    std::vector<std::string> cells(total);

    run_parallel(total, cfg.workers, [&](int cell) {
        const int i = cell / cfg.beta.points;
        const int j = cell % cfg.beta.points;
        const double alpha = cfg.alpha.value(i);
        const double beta = cfg.beta.value(j);

        std::ostringstream os;
        if (alpha + beta > 1.0 + 1e-12) {
            for (CriterionId id : criteria)
                os << format_double(alpha) << "," << format_double(beta) << "," << to_string(id)
                   << ",skip,,,,\n";
        } else {
            const DensityMatrix rho = cfg.family == "fig1" ? figure1_family(alpha, beta, cfg.d)
                                                           : figure3_family(alpha, beta);
            for (CriterionId id : criteria) {
                const CriterionResult r = evaluate_criterion(id, rho);
                const CriterionTest& best = r.best_test();
                os << format_double(alpha) << "," << format_double(beta) << "," << to_string(id)
                   << ",ok," << (r.violated ? 1 : 0) << "," << format_double(best.value) << ","
                   << format_double(best.threshold) << "," << format_double(r.margin) << "\n";
            }
        }
        cells[cell] = os.str();
    });

    std::ostringstream out;
    out << "# ctdetect v" << kVersion << " scan-region family=" << cfg.family;
    if (cfg.family == "fig1") out << " d=" << cfg.d;
    out << " " << axis_desc("alpha", cfg.alpha) << " " << axis_desc("beta", cfg.beta)
        << " criteria=";
    for (std::size_t i = 0; i < criteria.size(); ++i)
        out << (i ? "," : "") << to_string(criteria[i]);
    out << " workers=" << cfg.workers << " seed=" << cfg.seed << "\n";
    out << "alpha,beta,criterion,status,violated,best_value,threshold,margin\n";
    for (const std::string& c : cells) out << c;
    return out.str();
}

ThermalScanResult run_thermal_scan(const ThermalScanConfig& cfg) {
    cfg.h.validate("h");
    cfg.kT.validate("kT");
    if (!(cfg.kT.lo > 0.0)) throw std::invalid_argument("kT grid must be strictly positive");
    if (cfg.family != "h1" && cfg.family != "h2")
        throw std::invalid_argument("scan-thermal family must be h1 or h2");
    if (cfg.n < 3) throw std::invalid_argument("scan-thermal needs at least 3 sites");

    const bool with_t3 = cfg.n == 4;

    struct Cell {
        double h = 0.0, kT = 0.0;
        T4Summary t4;
        bool t3_violated = false;
        double t3_margin = 0.0;
    };
    const int total = cfg.h.points * cfg.kT.points;
    std::vector<Cell> cells(total);

    run_parallel(total, cfg.workers, [&](int idx) {
        Cell& cell = cells[idx];
        cell.h = cfg.h.value(idx / cfg.kT.points);
        cell.kT = cfg.kT.value(idx % cfg.kT.points);
        const PauliStringHamiltonian ham =
            cfg.family == "h1" ? hamiltonian_h1(cfg.n, cell.h) : hamiltonian_h2(cfg.n, cell.h);
        const DensityMatrix rho = thermal_state(ham, cell.kT);
        cell.t4 = summarize_t4(evaluate_t4(rho));
        if (with_t3) {
            const CriterionResult r3 = evaluate_t3(rho);
            cell.t3_violated = r3.violated;
            cell.t3_margin = r3.margin;
        }
    });

    std::ostringstream header;
    header << "# ctdetect v" << kVersion << " scan-thermal family=" << cfg.family
           << " n=" << cfg.n << " " << axis_desc("h", cfg.h) << " " << axis_desc("kT", cfg.kT)
           << " workers=" << cfg.workers << " seed=" << cfg.seed << "\n";

    ThermalScanResult out;
    {
        std::ostringstream os;
        os << header.str();
        os << "h,kT,t4_violated,t4_unfolding_violated,t3_violated,t4_margin,t4_unfolding_margin,"
              "t3_margin\n";
        for (const Cell& c : cells) {
            os << format_double(c.h) << "," << format_double(c.kT) << "," << (c.t4.violated ? 1 : 0)
               << "," << (c.t4.unfolding_violated ? 1 : 0) << ",";
            if (with_t3) os << (c.t3_violated ? 1 : 0);
            os << "," << format_double(c.t4.margin) << "," << format_double(c.t4.unfolding_margin)
               << ",";
            if (with_t3) os << format_double(c.t3_margin);
            os << "\n";
        }
        out.grid_csv = os.str();
    }
    {
        std::ostringstream os;
        os << header.str();
        os << "h,t4_max_kt,t4_unfolding_max_kt,t3_max_kt\n";
        for (int i = 0; i < cfg.h.points; ++i) {
            double t4_max = std::nan(""), t4u_max = std::nan(""), t3_max = std::nan("");
            for (int j = 0; j < cfg.kT.points; ++j) {
                const Cell& c = cells[i * cfg.kT.points + j];
                if (c.t4.violated && !(t4_max > c.kT)) t4_max = c.kT;
                if (c.t4.unfolding_violated && !(t4u_max > c.kT)) t4u_max = c.kT;
                if (c.t3_violated && !(t3_max > c.kT)) t3_max = c.kT;
            }
            os << format_double(cfg.h.value(i)) << "," << format_double(t4_max) << ","
               << format_double(t4u_max) << ",";
            if (with_t3) os << format_double(t3_max);
            os << "\n";
        }
        out.summary_csv = os.str();
    }
    return out;
}

} // namespace ctd
