#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctdetect/criteria.hpp"

namespace ctd {

struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    int points = 2; // >= 2

    double value(int i) const;
    void validate(const char* name) const;
};

// Parameter sweep over a two-parameter state family. Cells outside the
// simplex alpha + beta <= 1 are emitted with status=skip. Rows are ordered
// by grid index (alpha outer, beta inner) no matter how workers interleave.
struct RegionScanConfig {
    std::string family = "fig1"; // "fig1" or "fig3"
    int d = 2;                   // local dimension, fig1 only
    GridAxis alpha{0.0, 1.0, 101};
    GridAxis beta{0.0, 1.0, 101};
    std::vector<CriterionId> criteria;
    int workers = 0; // 0 = hardware concurrency
    std::uint64_t seed = 0;
};

std::string run_region_scan(const RegionScanConfig& cfg);

// Temperature/field sweep of the thermal states of one of the two chain
// Hamiltonians. Evaluates T4 (with its unfolding sub-result) everywhere and
// T3 for n = 4.
struct ThermalScanConfig {
    std::string family = "h1"; // "h1" or "h2"
    int n = 4;
    GridAxis h{0.0, 2.0, 41};
    GridAxis kT{0.05, 3.0, 60};
    int workers = 0;
    std::uint64_t seed = 0;
};

struct ThermalScanResult {
    std::string grid_csv;
    std::string summary_csv; // per h: maximal kT at which each test still fires
};

ThermalScanResult run_thermal_scan(const ThermalScanConfig& cfg);

} // namespace ctd
