#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctdetect/criteria.hpp"
#include "ctdetect/errors.hpp"
#include "ctdetect/scan.hpp"
#include "ctdetect/state_spec.hpp"
#include "ctdetect/version.hpp"

namespace {

using nlohmann::json;

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ctd::io_error("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f.good()) throw ctd::io_error("write to '" + path + "' failed");
}

std::vector<ctd::CriterionId> parse_criteria_list(const std::string& csv) {
    std::vector<ctd::CriterionId> ids;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto id = ctd::parse_criterion(tok);
        if (!id) throw ctd::usage_error("unknown criterion '" + tok + "' (use t1,t2,t3,t4,chsh)");
        ids.push_back(*id);
    }
    if (ids.empty()) throw ctd::usage_error("empty criteria list");
    return ids;
}

struct Options {
    std::string out;
    std::string format; // empty = command default
    int workers = 0;
    std::uint64_t seed = 0;

    std::string state_spec;
    std::string criteria_csv;
    double noise = -1.0;

    std::string criterion_token;
    bool cross_check = false;

    std::string matricize_csv;
    bool vectorize = false;
    bool norms = false;
    std::string dump_state_path;

    std::string family;
    int d = 2;
    int n = 4;
    ctd::GridAxis alpha{0.0, 1.0, 101};
    ctd::GridAxis beta{0.0, 1.0, 101};
    ctd::GridAxis h_axis{0.0, 2.0, 41};
    ctd::GridAxis kt_axis{0.05, 3.0, 60};
    std::string summary_out;
};

std::string pick_format(const Options& o, const std::string& fallback,
                        const std::vector<std::string>& allowed) {
    const std::string f = o.format.empty() ? fallback : o.format;
    for (const std::string& a : allowed)
        if (f == a) return f;
    throw ctd::usage_error("--format " + f + " is not supported by this command");
}

ctd::DensityMatrix resolve_state(const Options& o, std::string& canonical,
                                 std::optional<ctd::PureState>* pure_out = nullptr) {
    ctd::BuiltState b = ctd::build_state(o.state_spec);
    canonical = b.canonical;
    if (o.noise >= 0.0) {
        if (!b.pure)
            throw ctd::usage_error("--noise needs a pure-state spec (ghz, w, dicke)");
        if (o.noise > 1.0) throw ctd::usage_error("--noise must lie in [0, 1]");
        b.rho = ctd::white_noise_mix(*b.pure, o.noise);
        b.pure.reset();
        canonical += "+noise=" + std::to_string(o.noise);
    }
    if (pure_out) *pure_out = b.pure;
    return b.rho;
}

int run_detect(const Options& o) {
    const std::string format = pick_format(o, "json", {"json", "csv"});
    std::string canonical;
    const ctd::DensityMatrix rho = resolve_state(o, canonical);

    std::vector<ctd::CriterionId> ids = o.criteria_csv.empty()
                                            ? ctd::applicable_criteria(rho.dims)
                                            : parse_criteria_list(o.criteria_csv);
    if (ids.empty())
        throw std::invalid_argument("no detection criterion applies to these dimensions");

    std::vector<ctd::CriterionResult> results;
    results.reserve(ids.size());
    for (ctd::CriterionId id : ids) results.push_back(ctd::evaluate_criterion(id, rho));

    if (format == "json") {
        write_output(o.out, ctd::results_to_json(results) + "\n");
    } else {
        std::ostringstream os;
        os << "criterion,label,k,value,threshold,violated,margin,detected_class\n";
        for (const ctd::CriterionResult& r : results)
            for (const ctd::CriterionTest& t : r.tests)
                os << ctd::to_string(r.criterion_id) << "," << t.label << "," << t.k << ","
                   << format17(t.value) << "," << format17(t.threshold) << ","
                   << (r.violated ? 1 : 0) << "," << format17(r.margin) << ","
                   << ctd::to_string(r.detected_class) << "\n";
        write_output(o.out, os.str());
    }
    return 0;
}

int run_tolerance(const Options& o) {
    // bare 6-decimal p* on stdout unless a structured format is requested
    const std::string format = o.format.empty() ? "text" : pick_format(o, "json", {"json", "csv"});
    const auto id = ctd::parse_criterion(o.criterion_token);
    if (!id) throw ctd::usage_error("unknown criterion '" + o.criterion_token + "'");

    ctd::BuiltState b = ctd::build_state(o.state_spec);
    if (!b.pure)
        throw ctd::usage_error("tolerance needs a pure-state spec (ghz, w, dicke)");

    const ctd::ToleranceResult res = ctd::white_noise_tolerance(*b.pure, *id);
    std::optional<ctd::ToleranceResult> bis;
    if (o.cross_check) bis = ctd::white_noise_tolerance_bisection(*b.pure, *id);

    if (format == "text") {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f\n", res.p_star);
        write_output(o.out, buf);
        if (bis)
            std::cerr << "cross-check: bisection p* = " << bis->p_star << " (|diff| = "
                      << std::abs(bis->p_star - res.p_star) << ")\n";
    } else if (format == "json") {
        json j{{"state", b.canonical},
               {"criterion", ctd::to_string(*id)},
               {"p_star", res.p_star},
               {"detected", res.detected}};
        if (bis) j["p_star_bisection"] = bis->p_star;
        write_output(o.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "state,criterion,p_star,detected" << (bis ? ",p_star_bisection" : "") << "\n";
        os << b.canonical << "," << ctd::to_string(*id) << "," << format17(res.p_star) << ","
           << (res.detected ? 1 : 0);
        if (bis) os << "," << format17(bis->p_star);
        os << "\n";
        write_output(o.out, os.str());
    }
    return 0;
}

int run_tensor(const Options& o) {
    std::string canonical;
    const ctd::DensityMatrix rho = resolve_state(o, canonical);
    if (!o.dump_state_path.empty()) ctd::save_density_csv(o.dump_state_path, rho);

    const ctd::CorrelationTensor t = ctd::full_correlation_tensor(rho);

    std::optional<ctd::MatricizationSpec> mspec;
    if (!o.matricize_csv.empty()) {
        ctd::MatricizationSpec spec;
        std::stringstream ss(o.matricize_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                spec.row_positions.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ctd::usage_error("--matricize wants a comma list of index positions");
            }
        }
        mspec = spec;
    }

    if (o.norms) {
        const std::string format = pick_format(o, "json", {"json"});
        (void)format;
        json j{{"state", canonical}, {"standard_norm", ctd::standard_norm(t)}};
        if (mspec) {
            const Eigen::MatrixXd m = ctd::matricize(t, *mspec);
            const ctd::SingularSpectrum s = ctd::singular_values(m);
            json ky = json::array();
            for (int k = 1; k <= static_cast<int>(s.values.size()); ++k)
                ky.push_back({{"k", k}, {"value", s.sum_top(k)}});
            j["matricization"] = {{"row_positions", mspec->row_positions},
                                  {"rows", m.rows()},
                                  {"cols", m.cols()},
                                  {"singular_values", s.values},
                                  {"ky_fan", std::move(ky)},
                                  {"trace_norm", ctd::trace_norm(m)},
                                  {"frobenius_norm", ctd::frobenius_norm(m)}};
        }
        write_output(o.out, j.dump(2) + "\n");
        return 0;
    }

    const std::string format = pick_format(o, "csv", {"csv"});
    (void)format;
    std::ostringstream os;
    if (mspec) {
        const Eigen::MatrixXd m = ctd::matricize(t, *mspec);
        os << "r,c,value\n";
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                os << (r + 1) << "," << (c + 1) << "," << format17(m(r, c)) << "\n";
    } else if (o.vectorize) {
        const Eigen::VectorXd v = ctd::vectorize(t);
        os << "i,value\n";
        for (Eigen::Index i = 0; i < v.size(); ++i)
            os << (i + 1) << "," << format17(v[i]) << "\n";
    } else {
        for (int j = 0; j < t.order(); ++j) os << "i_" << (j + 1) << ",";
        os << "value\n";
        std::vector<int> idx(t.order(), 0);
        for (Eigen::Index off = 0; off < t.values.size(); ++off) {
            Eigen::Index rest = off;
            for (int j = t.order() - 1; j >= 0; --j) {
                idx[j] = static_cast<int>(rest % t.index_dims[j]);
                rest /= t.index_dims[j];
            }
            for (int j = 0; j < t.order(); ++j) os << (idx[j] + 1) << ",";
            os << format17(t.values[off]) << "\n";
        }
    }
    write_output(o.out, os.str());
    return 0;
}

int run_scan_region(const Options& o) {
    pick_format(o, "csv", {"csv"});
    ctd::RegionScanConfig cfg;
    cfg.family = o.family.empty() ? "fig1" : o.family;
    cfg.d = o.d;
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    if (!o.criteria_csv.empty()) cfg.criteria = parse_criteria_list(o.criteria_csv);
    cfg.workers = o.workers;
    cfg.seed = o.seed;
    write_output(o.out, ctd::run_region_scan(cfg));
    return 0;
}

int run_scan_thermal(const Options& o) {
    pick_format(o, "csv", {"csv"});
    if (o.out.empty()) throw ctd::usage_error("scan-thermal needs --out for the grid CSV");
    ctd::ThermalScanConfig cfg;
    cfg.family = o.family.empty() ? "h1" : o.family;
    if (cfg.family.rfind("thermal-", 0) == 0) cfg.family = cfg.family.substr(8);
    cfg.n = o.n;
    cfg.h = o.h_axis;
    cfg.kT = o.kt_axis;
    cfg.workers = o.workers;
    cfg.seed = o.seed;
    const ctd::ThermalScanResult res = ctd::run_thermal_scan(cfg);
    write_output(o.out, res.grid_csv);
    const std::string summary_path =
        o.summary_out.empty() ? o.out + ".summary.csv" : o.summary_out;
    write_output(summary_path, res.summary_csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement detection from correlation-tensor matricization norms"};
    app.set_version_flag("--version", std::string("ctdetect ") + ctd::kVersion);
    app.require_subcommand(1);

    Options o;
    app.add_option("--out", o.out, "output file (default: stdout)");
    app.add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", o.workers, "worker threads for scans (0 = all cores)");
    app.add_option("--seed", o.seed, "seed recorded in scan provenance");

    CLI::App* detect = app.add_subcommand("detect", "evaluate detection criteria on a state");
    detect->add_option("--state", o.state_spec, "state spec, e.g. ghz:d=2,n=3")->required();
    detect->add_option("--criteria", o.criteria_csv, "comma list of t1,t2,t3,t4,chsh");
    detect->add_option("--noise", o.noise, "white-noise fraction p applied to a pure spec")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* tolerance = app.add_subcommand("tolerance", "white-noise tolerance of a criterion");
    tolerance->add_option("--state", o.state_spec, "pure state spec")->required();
    tolerance->add_option("--criterion", o.criterion_token, "one of t1,t2,t3,t4,chsh")->required();
    tolerance->add_flag("--cross-check", o.cross_check, "also bisect the violation boundary");

    CLI::App* tensor = app.add_subcommand("tensor", "dump correlation tensors and their norms");
    tensor->add_option("--state", o.state_spec, "state spec")->required();
    tensor->add_option("--matricize", o.matricize_csv, "row index positions, e.g. 1,3");
    tensor->add_flag("--vectorize", o.vectorize, "dump the tensor as a flat vector");
    tensor->add_flag("--norms", o.norms, "report norms as JSON instead of dumping entries");
    tensor->add_option("--dump-state", o.dump_state_path, "also write the density matrix CSV here");
    tensor->add_option("--noise", o.noise, "white-noise fraction p applied to a pure spec");

    CLI::App* region = app.add_subcommand("scan-region", "alpha/beta sweep of a state family");
    region->add_option("--family", o.family, "fig1 (three qudits) or fig3 (four qubits)")
        ->check(CLI::IsMember({"fig1", "fig3"}));
    region->add_option("--d", o.d, "local dimension for fig1");
    region->add_option("--alpha-min", o.alpha.lo);
    region->add_option("--alpha-max", o.alpha.hi);
    region->add_option("--alpha-points", o.alpha.points);
    region->add_option("--beta-min", o.beta.lo);
    region->add_option("--beta-max", o.beta.hi);
    region->add_option("--beta-points", o.beta.points);
    region->add_option("--criteria", o.criteria_csv, "comma list; default t1 (fig1) / t3 (fig3)");

    CLI::App* thermal = app.add_subcommand("scan-thermal", "temperature/field sweep of chain thermal states");
    thermal->add_option("--family", o.family, "thermal-h1 or thermal-h2 (h1/h2 for short)")
        ->check(CLI::IsMember({"h1", "h2", "thermal-h1", "thermal-h2"}));
    thermal->add_option("--n", o.n, "number of sites (default 4)");
    thermal->add_option("--h-min", o.h_axis.lo);
    thermal->add_option("--h-max", o.h_axis.hi);
    thermal->add_option("--h-points", o.h_axis.points);
    thermal->add_option("--kt-min", o.kt_axis.lo);
    thermal->add_option("--kt-max", o.kt_axis.hi);
    thermal->add_option("--kt-points", o.kt_axis.points);
    thermal->add_option("--summary-out", o.summary_out, "summary CSV path (default <out>.summary.csv)");

    for (CLI::App* sub : {detect, tolerance, tensor, region, thermal}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(detect)) return run_detect(o);
        if (app.got_subcommand(tolerance)) return run_tolerance(o);
        if (app.got_subcommand(tensor)) return run_tensor(o);
        if (app.got_subcommand(region)) return run_scan_region(o);
        if (app.got_subcommand(thermal)) return run_scan_thermal(o);
    } catch (const ctd::usage_error& e) {
        std::cerr << "ctdetect: " << e.what() << "\n";
        return 2;
    } catch (const ctd::io_error& e) {
        std::cerr << "ctdetect: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ctdetect: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "ctdetect: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ctdetect: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
