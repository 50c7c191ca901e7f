#include "ctdetect/state_spec.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "ctdetect/errors.hpp"
#include "format_util.hpp"

namespace ctd {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// key=value pairs separated by commas; a bare value continues the previous
// key's comma list, so "dims=2,2,2" parses as one key
std::map<std::string, std::string> parse_params(const std::string& s, const std::string& spec) {
    std::map<std::string, std::string> params;
    if (s.empty()) return params;
    std::string last_key;
    for (const std::string& tok : split(s, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (last_key.empty())
                throw usage_error("malformed state spec '" + spec + "': stray token '" + tok + "'");
            params[last_key] += "," + tok;
        } else {
            last_key = tok.substr(0, eq);
            if (last_key.empty() || params.count(last_key))
                throw usage_error("malformed state spec '" + spec + "': bad key in '" + tok + "'");
            params[last_key] = tok.substr(eq + 1);
        }
    }
    return params;
}

class ParamReader {
  public:
    ParamReader(std::map<std::string, std::string> params, std::string spec)
        : params_(std::move(params)), spec_(std::move(spec)) {}

    int get_int(const std::string& key, int fallback) {
        auto it = params_.find(key);
        if (it == params_.end()) return fallback;
        used_.insert(key);
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw usage_error("malformed state spec '" + spec_ + "': '" + key + "' is not an integer");
        }
    }

    double get_double(const std::string& key, double fallback, bool required = false) {
        auto it = params_.find(key);
        if (it == params_.end()) {
            if (required) throw usage_error("malformed state spec '" + spec_ + "': missing '" + key + "'");
            return fallback;
        }
        used_.insert(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw usage_error("malformed state spec '" + spec_ + "': '" + key + "' is not a number");
        }
    }

    std::vector<int> get_int_list(const std::string& key) {
        auto it = params_.find(key);
        if (it == params_.end())
            throw usage_error("malformed state spec '" + spec_ + "': missing '" + key + "'");
        used_.insert(key);
        std::vector<int> out;
        for (const std::string& tok : split(it->second, ',')) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stoi(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw usage_error("malformed state spec '" + spec_ + "': bad entry in '" + key + "'");
            }
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : params_)
            if (!used_.count(key))
                throw usage_error("malformed state spec '" + spec_ + "': unknown parameter '" + key + "'");
    }

  private:
    std::map<std::string, std::string> params_;
    std::string spec_;
    std::set<std::string> used_;
};

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

BuiltState build_state(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (family == "file") {
        if (rest.empty()) throw usage_error("state spec 'file:' needs a path");
        BuiltState b;
        b.canonical = spec;
        b.rho = load_density_csv(rest);
        return b;
    }

    ParamReader p(parse_params(rest, spec), spec);
    try {
        if (family == "ghz") {
            const int d = p.get_int("d", 2);
            const int n = p.get_int("n", 3);
            p.finish();
            BuiltState b;
            b.pure = ghz_state(d, n);
            b.rho = b.pure->to_density();
            b.canonical = "ghz:d=" + std::to_string(d) + ",n=" + std::to_string(n);
            return b;
        }
        if (family == "w") {
            const int d = p.get_int("d", 2);
            p.finish();
            BuiltState b;
            b.pure = w_state(d);
            b.rho = b.pure->to_density();
            b.canonical = "w:d=" + std::to_string(d);
            return b;
        }
        if (family == "dicke") {
            const int n = p.get_int("n", 4);
            const int k = p.get_int("k", 2);
            p.finish();
            BuiltState b;
            b.pure = dicke_state(n, k);
            b.rho = b.pure->to_density();
            b.canonical = "dicke:n=" + std::to_string(n) + ",k=" + std::to_string(k);
            return b;
        }
        if (family == "fig1") {
            const double alpha = p.get_double("alpha", 0.0, true);
            const double beta = p.get_double("beta", 0.0, true);
            const int d = p.get_int("d", 2);
            p.finish();
            BuiltState b;
            b.rho = figure1_family(alpha, beta, d);
            b.canonical = "fig1:alpha=" + detail::format_double(alpha) +
                          ",beta=" + detail::format_double(beta) + ",d=" + std::to_string(d);
            return b;
        }
        if (family == "fig3") {
            const double alpha = p.get_double("alpha", 0.0, true);
            const double beta = p.get_double("beta", 0.0, true);
            p.finish();
            BuiltState b;
            b.rho = figure3_family(alpha, beta);
            b.canonical = "fig3:alpha=" + detail::format_double(alpha) +
                          ",beta=" + detail::format_double(beta);
            return b;
        }
        if (family == "thermal-h1" || family == "thermal-h2") {
            const int n = p.get_int("n", 4);
            const double h = p.get_double("h", 0.0);
            const double kT = p.get_double("kT", 0.0, true);
            p.finish();
            BuiltState b;
            const PauliStringHamiltonian ham =
                family == "thermal-h1" ? hamiltonian_h1(n, h) : hamiltonian_h2(n, h);
            b.rho = thermal_state(ham, kT);
            b.canonical = family + ":n=" + std::to_string(n) + ",h=" + detail::format_double(h) +
                          ",kT=" + detail::format_double(kT);
            return b;
        }
        if (family == "maxmixed") {
            const std::vector<int> dims = p.get_int_list("dims");
            p.finish();
            BuiltState b;
            b.rho.dims = dims;
            for (int d : dims)
                if (d < 2) throw std::invalid_argument("maxmixed: dimensions must be >= 2");
            const Eigen::Index total = b.rho.total_dim();
            b.rho.matrix = Eigen::MatrixXcd::Identity(total, total) / static_cast<double>(total);
            b.canonical = "maxmixed:dims=" + join_ints(dims);
            return b;
        }
    } catch (const std::invalid_argument& e) {
        throw usage_error("state spec '" + spec + "': " + e.what());
    }
    throw usage_error("unknown state family '" + family + "'");
}

DensityMatrix load_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw usage_error("'" + path + "': empty file");
    const std::string prefix = "# dims=";
    if (line.rfind(prefix, 0) != 0)
        throw usage_error("'" + path + "': first line must be '# dims=d1,d2,...'");

    DensityMatrix rho;
    for (const std::string& tok : split(line.substr(prefix.size()), ',')) {
        try {
            rho.dims.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw usage_error("'" + path + "': bad dimension '" + tok + "'");
        }
    }
    const Eigen::Index total = rho.total_dim();
    rho.matrix = Eigen::MatrixXcd::Zero(total, total);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("row", 0) == 0) continue; // optional column header
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 4)
            throw usage_error("'" + path + "': line " + std::to_string(lineno) +
                              " needs row,col,re,im");
        try {
            const long r = std::stol(f[0]);
            const long c = std::stol(f[1]);
            if (r < 0 || r >= total || c < 0 || c >= total)
                throw std::out_of_range("matrix index");
            rho.matrix(r, c) = Cx(std::stod(f[2]), std::stod(f[3]));
        } catch (const std::exception&) {
            throw usage_error("'" + path + "': malformed entry on line " + std::to_string(lineno));
        }
    }

    try {
        rho.validate();
    } catch (const std::invalid_argument& e) {
        throw usage_error("'" + path + "': " + e.what());
    }
    return rho;
}

void save_density_csv(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "# dims=" << join_ints(rho.dims) << "\n";
    out << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c) {
            const Cx v = rho.matrix(r, c);
            if (v == Cx(0.0, 0.0)) continue;
            out << r << "," << c << "," << detail::format_double(v.real()) << ","
                << detail::format_double(v.imag()) << "\n";
        }
    if (!out.good()) throw io_error("write to '" + path + "' failed");
}

} // namespace ctd
