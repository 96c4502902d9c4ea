#include "imtk/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "imtk/errors.hpp"
#include "imtk/report_io.hpp"

namespace imtk {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

RunConfig RunConfig::parse_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": expected key = value";
            throw ValidationError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": empty key or value";
            throw ValidationError(os.str());
        }
        if (cfg.entries_.count(key)) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": duplicate key '" << key << "'";
            throw ValidationError(os.str());
        }
        cfg.entries_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ValidationError("config: missing required key '" + key + "'");
    return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' is not a number: " + s);
    }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' is not an integer: " + s);
    }
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    const std::string s = get_string(key);
    std::vector<double> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ValidationError("config: key '" + key + "' has a non-numeric entry: " + cell);
        }
    }
    if (out.empty()) throw ValidationError("config: key '" + key + "' has no values");
    return out;
}

void RunConfig::restrict_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : entries_) {
        (void)value;
        if (!allowed.count(key)) {
            std::ostringstream os;
            os << origin_ << ":" << lines_.at(key) << ": unknown key '" << key << "'";
            throw ValidationError(os.str());
        }
    }
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    for (const auto& [key, value] : entries_) os << key << "=" << value << "\n";
    return os.str();
}

OperatorModel operator_from_config(const RunConfig& cfg) {
    const std::string kind = cfg.get_string("operator.kind", "dirichlet1d");
    if (kind == "dirichlet1d")
        return OperatorModel::dirichlet1d(cfg.get_double("operator.length", 3.141592653589793));
    if (kind == "torus")
        return OperatorModel::torus(static_cast<int>(cfg.get_int("operator.dimension", 1)),
                                    cfg.get_double("operator.scale", 1.0));
    if (kind == "sphere")
        return OperatorModel::sphere(static_cast<int>(cfg.get_int("operator.dimension", 3)));
    if (kind == "custom") return OperatorModel::custom(cfg.get_list("operator.values"));
    throw ValidationError("config: unknown operator.kind '" + kind + "'");
}

std::size_t modes_from_config(const RunConfig& cfg) {
    const std::int64_t m = cfg.get_int("operator.modes", 64);
    if (m < 2) throw ValidationError("config: operator.modes must be >= 2");
    return static_cast<std::size_t>(m);
}

namespace {

ScalarFunction scalar_from_table_file(const std::string& path) {
    const CsvTable t = read_csv(path);
    std::vector<double> x, y;
    for (const auto& row : t.rows) {
        if (row.size() < 2)
            throw ValidationError("scalar table " + path + ": rows need two columns");
        x.push_back(row[0]);
        y.push_back(row[1]);
    }
    return ScalarFunction::from_table(std::move(x), std::move(y));
}

}  // namespace

NonlinPtr nonlinearity_from_config(const RunConfig& cfg, const EigenvalueSequence& seq) {
    const std::string kind = cfg.get_string("nonlinearity.kind", "zero");
    if (kind == "zero") return zero_nonlinearity();
    if (kind == "diagonal_linear") {
        if (cfg.has("nonlinearity.coefficients"))
            return diagonal_linear(cfg.get_list("nonlinearity.coefficients"));
        return diagonal_linear(cfg.get_double("nonlinearity.c", 0.5), seq.count());
    }
    if (kind == "gap_blocker") {
        const auto N = static_cast<std::size_t>(cfg.get_int("nonlinearity.N", 1));
        return build_gap_blocker(seq, N, cfg.get_double("nonlinearity.delta_rot", 0.0));
    }
    if (kind == "counterexample") {
        CounterexampleParams params;
        params.lipschitz = cfg.get_double("nonlinearity.L", 3.0);
        params.delta = cfg.get_double("nonlinearity.delta", 0.5);
        params.radius = cfg.get_double("nonlinearity.R", 10.0);
        params.mollifier_width_factor = cfg.get_double("nonlinearity.mollifier_width", 0.05);
        return build_counterexample(seq, cfg.get_double("eps"), params);
    }
    if (kind == "nemytskii") {
        ScalarFunction f;
        if (cfg.has("nonlinearity.table")) {
            f = scalar_from_table_file(cfg.get_string("nonlinearity.table"));
        } else {
            const std::string builtin = cfg.get_string("nonlinearity.builtin", "sin");
            const double scale = cfg.get_double("nonlinearity.scale", 1.0);
            if (builtin == "sin")
                f = ScalarFunction::from_callable(
                    [scale](double x) { return scale * std::sin(x); }, "sin");
            else
                throw ValidationError("config: unknown nonlinearity.builtin '" + builtin + "'");
        }
        const double L = cfg.get_double("nonlinearity.L", 1.0);
        return nemytskii_sine(seq, std::move(f), L);
    }
    throw ValidationError("config: unknown nonlinearity.kind '" + kind + "'");
}

}  // namespace imtk
