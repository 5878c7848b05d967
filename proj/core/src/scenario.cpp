#include "riskopt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace riskopt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": not a number: '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument(where + ": trailing characters in number: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument(where + ": not a boolean: '" + v + "'");
}

} // namespace

std::vector<double> GridSpec::points() const {
    if (n < 1 || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("GridSpec: requires 0 < lo < hi and n >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = lo + step * i;
    return out;
}

GridSpec GridSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3)
        throw std::invalid_argument("grid: expected lo:hi:n, got '" + text + "'");
    GridSpec g;
    g.lo = parse_double(parts[0], "grid.lo");
    g.hi = parse_double(parts[1], "grid.hi");
    g.n = static_cast<int>(parse_double(parts[2], "grid.n"));
    if (g.n < 1 || !(g.lo > 0.0) || !(g.hi > g.lo))
        throw std::invalid_argument("grid: requires 0 < lo < hi and n >= 1");
    return g;
}

void ScenarioConfig::apply(const std::string& key, const std::string& value,
                           const std::string& where) {
    if (key == "mu") mu = parse_double(value, where);
    else if (key == "sigma") sigma = parse_double(value, where);
    else if (key == "r") r = parse_double(value, where);
    else if (key == "T") T = parse_double(value, where);
    else if (key == "x") x = parse_double(value, where);
    else if (key == "gamma") gamma = parse_double(value, where);
    else if (key == "kind") kind = constraint_kind_from_string(value);
    else if (key == "q") q_abs = parse_double(value, where);
    else if (key == "q_frac") { q_abs.reset(); q_frac = parse_double(value, where); }
    else if (key == "eps") eps = parse_double(value, where);
    else if (key == "t") t = parse_double(value, where);
    else if (key == "grid") grid = GridSpec::parse(value);
    else if (key == "mc_samples") mc_samples = static_cast<std::int64_t>(parse_double(value, where));
    else if (key == "mc_steps") mc_steps = static_cast<int>(parse_double(value, where));
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_double(value, where));
    else if (key == "antithetic") antithetic = parse_bool(value, where);
    else throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

ScenarioConfig ScenarioConfig::from_stream(std::istream& in, const std::string& name) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        std::ostringstream where;
        where << name << ":" << lineno;
        if (eq == std::string::npos)
            throw std::invalid_argument(where.str() + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument(where.str() + ": expected key = value");
        cfg.apply(key, value, where.str());
    }
    // fail early on inconsistent scenarios
    cfg.market();
    cfg.utility();
    cfg.constraint().validate();
    if (!(cfg.T > 0.0)) throw std::invalid_argument(name + ": T must be > 0");
    if (!(cfg.x > 0.0)) throw std::invalid_argument(name + ": x must be > 0");
    if (!(cfg.t >= 0.0) || !(cfg.t < cfg.T))
        throw std::invalid_argument(name + ": requires 0 <= t < T");
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return from_stream(in, path);
}

std::string ScenarioConfig::serialize() const {
    std::ostringstream os;
    os.precision(17);
    os << "mu = " << mu << "\n"
       << "sigma = " << sigma << "\n"
       << "r = " << r << "\n"
       << "T = " << T << "\n"
       << "x = " << x << "\n"
       << "gamma = " << gamma << "\n"
       << "kind = " << to_string(kind) << "\n";
    if (q_abs) os << "q = " << *q_abs << "\n";
    else os << "q_frac = " << q_frac << "\n";
    os << "eps = " << eps << "\n"
       << "t = " << t << "\n"
       << "grid = " << grid.lo << ":" << grid.hi << ":" << grid.n << "\n"
       << "mc_samples = " << mc_samples << "\n"
       << "mc_steps = " << mc_steps << "\n"
       << "seed = " << seed << "\n"
       << "antithetic = " << (antithetic ? "true" : "false") << "\n";
    return os.str();
}

} // namespace riskopt
