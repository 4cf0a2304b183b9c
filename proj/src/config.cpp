#include "sns/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sns/stats.hpp"

namespace sns {

Rational parse_rational(const std::string& text) {
    size_t pos = 0;
    auto parse_ll = [&](long long& out) {
        size_t used = 0;
        try {
            out = std::stoll(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_rational: malformed '" + text + "'");
        }
        pos += used;
    };
    long long num = 0, den = 1;
    parse_ll(num);
    if (pos < text.size()) {
        if (text[pos] != '/') throw std::invalid_argument("parse_rational: malformed '" + text + "'");
        ++pos;
        parse_ll(den);
    }
    if (pos != text.size()) throw std::invalid_argument("parse_rational: malformed '" + text + "'");
    return Rational(num, den);
}

std::string to_string(Rational r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Field {
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

long long parse_int_strict(const std::string& v) {
    size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
}

double parse_double_strict(const std::string& v) {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
}

// Ordered field table; save order == this order, so round-trips are stable.
const std::vector<std::pair<std::string, Field>>& field_table() {
    static const std::vector<std::pair<std::string, Field>> table = [] {
        std::vector<std::pair<std::string, Field>> t;
        auto add_double = [&](const char* name, double ExperimentConfig::* m) {
            t.push_back({name,
                         {[m](const ExperimentConfig& c) { return fmt_double(c.*m); },
                          [m](ExperimentConfig& c, const std::string& v) {
                              c.*m = parse_double_strict(v);
                          }}});
        };
        auto add_int = [&](const char* name, int ExperimentConfig::* m) {
            t.push_back({name,
                         {[m](const ExperimentConfig& c) { return std::to_string(c.*m); },
                          [m](ExperimentConfig& c, const std::string& v) {
                              c.*m = static_cast<int>(parse_int_strict(v));
                          }}});
        };
        auto add_rational = [&](const char* name, Rational ExperimentConfig::* m) {
            t.push_back({name,
                         {[m](const ExperimentConfig& c) { return to_string(c.*m); },
                          [m](ExperimentConfig& c, const std::string& v) {
                              c.*m = parse_rational(v);
                          }}});
        };
        add_double("nu", &ExperimentConfig::nu);
        add_int("N", &ExperimentConfig::N);
        add_double("T", &ExperimentConfig::T);
        add_double("dt", &ExperimentConfig::dt);
        add_int("M", &ExperimentConfig::M);
        t.push_back({"seed",
                     {[](const ExperimentConfig& c) { return std::to_string(c.seed); },
                      [](ExperimentConfig& c, const std::string& v) {
                          c.seed = std::stoull(v);
                      }}});
        add_rational("s", &ExperimentConfig::s);
        add_rational("a", &ExperimentConfig::a);
        add_rational("p", &ExperimentConfig::p);
        add_rational("q", &ExperimentConfig::q);
        add_rational("alpha", &ExperimentConfig::alpha);
        add_rational("r", &ExperimentConfig::r);
        add_rational("rho", &ExperimentConfig::rho);
        add_int("n", &ExperimentConfig::n);
        add_int("mode_k1", &ExperimentConfig::mode_k1);
        add_int("mode_k2", &ExperimentConfig::mode_k2);
        add_int("stride", &ExperimentConfig::stride);
        add_int("n1", &ExperimentConfig::n1);
        add_int("n2", &ExperimentConfig::n2);
        add_int("probes", &ExperimentConfig::probes);
        add_int("kmax", &ExperimentConfig::kmax);
        add_int("radius", &ExperimentConfig::radius);
        t.push_back({"outdir",
                     {[](const ExperimentConfig& c) { return c.outdir; },
                      [](ExperimentConfig& c, const std::string& v) { c.outdir = v; }}});
        return t;
    }();
    return table;
}

const Field* find_field(const std::string& key) {
    for (const auto& [name, f] : field_table())
        if (name == key) return &f;
    return nullptr;
}

}  // namespace

ExperimentConfig config_load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config_load: cannot open " + path);
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config_load: " + path + ":" + std::to_string(lineno) +
                                     ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Field* f = find_field(key);
        if (!f)
            throw std::runtime_error("config_load: " + path + ":" + std::to_string(lineno) +
                                     ": unknown key `" + key + "`");
        try {
            f->set(c, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config_load: " + path + ":" + std::to_string(lineno) +
                                     ": bad value for `" + key + "`: " + e.what());
        }
    }
    return c;
}

void config_save(const ExperimentConfig& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("config_save: cannot open " + path);
    for (const auto& [name, f] : field_table()) os << name << " = " << f.get(c) << "\n";
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
    std::vector<std::string> v;
    if (!(c.nu > 0.0)) v.push_back("nu > 0");
    if (!(c.N >= 1)) v.push_back("N >= 1");
    if (!(c.T > 0.0)) v.push_back("T > 0");
    if (!(c.dt > 0.0 && c.dt <= c.T)) v.push_back("0 < dt <= T");
    if (!(c.M >= 1)) v.push_back("M >= 1");
    if (!(c.n >= 1)) v.push_back("n >= 1");
    if (!(c.stride >= 1)) v.push_back("stride >= 1");
    if (!(c.n1 >= 1 && c.n2 >= c.n1)) v.push_back("1 <= n1 <= n2");
    if (!(c.r > Rational(0))) v.push_back("r > 0");
    if (!(c.kmax >= 2)) v.push_back("kmax >= 2");
    if (!(c.radius >= 4 * c.kmax)) v.push_back("radius >= 4*kmax");
    if (c.mode_k1 == 0 && c.mode_k2 == 0) v.push_back("(mode_k1, mode_k2) != (0, 0)");
    return v;
}

uint64_t config_hash(const ExperimentConfig& c) {
    std::ostringstream os;
    for (const auto& [name, f] : field_table()) os << name << "=" << f.get(c) << ";";
    return fnv1a(os.str());
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    for (const auto& [name, f] : field_table())
        if (f.get(a) != f.get(b)) return false;
    return true;
}

}  // namespace sns
