#include "sns/stats.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sns {

ReportRow make_row(std::string name, double estimate, double target, double se, double gate) {
    ReportRow r;
    r.name = std::move(name);
    r.estimate = estimate;
    r.target = target;
    r.se = se;
    r.gate = gate;
    // Statistical rows gate symmetrically at `gate` standard errors;
    // deterministic rows (se == 0) gate one-sidedly: estimate <= target + gate.
    r.pass = se > 0.0 ? std::abs(estimate - target) <= gate * se
                      : estimate <= target + gate;
    return r;
}

bool ExperimentReport::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

void ExperimentReport::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("ExperimentReport: cannot open " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "# experiment=%s seed=%llu config_hash=%016llx version=%s\n",
                  experiment.c_str(), static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(config_hash), version.c_str());
    os << buf << "name,estimate,target,se,gate,pass\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%d\n", r.name.c_str(),
                      r.estimate, r.target, r.se, r.gate, r.pass ? 1 : 0);
        os << buf;
    }
}

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace sns
