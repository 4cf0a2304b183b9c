/// Flat `key = value` experiment configuration with lossless round-trip:
/// decimals are written with 17 significant digits and the scale parameters
/// (s, a, p, q, alpha, r, rho) are stored as exact rationals like `1/6`.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sns/rational.hpp"

namespace sns {

struct ExperimentConfig {
    double nu = 1.0;
    int N = 8;
    double T = 1.0;
    double dt = 1e-3;
    int M = 1000;          // ensemble / sample count
    uint64_t seed = 1;

    Rational s{1, 6};
    Rational a{1, 2};
    Rational p{3, 1};
    Rational q{3, 1};
    Rational alpha{3, 1};

    Rational r{1, 2};      // B-norm regularity offset
    Rational rho{3, 1};
    int n = 1;             // moment order

    int mode_k1 = 1;       // tracked mode for trajectory observables
    int mode_k2 = 0;
    int stride = 10;
    int n1 = 4;            // truncation pair for divergence runs
    int n2 = 8;
    int probes = 10;
    int kmax = 64;         // largest |k| in the series-bound table
    int radius = 256;      // lattice summation radius R

    std::string outdir = "out";
};

/// Parses a flat key-value file. Throws std::runtime_error with the line
/// number on malformed lines and on unknown keys.
ExperimentConfig config_load(const std::string& path);

/// Writes every field; config_load(config_save(c)) == c bit-for-bit.
void config_save(const ExperimentConfig& c, const std::string& path);

/// Range checks shared by every command; returns violated clause texts.
std::vector<std::string> validate_config(const ExperimentConfig& c);

/// FNV-1a over the canonical serialized form.
uint64_t config_hash(const ExperimentConfig& c);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace sns
