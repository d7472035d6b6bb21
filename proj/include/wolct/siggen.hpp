#pragma once

#include <cstdint>
#include <memory>
#include <variant>

#include "wolct/params.hpp"

namespace wolct::siggen {

/// exp(-(t - center)^2 / (2 sigma^2))
struct Gaussian {
    double sigma = 1.0;
    double center = 0.0;
};

/// Gaussian times exp(i chirp_rate t^2 / 2).
struct ChirpedGaussian {
    double sigma = 1.0;
    double center = 0.0;
    double chirp_rate = 0.0;
};

/// 1 on |t - center| <= half_width, 0 elsewhere.
struct Rectangle {
    double half_width = 1.0;
    double center = 0.0;
};

/// H_n(t/scale) exp(-t^2 / (2 scale^2)), physicists' Hermite polynomials.
struct Hermite {
    int order = 0;
    double scale = 1.0;
};

/// Seeded complex white noise, masked to |frequency| <= bandwidth (cycles per
/// unit time) and tapered by a Gaussian envelope spanning the grid.
struct Noise {
    std::uint64_t seed = 0;
    double bandwidth = 1.0;
};

struct SignalKind;

/// base(t) exp(i freq t).
struct Modulated {
    std::shared_ptr<const SignalKind> base;
    double freq = 0.0;
};

struct SignalKind {
    std::variant<Gaussian, ChirpedGaussian, Rectangle, Hermite, Modulated, Noise> value;
};

struct SignalSpec {
    SignalKind kind;
    Grid grid;
    bool normalize = false;
};

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
double hermite_polynomial(int n, double x);

/// Throws InputError on invalid parameters (non-positive widths, Hermite
/// order outside [0, 8], missing modulation base).
void validate(const SignalKind& kind);

/// Deterministic: identical specs give bit-identical samples.
SampledSignal generate(const SignalSpec& spec);

/// Short convenience: unit-norm Gaussian on `grid`.
SampledSignal unit_gaussian(const Grid& grid, double sigma = 1.0, double center = 0.0);

}  // namespace wolct::siggen
