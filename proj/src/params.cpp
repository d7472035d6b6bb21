#include "wolct/params.hpp"

#include <cmath>
#include <cstdio>

namespace wolct {

namespace {

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

OlctParams::OlctParams(double a, double b, double c, double d, double u0, double w0, bool project_d)
    : a_(a), b_(b), c_(c), d_(d), u0_(u0), w0_(w0) {
    if (!all_finite({a, b, c, d, u0, w0}))
        throw InputError("OlctParams: all six parameters must be finite");
    if (project_d && std::abs(a_) > 1e-8) d_ = (1.0 + b_ * c_) / a_;
    const double det = a_ * d_ - b_ * c_;
    if (std::abs(det - 1.0) > kUnimodularTol) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "OlctParams: ad - bc = %.17g, must equal 1", det);
        throw InputError(buf);
    }
}

OlctParams OlctParams::without_offsets() const { return OlctParams(a_, b_, c_, d_, 0.0, 0.0); }

OlctParams invert_params(const OlctParams& A) {
    const double a = A.a(), b = A.b(), c = A.c(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    return OlctParams(d, -b, -c, a, b * w0 - d * u0, c * u0 - a * w0);
}

namespace special {

OlctParams fourier() { return OlctParams(0.0, 1.0, -1.0, 0.0); }

OlctParams fractional_fourier(double angle) {
    const double s = std::sin(angle), c = std::cos(angle);
    if (std::abs(s) < 1e-12)
        throw InputError("fractional_fourier: angle is a multiple of pi (b = 0 regime)");
    // Exact values at the quarter rotations so fractional_fourier(pi/2) == fourier().
    const auto snap = [](double x) { return std::abs(x) < 1e-15 ? 0.0 : x; };
    return OlctParams(snap(c), snap(s), snap(-s), snap(c));
}

OlctParams fresnel(double distance, double wavelength) {
    if (!(distance > 0.0)) throw InputError("fresnel: distance must be positive");
    if (!(wavelength > 0.0)) throw InputError("fresnel: wavelength must be positive");
    return OlctParams(1.0, wavelength * distance / (2.0 * kPi), 0.0, 1.0);
}

OlctParams lct(double a, double b, double c, double d) { return OlctParams(a, b, c, d); }

OlctParams identity() { return OlctParams(); }

}  // namespace special

Grid::Grid(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
    if (!std::isfinite(start)) throw InputError("Grid: start must be finite");
    if (!(step > 0.0) || !std::isfinite(step)) throw InputError("Grid: step must be positive");
    if (count < 2) throw InputError("Grid: count must be at least 2");
}

bool Grid::matches(const Grid& other, double rel_tol) const {
    return count_ == other.count_ && std::abs(step_ - other.step_) <= rel_tol * step_ &&
           std::abs(start_ - other.start_) <= rel_tol * step_;
}

SampledSignal::SampledSignal(Grid grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.count())
        throw InputError("SampledSignal: sample count " + std::to_string(samples_.size()) +
                         " does not match grid count " + std::to_string(grid_.count()));
    for (const cplx& z : samples_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InputError("SampledSignal: non-finite sample");
}

SampledSignal::SampledSignal(Grid grid) : grid_(grid), samples_(grid.count(), cplx{}) {}

cplx SampledSignal::interpolate(double t) const {
    const double x = (t - grid_.start()) / grid_.step();
    const double fl = std::floor(x);
    const double frac = x - fl;
    const auto n = static_cast<long long>(samples_.size());
    const auto at = [&](long long k) { return (k < 0 || k >= n) ? cplx{} : samples_[static_cast<std::size_t>(k)]; };
    if (fl < -1.0 || fl > static_cast<double>(n)) return {};
    const auto k = static_cast<long long>(fl);
    if (frac == 0.0) return at(k);
    return (1.0 - frac) * at(k) + frac * at(k + 1);
}

SampledSignal SampledSignal::scaled(cplx factor) const {
    std::vector<cplx> out(samples_);
    for (cplx& z : out) z *= factor;
    return SampledSignal(grid_, std::move(out));
}

TimeFreqMap::TimeFreqMap(Grid u_grid, Grid w_grid, OlctParams params)
    : u_grid_(u_grid), w_grid_(w_grid), params_(params), values_(u_grid.count() * w_grid.count()) {}

TimeFreqMap::TimeFreqMap(Grid u_grid, Grid w_grid, OlctParams params, std::vector<cplx> values)
    : u_grid_(u_grid), w_grid_(w_grid), params_(params), values_(std::move(values)) {
    if (values_.size() != u_grid_.count() * w_grid_.count())
        throw InputError("TimeFreqMap: values do not match grid dimensions");
    for (const cplx& z : values_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InputError("TimeFreqMap: non-finite value");
}

std::size_t TimeFreqMap::w_index(double w) const {
    const double x = (w - w_grid_.start()) / w_grid_.step();
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6 || r < 0.0 || r >= static_cast<double>(nw()))
        throw InputError("TimeFreqMap: w = " + std::to_string(w) + " is not on the w grid");
    return static_cast<std::size_t>(r);
}

double TimeFreqMap::energy() const {
    double acc = 0.0;
    for (const cplx& z : values_) acc += std::norm(z);
    return acc * u_grid_.step() * w_grid_.step();
}

double norm_l2(const SampledSignal& s) {
    double acc = 0.0;
    for (const cplx& z : s.samples()) acc += std::norm(z);
    return std::sqrt(acc * s.step());
}

cplx inner_product(const SampledSignal& f, const SampledSignal& g) {
    if (!f.grid().matches(g.grid(), 1e-12)) throw InputError("inner_product: grid mismatch");
    cplx acc{};
    for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * std::conj(g[k]);
    return acc * f.step();
}

std::string to_string(const OlctParams& A) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g, %.17g, %.17g, %.17g)", A.a(), A.b(), A.c(), A.d(),
                  A.u0(), A.w0());
    return buf;
}

}  // namespace wolct
