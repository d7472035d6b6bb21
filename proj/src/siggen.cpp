#include "wolct/siggen.hpp"

#include <cmath>
#include <random>

#include "wolct/dft.hpp"

namespace wolct::siggen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<cplx> sample(const SignalKind& kind, const Grid& grid);

std::vector<cplx> sample_noise(const Noise& nz, const Grid& grid) {
    const std::size_t n = grid.count();
    // splitmix64 keeps the stream identical across standard library versions;
    // std::normal_distribution would not.
    std::uint64_t state = nz.seed;
    const auto next = [&state] {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    const auto uniform = [&] { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<cplx> x(n);
    for (auto& z : x) {
        // Box-Muller
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * kPi * uniform();
        z = cplx(r * std::cos(th), r * std::sin(th));
    }
    DftPlan fwd(n, DftPlan::Direction::forward);
    DftPlan bwd(n, DftPlan::Direction::backward);
    std::vector<cplx> spec(n);
    fwd.execute(x, spec);
    const double df = 1.0 / (static_cast<double>(n) * grid.step());
    for (std::size_t k = 0; k < n; ++k) {
        const double idx = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        if (std::abs(idx * df) > nz.bandwidth) spec[k] = 0.0;
    }
    bwd.execute(spec, x);
    const double mid = 0.5 * (grid.start() + grid.last());
    const double width = (grid.last() - grid.start()) / 6.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = (grid.point(k) - mid) / width;
        x[k] *= std::exp(-0.5 * s * s) / static_cast<double>(n);
    }
    return x;
}

std::vector<cplx> sample(const SignalKind& kind, const Grid& grid) {
    const std::size_t n = grid.count();
    std::vector<cplx> out(n);
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                       for (std::size_t k = 0; k < n; ++k) {
                           const double s = (grid.point(k) - g.center) / g.sigma;
                           out[k] = std::exp(-0.5 * s * s);
                       }
                   },
                   [&](const ChirpedGaussian& g) {
                       for (std::size_t k = 0; k < n; ++k) {
                           const double t = grid.point(k);
                           const double s = (t - g.center) / g.sigma;
                           out[k] = std::exp(-0.5 * s * s) * std::polar(1.0, g.chirp_rate * t * t / 2.0);
                       }
                   },
                   [&](const Rectangle& r) {
                       for (std::size_t k = 0; k < n; ++k)
                           out[k] = std::abs(grid.point(k) - r.center) <= r.half_width ? 1.0 : 0.0;
                   },
                   [&](const Hermite& h) {
                       for (std::size_t k = 0; k < n; ++k) {
                           const double x = grid.point(k) / h.scale;
                           out[k] = hermite_polynomial(h.order, x) * std::exp(-0.5 * x * x);
                       }
                   },
                   [&](const Modulated& m) {
                       out = sample(*m.base, grid);
                       for (std::size_t k = 0; k < n; ++k) out[k] *= std::polar(1.0, m.freq * grid.point(k));
                   },
                   [&](const Noise& nz) { out = sample_noise(nz, grid); },
               },
               kind.value);
    return out;
}

}  // namespace

double hermite_polynomial(int n, double x) {
    if (n < 0) throw InputError("hermite_polynomial: negative order");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void validate(const SignalKind& kind) {
    const auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string("signal spec: ") + what + " must be positive");
    };
    const auto finite = [](double v, const char* what) {
        if (!std::isfinite(v)) throw InputError(std::string("signal spec: ") + what + " must be finite");
    };
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                       positive(g.sigma, "sigma");
                       finite(g.center, "center");
                   },
                   [&](const ChirpedGaussian& g) {
                       positive(g.sigma, "sigma");
                       finite(g.center, "center");
                       finite(g.chirp_rate, "chirp_rate");
                   },
                   [&](const Rectangle& r) {
                       positive(r.half_width, "half_width");
                       finite(r.center, "center");
                   },
                   [&](const Hermite& h) {
                       if (h.order < 0 || h.order > 8) throw InputError("signal spec: hermite order must be in [0, 8]");
                       positive(h.scale, "scale");
                   },
                   [&](const Modulated& m) {
                       if (!m.base) throw InputError("signal spec: modulated signal needs a base");
                       finite(m.freq, "freq");
                       validate(*m.base);
                   },
                   [&](const Noise& nz) { positive(nz.bandwidth, "bandwidth"); },
               },
               kind.value);
}

SampledSignal generate(const SignalSpec& spec) {
    validate(spec.kind);
    std::vector<cplx> samples = sample(spec.kind, spec.grid);
    SampledSignal s(spec.grid, std::move(samples));
    if (!spec.normalize) return s;
    const double nrm = norm_l2(s);
    if (nrm == 0.0) throw InputError("signal spec: cannot normalize a signal that vanishes on the grid");
    return s.scaled(1.0 / nrm);
}

SampledSignal unit_gaussian(const Grid& grid, double sigma, double center) {
    return generate(SignalSpec{SignalKind{Gaussian{sigma, center}}, grid, true});
}

}  // namespace wolct::siggen
