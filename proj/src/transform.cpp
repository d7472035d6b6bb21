#include "wolct/transform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

namespace wolct {

namespace {

void require_integral(const OlctParams& A, const char* what) {
    if (A.b() == 0.0) throw InputError(std::string(what) + ": b = 0, use the chirp-scaling path");
}

/// Exponent of K_A without the prefactor. With u0 = w0 = 0 this is bit-for-bit
/// the windowed LCT exponent.
double kernel_phase(const OlctParams& A, double t, double u) {
    const double a = A.a(), b = A.b(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    return a / (2.0 * b) * t * t - t * (u - u0) / b - u * (d * u0 - b * w0) / b + d / (2.0 * b) * (u * u + u0 * u0);
}

/// exp(i[-(u/b)(d u0 - b w0) + (d/2b)(u^2 + u0^2)]): the u-only part of the exponent.
double output_phase(const OlctParams& A, double u) {
    const double b = A.b(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    return -u * (d * u0 - b * w0) / b + d / (2.0 * b) * (u * u + u0 * u0);
}

bool same_step(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); }

/// Runs body(worker, i) for i in [0, n). Work is split into contiguous blocks;
/// each i is handled by exactly one worker and results never depend on the split.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(unsigned, std::size_t, std::size_t)>& block) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        block(0, 0, n);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned wk = 0; wk < workers; ++wk) {
        const std::size_t lo = std::min(n, wk * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, wk, lo, hi] {
            try {
                block(wk, lo, hi);
            } catch (...) {
                errors[wk] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Offset (in samples) from index k of f to the index of phi(t_k - w).
long long window_shift(const SampledSignal& f, const SampledSignal& phi, double w) {
    const double dt = f.step();
    if (!same_step(dt, phi.step())) throw InputError("window and signal must share the sample step");
    const double x = (f.grid().start() - w - phi.grid().start()) / dt;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6)
        throw InputError("window position w = " + std::to_string(w) + " is off the sample lattice");
    return static_cast<long long>(r);
}

void check_w_grid(const SampledSignal& f, const SampledSignal& phi, const Grid& w_grid) {
    const double ratio = w_grid.step() / f.step();
    if (std::abs(ratio - std::round(ratio)) > 1e-6)
        throw InputError("w grid step must be an integer multiple of the sample step");
    window_shift(f, phi, w_grid.start());
}

/// g_k = f_k conj(phi(t_k - w)), zero outside phi's support.
void fill_windowed(const SampledSignal& f, const SampledSignal& phi, long long shift, std::span<cplx> g) {
    const auto nphi = static_cast<long long>(phi.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const long long j = static_cast<long long>(k) + shift;
        g[k] = (j < 0 || j >= nphi) ? cplx{} : f[k] * std::conj(phi[static_cast<std::size_t>(j)]);
    }
}

/// Shared engine for the windowed transforms; `kernel_params` drives the
/// kernel and `tag_params` is stored on the map.
TimeFreqMap windowed_transform(const SampledSignal& f, const SampledSignal& phi, const OlctParams& kernel_params,
                               const OlctParams& tag_params, const Grid& u_grid, const Grid& w_grid,
                               TransformMethod method, unsigned threads) {
    require_integral(kernel_params, "windowed transform");
    check_w_grid(f, phi, w_grid);
    const std::size_t n = f.size();
    const std::size_t nu = u_grid.count();
    const double dt = f.step();
    TimeFreqMap V(u_grid, w_grid, tag_params);

    std::vector<long long> shifts(w_grid.count());
    for (std::size_t j = 0; j < shifts.size(); ++j) shifts[j] = window_shift(f, phi, w_grid.point(j));

    if (method == TransformMethod::direct) {
        std::vector<cplx> K(nu * n);
        for (std::size_t m = 0; m < nu; ++m)
            for (std::size_t k = 0; k < n; ++k) K[m * n + k] = kernel(kernel_params, f.grid().point(k), u_grid.point(m));
        parallel_for(w_grid.count(), threads, [&](unsigned, std::size_t lo, std::size_t hi) {
            std::vector<cplx> g(n);
            for (std::size_t j = lo; j < hi; ++j) {
                fill_windowed(f, phi, shifts[j], g);
                auto out = V.slice(j);
                for (std::size_t m = 0; m < nu; ++m) {
                    cplx acc{};
                    const cplx* row = &K[m * n];
                    for (std::size_t k = 0; k < n; ++k) acc += g[k] * row[k];
                    out[m] = acc * dt;
                }
            }
        });
        return V;
    }

    const double a = kernel_params.a(), b = kernel_params.b();
    std::vector<cplx> chirp(n), post(nu);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = f.grid().point(k);
        chirp[k] = std::polar(1.0, a / (2.0 * b) * t * t);
    }
    const cplx pref = kernel_prefactor(b);
    for (std::size_t m = 0; m < nu; ++m) post[m] = pref * std::polar(1.0, output_phase(kernel_params, u_grid.point(m)));

    parallel_for(w_grid.count(), threads, [&](unsigned, std::size_t lo, std::size_t hi) {
        ChirpDft dft(f.grid(), u_grid, b, kernel_params.u0());
        std::vector<cplx> g(n);
        for (std::size_t j = lo; j < hi; ++j) {
            fill_windowed(f, phi, shifts[j], g);
            for (std::size_t k = 0; k < n; ++k) g[k] *= chirp[k];
            auto out = V.slice(j);
            dft.apply(g, out);
            for (std::size_t m = 0; m < nu; ++m) out[m] *= post[m];
        }
    });
    return V;
}

}  // namespace

TransformMethod parse_method(std::string_view name) {
    if (name == "direct") return TransformMethod::direct;
    if (name == "fast") return TransformMethod::fast;
    throw InputError("unknown method '" + std::string(name) + "' (expected direct|fast)");
}

std::string_view to_string(TransformMethod m) { return m == TransformMethod::direct ? "direct" : "fast"; }

cplx kernel_prefactor(double b) {
    if (b == 0.0) throw InputError("kernel: b = 0");
    return 1.0 / std::sqrt(cplx(0.0, 2.0 * kPi * b));
}

cplx kernel(const OlctParams& A, double t, double u) {
    return kernel_prefactor(A.b()) * std::polar(1.0, kernel_phase(A, t, u));
}

cplx wlct_kernel(const OlctParams& A, double t, double u) { return kernel(A.without_offsets(), t, u); }

Grid canonical_u_grid(const Grid& t_grid, const OlctParams& A) {
    require_integral(A, "canonical_u_grid");
    const auto n = static_cast<double>(t_grid.count());
    const double du = 2.0 * kPi * std::abs(A.b()) / (n * t_grid.step());
    return Grid(A.u0() - 0.5 * n * du, du, t_grid.count());
}

SampledSignal olct_direct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid) {
    require_integral(A, "olct_direct");
    std::vector<cplx> out(u_grid.count());
    const cplx pref = kernel_prefactor(A.b());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double u = u_grid.point(m);
        cplx acc{};
        for (std::size_t k = 0; k < f.size(); ++k)
            acc += f[k] * (pref * std::polar(1.0, kernel_phase(A, f.grid().point(k), u)));
        out[m] = acc * f.step();
    }
    return SampledSignal(u_grid, std::move(out));
}

SampledSignal olct_chirp_scaling(const SampledSignal& f, const OlctParams& A, const Grid& u_grid) {
    if (A.b() != 0.0) throw InputError("olct_chirp_scaling: b != 0, use the integral path");
    const double c = A.c(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    // d < 0 gives a purely imaginary principal root.
    const cplx root_d = std::sqrt(cplx(d, 0.0));
    std::vector<cplx> out(u_grid.count());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double u = u_grid.point(m);
        const double s = u - u0;
        out[m] = root_d * std::polar(1.0, c * d / 2.0 * s * s + u * w0) * f.interpolate(d * s);
    }
    return SampledSignal(u_grid, std::move(out));
}

ChirpDft::ChirpDft(const Grid& t_grid, const Grid& u_grid, double b, double u_ref)
    : pre_(t_grid.count()),
      post_(t_grid.count()),
      work_(t_grid.count()),
      plan_(t_grid.count(), b < 0.0 ? DftPlan::Direction::backward : DftPlan::Direction::forward) {
    if (b == 0.0) throw InputError("ChirpDft: b = 0");
    const std::size_t n = t_grid.count();
    const double nd = static_cast<double>(n);
    const double dt = t_grid.step();
    const double du = 2.0 * kPi * std::abs(b) / (nd * dt);
    if (u_grid.count() != n) throw InputError("fast path: u grid must have as many points as the signal");
    if (std::abs(u_grid.step() - du) > 1e-9 * du)
        throw InputError("fast path: u grid step must equal 2 pi |b| / (N dt); use the direct method for other grids");
    const double t0 = t_grid.start();
    const double uc = u_grid.start() + 0.5 * nd * du;
    // t_k (u_m - u_ref)/b = t_k (uc - u_ref)/b + t0 (m - N/2) du/b + sgn(b) 2 pi k m / N - sgn(b) pi k
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t_grid.point(k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        pre_[k] = sign * std::polar(1.0, -t * (uc - u_ref) / b);
    }
    for (std::size_t m = 0; m < n; ++m) {
        const double off = static_cast<double>(m) - 0.5 * nd;
        post_[m] = dt * std::polar(1.0, -t0 * off * du / b);
    }
}

void ChirpDft::apply(std::span<const cplx> g, std::span<cplx> out) {
    for (std::size_t k = 0; k < work_.size(); ++k) work_[k] = g[k] * pre_[k];
    plan_.execute(work_, out);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] *= post_[m];
}

SampledSignal fast_olct(const SampledSignal& f, const OlctParams& A) {
    return fast_olct(f, A, canonical_u_grid(f.grid(), A));
}

SampledSignal fast_olct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid) {
    require_integral(A, "fast_olct");
    const std::size_t n = f.size();
    const double a = A.a(), b = A.b();
    std::vector<cplx> g(n), out(u_grid.count());
    for (std::size_t k = 0; k < n; ++k) {
        const double t = f.grid().point(k);
        g[k] = f[k] * std::polar(1.0, a / (2.0 * b) * t * t);
    }
    ChirpDft dft(f.grid(), u_grid, b, A.u0());
    dft.apply(g, out);
    const cplx pref = kernel_prefactor(b);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] *= pref * std::polar(1.0, output_phase(A, u_grid.point(m)));
    return SampledSignal(u_grid, std::move(out));
}

SampledSignal olct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid, TransformMethod method) {
    if (A.regime() == OlctParams::Regime::chirp_scaling) {
        if (method == TransformMethod::fast)
            throw InputError("b = 0 has no fast path; use method 'direct', which evaluates the chirp-scaling branch");
        return olct_chirp_scaling(f, A, u_grid);
    }
    return method == TransformMethod::fast ? fast_olct(f, A, u_grid) : olct_direct(f, A, u_grid);
}

cplx inverse_phase(const OlctParams& A) {
    const double a = A.a(), b = A.b(), c = A.c(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    return std::polar(1.0, c * d / 2.0 * u0 * u0 - a * d * u0 * w0 + a * b / 2.0 * w0 * w0);
}

cplx inverse_phase_linear_w0(const OlctParams& A) {
    const double a = A.a(), b = A.b(), c = A.c(), d = A.d(), u0 = A.u0(), w0 = A.w0();
    return std::polar(1.0, c * d / 2.0 * u0 * u0 - a * d * u0 * w0 + a * b / 2.0 * w0);
}

SampledSignal inverse_olct_unphased(const SampledSignal& F, const OlctParams& A, const Grid& t_grid) {
    require_integral(A, "inverse_olct");
    const OlctParams inv = invert_params(A);
    const cplx pref = kernel_prefactor(inv.b());
    std::vector<cplx> out(t_grid.count());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double t = t_grid.point(j);
        cplx acc{};
        for (std::size_t m = 0; m < F.size(); ++m)
            acc += F[m] * (pref * std::polar(1.0, kernel_phase(inv, F.grid().point(m), t)));
        out[j] = acc * F.step();
    }
    return SampledSignal(t_grid, std::move(out));
}

SampledSignal inverse_olct(const SampledSignal& F, const OlctParams& A, const Grid& t_grid) {
    return inverse_olct_unphased(F, A, t_grid).scaled(inverse_phase(A));
}

cplx measure_inverse_phase(const SampledSignal& f, const OlctParams& A) {
    const double e = std::pow(norm_l2(f), 2);
    if (e == 0.0) throw InputError("measure_inverse_phase: zero signal");
    const SampledSignal F = olct_direct(f, A, canonical_u_grid(f.grid(), A));
    const SampledSignal back = inverse_olct_unphased(F, A, f.grid());
    return inner_product(f, back) / e;
}

Grid default_w_grid(const SampledSignal& f, const SampledSignal& phi) {
    const double dt = f.step();
    if (!same_step(dt, phi.step())) throw InputError("window and signal must share the sample step");
    const double offset = dt * std::round(phi.grid().start() / dt) - phi.grid().start();
    return Grid(f.grid().start() + offset, dt, f.size());
}

SampledSignal windowed_product(const SampledSignal& f, const SampledSignal& phi, double w) {
    std::vector<cplx> g(f.size());
    fill_windowed(f, phi, window_shift(f, phi, w), g);
    return SampledSignal(f.grid(), std::move(g));
}

TimeFreqMap wlct(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A, const Grid& u_grid,
                 const Grid& w_grid, TransformMethod method, unsigned threads) {
    return windowed_transform(f, phi, A.without_offsets(), A, u_grid, w_grid, method, threads);
}

TimeFreqMap wolct(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A, const Grid& u_grid,
                  const Grid& w_grid, TransformMethod method, unsigned threads) {
    return windowed_transform(f, phi, A, A, u_grid, w_grid, method, threads);
}

SampledSignal inverse_wolct_slice(const TimeFreqMap& V, double w, const Grid& t_grid) {
    const std::size_t j = V.w_index(w);
    const auto s = V.slice(j);
    const SampledSignal F(V.u_grid(), std::vector<cplx>(s.begin(), s.end()));
    return inverse_olct(F, V.params(), t_grid);
}

}  // namespace wolct
