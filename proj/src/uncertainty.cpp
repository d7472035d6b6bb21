#include "wolct/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wolct::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double energy_of(const SampledSignal& s) {
    const double n = norm_l2(s);
    return n * n;
}

/// Marginal sum_j |V(u_m, w_j)|^2 per u bin (no measure factors).
std::vector<double> u_marginal(const TimeFreqMap& V) {
    std::vector<double> p(V.nu(), 0.0);
    for (std::size_t j = 0; j < V.nw(); ++j) {
        const auto s = V.slice(j);
        for (std::size_t m = 0; m < V.nu(); ++m) p[m] += std::norm(s[m]);
    }
    return p;
}

struct Moments {
    double centroid = 0.0;
    double spread = 0.0;
};

Moments moments(const Grid& grid, const std::vector<double>& weight) {
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
        w0 += weight[k];
        w1 += weight[k] * grid.point(k);
    }
    if (w0 == 0.0) return {};
    const double c = w1 / w0;
    double w2 = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
        const double x = grid.point(k) - c;
        w2 += weight[k] * x * x;
    }
    return {c, std::sqrt(w2 / w0)};
}

std::vector<double> power(const SampledSignal& f) {
    std::vector<double> p(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) p[k] = std::norm(f[k]);
    return p;
}

std::size_t nearest_index(const Grid& grid, double x) {
    const double r = std::round((x - grid.start()) / grid.step());
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(grid.count() - 1)));
}

struct Capture {
    std::size_t half_bins = 0;
    double captured = 0.0;
};

/// Smallest symmetric window of bins around `center` holding at least
/// `fraction` of the total weight.
Capture centered_capture(const std::vector<double>& p, std::size_t center, double fraction) {
    double total = 0.0;
    for (double x : p) total += x;
    const double target = fraction * total;
    double acc = p[center];
    std::size_t r = 0;
    const std::size_t n = p.size();
    while (acc < target && (r < center || center + r + 1 < n)) {
        ++r;
        if (r <= center) acc += p[center - r];
        if (center + r < n) acc += p[center + r];
    }
    return {r, acc};
}

/// ln|x| with the exact-zero sample moved to a quarter step.
double log_abs(double x, double step) { return std::abs(x) < 1e-9 * step ? std::log(step / 4.0) : std::log(std::abs(x)); }

void require_nonzero(double nrm, const char* what) {
    if (!(nrm > 0.0)) throw InputError(std::string(what) + " must be nonzero");
}

struct QuadFit {
    double c0, c1, c2;  // y = c0 + c1 x + c2 x^2
};

/// Least squares on a centered and scaled abscissa, converted back.
QuadFit fit_quadratic(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 3) throw InputError("Gaussian fit needs at least three samples above the floor");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double scale = 0.0;
    for (double x : xs) scale = std::max(scale, std::abs(x - mean));
    if (scale == 0.0) throw InputError("Gaussian fit: degenerate abscissa");
    double M[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (xs[i] - mean) / scale;
        const double basis[3] = {1.0, z, z * z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) M[r][c] += basis[r] * basis[c];
            M[r][3] += basis[r] * ys[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-300) throw InputError("Gaussian fit: singular normal equations");
        std::swap(M[col], M[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = M[r][col] / M[col][col];
            for (int c = col; c < 4; ++c) M[r][c] -= factor * M[col][c];
        }
    }
    const double z0 = M[0][3] / M[0][0], z1 = M[1][3] / M[1][1], z2 = M[2][3] / M[2][2];
    // y = z0 + z1 (x - mean)/s + z2 (x - mean)^2 / s^2
    const double c2 = z2 / (scale * scale);
    const double c1 = z1 / scale - 2.0 * mean * c2;
    const double c0 = z0 - z1 * mean / scale + c2 * mean * mean;
    return {c0, c1, c2};
}

struct EnvelopeFit {
    double rate;      // Gaussian decay rate (positive for decay)
    double center;
    double peak;      // envelope maximum
    double residual;  // ||mag - envelope|| / ||mag||
};

/// Residual over the whole grid, or only over the fitted samples when
/// `fitted_only` is set.
EnvelopeFit fit_envelope(const Grid& grid, const std::vector<double>& mag, double floor, const char* what,
                         bool fitted_only = false) {
    const double mx = *std::max_element(mag.begin(), mag.end());
    if (!(mx > 0.0)) throw InputError(std::string(what) + ": identically zero");
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < mag.size(); ++k)
        if (mag[k] > floor * mx) {
            xs.push_back(grid.point(k));
            ys.push_back(std::log(mag[k]));
        }
    const QuadFit q = fit_quadratic(xs, ys);
    const double rate = -q.c2;
    if (!(rate > 0.0)) throw InputError(std::string(what) + ": no Gaussian decay (fitted rate <= 0)");
    const double center = q.c1 / (2.0 * rate);
    const double peak = std::exp(q.c0 + q.c1 * center + q.c2 * center * center);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
        if (fitted_only && !(mag[k] > floor * mx)) continue;
        const double x = grid.point(k) - center;
        const double env = peak * std::exp(-rate * x * x);
        num += (mag[k] - env) * (mag[k] - env);
        den += mag[k] * mag[k];
    }
    return {rate, center, peak, std::sqrt(num / den)};
}

InequalityResult make_result(Check name, double lhs, double rhs, double ratio, double tol, Diagnostics diag) {
    diag["tol"] = tol;
    return InequalityResult{name, lhs, rhs, ratio, ratio >= 1.0 - tol, std::move(diag)};
}

void require_same_params(const TimeFreqMap& V, const OlctParams& A) {
    if (!(V.params() == A)) throw InputError("time-frequency map was produced with different parameters");
}

TransformMethod method_for(const Grid& t_grid, const OlctParams& A, const Grid& u_grid) {
    const Grid canon = canonical_u_grid(t_grid, A);
    return (u_grid.count() == canon.count() && std::abs(u_grid.step() - canon.step()) <= 1e-9 * canon.step())
               ? TransformMethod::fast
               : TransformMethod::direct;
}

}  // namespace

std::string_view to_string(Check c) {
    switch (c) {
        case Check::heisenberg: return "heisenberg";
        case Check::lieb: return "lieb";
        case Check::logarithmic: return "logarithmic";
        case Check::donoho_stark: return "donoho_stark";
        case Check::beurling: return "beurling";
        case Check::nazarov: return "nazarov";
        case Check::hardy: return "hardy";
        case Check::abb: return "abb";
    }
    return "?";
}

Check parse_check(std::string_view name) {
    for (Check c : kAllChecks)
        if (to_string(c) == name) return c;
    throw InputError("unknown check '" + std::string(name) + "'");
}

bool is_proven(Check c) {
    return c == Check::heisenberg || c == Check::lieb || c == Check::logarithmic || c == Check::donoho_stark;
}

std::string_view to_string(HardyVerdict v) {
    switch (v) {
        case HardyVerdict::forces_zero: return "forces_zero";
        case HardyVerdict::gaussian_extremal: return "gaussian_extremal";
        case HardyVerdict::unconstrained: return "unconstrained";
    }
    return "?";
}

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto [lo, hi] = intervals_[i];
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
            throw InputError("interval set: each interval needs finite lo < hi");
        if (i > 0 && lo < intervals_[i - 1].second)
            throw InputError("interval set: intervals must be sorted and disjoint");
    }
}

IntervalSet IntervalSet::centered(double center, double half_width) {
    return IntervalSet({{center - half_width, center + half_width}});
}

bool IntervalSet::contains(double x) const {
    for (const auto& [lo, hi] : intervals_)
        if (x >= lo && x < hi) return true;
    return false;
}

double IntervalSet::measure() const {
    double m = 0.0;
    for (const auto& [lo, hi] : intervals_) m += hi - lo;
    return m;
}

double IntervalSet::snapped_measure(const Grid& grid) const {
    std::size_t bins = 0;
    for (std::size_t k = 0; k < grid.count(); ++k)
        if (contains(grid.point(k))) ++bins;
    return static_cast<double>(bins) * grid.step();
}

IntervalSet IntervalSet::scaled(double factor) const {
    if (!(factor != 0.0) || !std::isfinite(factor)) throw InputError("interval set: scale factor must be nonzero");
    std::vector<std::pair<double, double>> out;
    out.reserve(intervals_.size());
    for (const auto& [lo, hi] : intervals_) {
        const double a = lo * factor, b = hi * factor;
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    return IntervalSet(std::move(out));
}

std::pair<double, double> measure_concentration(const SampledSignal& f, const TimeFreqMap& V, const IntervalSet& D,
                                                const IntervalSet& S) {
    double out_t = 0.0, all_t = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double p = std::norm(f[k]);
        all_t += p;
        if (!D.contains(f.grid().point(k))) out_t += p;
    }
    const std::vector<double> pu = u_marginal(V);
    double out_u = 0.0, all_u = 0.0;
    for (std::size_t m = 0; m < pu.size(); ++m) {
        all_u += pu[m];
        if (!S.contains(V.u_grid().point(m))) out_u += pu[m];
    }
    if (all_t == 0.0 || all_u == 0.0) throw InputError("concentration: zero signal or zero transform");
    return {std::sqrt(out_t / all_t), std::sqrt(out_u / all_u)};
}

HardyVerdict hardy_verdict(double product, double tol) {
    if (product > 0.25 + tol) return HardyVerdict::forces_zero;
    if (std::abs(product - 0.25) <= tol) return HardyVerdict::gaussian_extremal;
    return HardyVerdict::unconstrained;
}

double digamma(double x) {
    if (!std::isfinite(x)) throw InputError("digamma: non-finite argument");
    if (x <= 0.0 && x == std::floor(x)) throw InputError("digamma: pole at non-positive integer");
    if (x < 0.5) return digamma(1.0 - x) - kPi / std::tan(kPi * x);
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli tail: 1/12 r - 1/120 r^2 + 1/252 r^3 - 1/240 r^4 + 1/132 r^5 - 691/32760 r^6 + 1/12 r^7
    const double tail =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

double log_uncertainty_constant() { return digamma(0.5) - std::log(kPi); }

InequalityResult heisenberg_check(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A,
                                  const TimeFreqMap& V, double slack) {
    require_same_params(V, A);
    const double nf = norm_l2(f), nphi = norm_l2(phi);
    require_nonzero(nf, "signal");
    require_nonzero(nphi, "window");
    const double expected = nf * nf * nphi * nphi;
    const double ev = V.energy();
    if (std::abs(ev - expected) > 0.05 * expected)
        throw InputError("heisenberg: transform energy " + std::to_string(ev) + " does not match ||f||^2 ||phi||^2 = " +
                         std::to_string(expected));

    const auto u_moment = [](const TimeFreqMap& M) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M.nw(); ++j) {
            const auto s = M.slice(j);
            for (std::size_t m = 0; m < M.nu(); ++m) {
                const double u = M.u_grid().point(m);
                acc += u * u * std::norm(s[m]);
            }
        }
        return acc * M.u_grid().step() * M.w_grid().step();
    };
    double t_moment = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = f.grid().point(k);
        t_moment += t * t * std::norm(f[k]);
    }
    t_moment *= f.step();

    const double lhs = std::sqrt(u_moment(V)) * std::sqrt(t_moment);
    const double rhs = std::abs(A.b()) / 2.0 * nf * nf * nphi;
    Diagnostics diag{{"energy_ratio", ev / expected}, {"t_moment", t_moment}, {"u_moment", u_moment(V)}};
    if (!A.has_offsets()) {
        const TimeFreqMap G =
            wlct(f, phi, A, V.u_grid(), V.w_grid(), method_for(f.grid(), A, V.u_grid()));
        const double wlct_lhs = std::sqrt(u_moment(G)) * std::sqrt(t_moment);
        diag["wlct_lhs"] = wlct_lhs;
        diag["wlct_ratio"] = wlct_lhs / rhs;
    }
    return make_result(Check::heisenberg, lhs, rhs, lhs / rhs, slack, std::move(diag));
}

double lieb_bound_constant(double p, double b) { return 2.0 / p * std::pow(2.0 * kPi * std::abs(b), 1.0 - p / 2.0); }

double lieb_printed_constant(double p, double b) {
    const double ea = std::pow(2.0 * kPi, -0.5) * std::pow(std::abs(b), 1.0 / p - 0.5);
    return 2.0 / p * std::pow(ea, p);
}

InequalityResult lieb_check(const TimeFreqMap& V, double f_norm, double phi_norm, double p, double slack) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw InputError("lieb: p must be finite and >= 2");
    const double b = V.params().b();
    if (b == 0.0) throw InputError("lieb: b = 0");
    double sum_p = 0.0, sum_2 = 0.0;
    for (const cplx& z : V.values()) {
        const double m = std::abs(z);
        sum_p += std::pow(m, p);
        sum_2 += m * m;
    }
    const double cell = V.u_grid().step() * V.w_grid().step();
    const double lhs = sum_p * cell;
    const double energy = sum_2 * cell;
    const double norm_pow = std::pow(f_norm * phi_norm, p);
    const double rhs = lieb_bound_constant(p, b) * norm_pow;
    const double printed_rhs = lieb_printed_constant(p, b) * norm_pow;
    const double norm_sq = f_norm * f_norm * phi_norm * phi_norm;
    const double p2_printed = lieb_printed_constant(2.0, b) * norm_sq;
    const double p2_discrepancy = p2_printed > 0.0 ? energy / p2_printed : kInf;

    Diagnostics diag{
        {"p", p},
        {"E_A_printed", std::pow(2.0 * kPi, -0.5) * std::pow(std::abs(b), 1.0 / p - 0.5)},
        {"constant_empirical", lieb_bound_constant(p, b)},
        {"constant_printed", lieb_printed_constant(p, b)},
        {"rhs_printed", printed_rhs},
        {"printed_ratio", lhs > 0.0 ? printed_rhs / lhs : kInf},
        {"lhs_over_printed_rhs", printed_rhs > 0.0 ? lhs / printed_rhs : kInf},
        {"energy_ratio", norm_sq > 0.0 ? energy / norm_sq : kInf},
        {"p2_printed_discrepancy", p2_discrepancy},
        {"p2_discrepancy_flag", p2_discrepancy > 1.0 + slack ? 1.0 : 0.0},
        {"input_consistent", norm_sq > 0.0 && std::abs(energy / norm_sq - 1.0) <= 0.05 ? 1.0 : 0.0},
    };
    const double ratio = lhs > 0.0 ? rhs / lhs : kInf;
    return make_result(Check::lieb, lhs, rhs, ratio, slack, std::move(diag));
}

InequalityResult logarithmic_check(const SampledSignal& f, const SampledSignal& phi, const TimeFreqMap& V,
                                   const OlctParams& A, double slack) {
    require_same_params(V, A);
    const double nf = norm_l2(f), nphi = norm_l2(phi);
    require_nonzero(nf, "signal");
    require_nonzero(nphi, "window");
    const double du = V.u_grid().step();
    double freq_term = 0.0;
    for (std::size_t j = 0; j < V.nw(); ++j) {
        const auto s = V.slice(j);
        for (std::size_t m = 0; m < V.nu(); ++m) freq_term += log_abs(V.u_grid().point(m), du) * std::norm(s[m]);
    }
    freq_term *= du * V.w_grid().step();
    double time_term = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) time_term += log_abs(f.grid().point(k), f.step()) * std::norm(f[k]);
    time_term *= f.step() * nphi * nphi;

    const double M = log_uncertainty_constant();
    const double scale = nf * nf * nphi * nphi;
    const double lhs = freq_term + time_term;
    const double rhs = (M + std::log(std::abs(A.b()))) * scale;
    const double gap = lhs - rhs;
    // The printed form psi(1/2 - ln pi) read literally.
    const double printed_reading = digamma(0.5 - std::log(kPi));
    Diagnostics diag{{"M", M},
                     {"M_literal_reading", printed_reading},
                     {"gap", gap},
                     {"normalized_gap", gap / scale},
                     {"freq_term", freq_term},
                     {"time_term", time_term}};
    return make_result(Check::logarithmic, lhs, rhs, 1.0 + gap / scale, slack, std::move(diag));
}

InequalityResult donoho_stark_check(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A,
                                    const ConcentrationSpec& spec, double slack) {
    require_same_params(V, A);
    if (spec.eps_d < 0.0 || spec.eps_d > 1.0 || spec.eps_s < 0.0 || spec.eps_s > 1.0)
        throw InputError("donoho_stark: eps values must lie in [0, 1]");
    if (spec.eps_d + spec.eps_s >= 1.0) throw InputError("donoho_stark: eps_D + eps_S must be < 1");
    if (spec.time_set.empty() || spec.freq_set.empty()) throw InputError("donoho_stark: D and S must be non-empty");
    require_nonzero(norm_l2(f), "signal");

    const auto [eps_d, eps_s] = measure_concentration(f, V, spec.time_set, spec.freq_set);
    const double measure_d = spec.time_set.snapped_measure(f.grid());
    const double measure_s = spec.freq_set.snapped_measure(V.u_grid());
    const double lhs = measure_d * measure_s;
    const double bound = 2.0 * kPi * std::abs(A.b()) * std::pow(1.0 - spec.eps_d - spec.eps_s, 2);
    Diagnostics diag{{"eps_D", spec.eps_d},          {"eps_S", spec.eps_s},   {"eps_D_measured", eps_d},
                     {"eps_S_measured", eps_s},      {"measure_D", measure_d}, {"measure_S", measure_s},
                     {"bound_if_hypotheses_held", bound}};
    const bool hypotheses = eps_d <= spec.eps_d && eps_s <= spec.eps_s;
    diag["hypothesis_failed"] = hypotheses ? 0.0 : 1.0;
    if (!hypotheses) {
        // Vacuous: the theorem makes no claim.
        return make_result(Check::donoho_stark, lhs, 0.0, kInf, slack, std::move(diag));
    }
    return make_result(Check::donoho_stark, lhs, bound, lhs / bound, slack, std::move(diag));
}

InequalityResult abb_support_check(const SampledSignal& f, const TimeFreqMap& V, double floor) {
    if (!(floor > 0.0)) throw InputError("abb: floor must be positive");
    double mx = 0.0;
    for (const cplx& z : f.samples()) mx = std::max(mx, std::abs(z));
    if (!(mx > floor)) throw InputError("abb: signal is below the floor everywhere");

    // Hull of the nonzero samples; applicable only with exact zeros on both sides.
    std::size_t first = f.size(), last = 0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f[k] != cplx{}) {
            first = std::min(first, k);
            last = k;
        }
    const bool applicable = first > 0 && last + 1 < f.size();
    Diagnostics diag{{"applicable", applicable ? 1.0 : 0.0}, {"floor", floor}};
    if (!applicable) return make_result(Check::abb, 0.0, 0.0, 1.0, 0.0, std::move(diag));

    diag["support_lo"] = f.grid().point(first);
    diag["support_hi"] = f.grid().point(last);
    const std::vector<double> pu = u_marginal(V);
    double total = 0.0;
    for (double x : pu) total += x;
    if (!(total > 0.0)) throw InputError("abb: transform vanishes");
    const Moments mom = moments(V.u_grid(), pu);
    const std::size_t center = nearest_index(V.u_grid(), mom.centroid);
    diag["center"] = V.u_grid().point(center);

    double worst = kInf;
    for (double q : {0.9, 0.99, 0.999}) {
        const Capture cap = centered_capture(pu, center, q);
        const double residual = std::max(0.0, total - cap.captured) / total;
        char key[64];
        std::snprintf(key, sizeof key, "residual_q%g", q);
        diag[key] = residual;
        std::snprintf(key, sizeof key, "half_width_q%g", q);
        diag[key] = static_cast<double>(cap.half_bins) * V.u_grid().step();
        worst = std::min(worst, residual);
    }
    const double rhs = floor * floor;
    InequalityResult r = make_result(Check::abb, worst, rhs, worst / rhs, 0.0, std::move(diag));
    r.holds = worst > rhs;
    return r;
}

double beurling_functional(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A, double w, double T,
                           double U) {
    if (!(T > 0.0) || !(U > 0.0)) throw InputError("beurling: T and U must be positive");
    if (A.b() == 0.0) throw InputError("beurling: b = 0");
    const std::size_t j = V.w_index(w);
    const auto s = V.slice(j);
    const double b = A.b();
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = f.grid().point(k);
        const double ft = std::abs(f[k]);
        if (std::abs(t) > T || ft == 0.0) continue;
        for (std::size_t m = 0; m < V.nu(); ++m) {
            const double u = V.u_grid().point(m);
            const double vm = std::abs(s[m]);
            if (std::abs(u) > U || vm == 0.0) continue;
            acc += std::exp(std::log(ft) + std::log(vm) + std::abs(t * u / b));
        }
    }
    return acc * f.step() * V.u_grid().step();
}

InequalityResult beurling_growth(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A, double T,
                                 double U, double slack) {
    require_same_params(V, A);
    std::size_t best = 0;
    double best_energy = -1.0;
    for (std::size_t j = 0; j < V.nw(); ++j) {
        double e = 0.0;
        for (const cplx& z : V.slice(j)) e += std::norm(z);
        if (e > best_energy) {
            best_energy = e;
            best = j;
        }
    }
    const double w = V.w_grid().point(best);
    const double b1 = beurling_functional(f, V, A, w, T, U);
    const double b2 = beurling_functional(f, V, A, w, 2.0 * T, 2.0 * U);
    Diagnostics diag{{"w", w},       {"T", T},   {"U", U}, {"B_T_U", b1}, {"B_2T_2U", b2},
                     {"growth", b1 > 0.0 ? b2 / b1 : 0.0}, {"TU_over_b", T * U / std::abs(A.b())}};
    const double rhs = 1.5 * b1;
    return make_result(Check::beurling, b2, rhs, rhs > 0.0 ? b2 / rhs : 0.0, slack, std::move(diag));
}

InequalityResult nazarov_ratio(const SampledSignal& f, const SampledSignal& phi, const TimeFreqMap& V,
                               const OlctParams& A, const IntervalSet& T, const IntervalSet& U) {
    require_same_params(V, A);
    if (A.b() == 0.0) throw InputError("nazarov: b = 0");
    const double mt = T.measure(), mu = U.measure();
    if (!(mt > 0.0) || !(mu > 0.0) || !std::isfinite(mt) || !std::isfinite(mu))
        throw InputError("nazarov: |T| and |U| must be finite and positive");
    const double phi_energy = energy_of(phi);
    const IntervalSet Ub = U.scaled(A.b());

    double all_t = 0.0, out_t = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double p = std::norm(f[k]);
        all_t += p;
        if (!T.contains(f.grid().point(k))) out_t += p;
    }
    const std::vector<double> pu = u_marginal(V);
    double out_u = 0.0;
    for (std::size_t m = 0; m < pu.size(); ++m)
        if (!Ub.contains(V.u_grid().point(m))) out_u += pu[m];

    const double E = phi_energy * all_t * f.step();
    const double tail_time = phi_energy * out_t * f.step();
    const double tail_freq = out_u * V.u_grid().step() * V.w_grid().step();
    const double R = tail_time + tail_freq;
    const double area = mt * mu;
    Diagnostics diag{{"E", E}, {"R", R}, {"tail_time", tail_time}, {"tail_freq", tail_freq},
                     {"measure_T", mt}, {"measure_U", mu}};

    if (E == 0.0) {
        diag["C_min"] = 0.0;
        return make_result(Check::nazarov, 0.0, 0.0, 1.0, 0.0, std::move(diag));
    }
    if (R == 0.0) {
        diag["C_min"] = kInf;
        diag["C_min_infinite"] = 1.0;
        return make_result(Check::nazarov, E, kInf, kInf, 0.0, std::move(diag));
    }
    const auto h = [&](double C) { return C * std::exp(C * area) * R; };
    double lo = 0.0, hi = 1.0;
    while (h(hi) < E) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 2000; ++it) {
        if (h(hi) <= E * (1.0 + 1e-7) && hi - lo <= 1e-9 * hi) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (h(mid) < E ? lo : hi) = mid;
    }
    diag["C_min"] = hi;
    diag["C_min_infinite"] = 0.0;
    const double rhs = h(hi);
    return make_result(Check::nazarov, E, rhs, rhs / E, 0.0, std::move(diag));
}

HardyFit hardy_classify(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A, double floor,
                        std::optional<cplx> phi_at_zero) {
    require_same_params(V, A);
    if (A.b() == 0.0) throw InputError("hardy: b = 0");
    if (!(floor > 0.0)) throw InputError("hardy: floor must be positive");

    std::vector<double> mag(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) mag[k] = std::abs(f[k]);
    const EnvelopeFit tf = fit_envelope(f.grid(), mag, floor, "hardy time fit");
    if (tf.residual > kHardyResidualLimit)
        throw InputError("hardy: |f| is not Gaussian-decaying (envelope mismatch " + std::to_string(tf.residual) +
                         "), classification refused");

    // sup over w, on xi = (u - u0) / b.
    std::vector<double> sup(V.nu(), 0.0);
    for (std::size_t j = 0; j < V.nw(); ++j) {
        const auto s = V.slice(j);
        for (std::size_t m = 0; m < V.nu(); ++m) sup[m] = std::max(sup[m], std::abs(s[m]));
    }
    const double b = A.b();
    // Re-express the u grid in xi; for b < 0 the xi axis runs backwards.
    const double xi_start = (V.u_grid().start() - A.u0()) / b;
    const double xi_step = V.u_grid().step() / b;
    std::vector<double> sup_xi = sup;
    double start = xi_start;
    if (xi_step < 0.0) {
        std::reverse(sup_xi.begin(), sup_xi.end());
        start = xi_start + xi_step * static_cast<double>(V.nu() - 1);
    }
    const Grid xi_grid(start, std::abs(xi_step), V.nu());
    // Windows cut off at the grid edge leak a slowly decaying floor into the
    // sup over w, so only the core above kHardyFreqFitLevel is fitted.
    const EnvelopeFit ff =
        fit_envelope(xi_grid, sup_xi, std::max(floor, kHardyFreqFitLevel), "hardy frequency fit", true);

    HardyFit fit;
    fit.alpha = tf.rate;
    fit.beta = ff.rate;
    fit.c_time = tf.peak;
    fit.c_freq = ff.peak;
    fit.product = fit.alpha * fit.beta;
    fit.verdict = hardy_verdict(fit.product);
    fit.fit_residual = tf.residual;
    fit.diagnostics = {{"t_center", tf.center},
                       {"xi_center", ff.center},
                       {"freq_fit_residual", ff.residual},
                       {"extremal_magnitude_mismatch", tf.residual}};
    if (phi_at_zero && std::abs(*phi_at_zero) > 0.0) fit.diagnostics["Q_abs"] = tf.peak * std::abs(*phi_at_zero);
    return fit;
}

LiebSurvey lieb_constant_survey(const Grid& t_grid, const std::vector<double>& ps, const std::vector<double>& bs) {
    LiebSurvey survey;
    std::vector<cplx> g(t_grid.count());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = t_grid.point(k);
        g[k] = std::exp(-0.5 * t * t);
    }
    SampledSignal f(t_grid, g);
    f = f.scaled(1.0 / norm_l2(f));
    const Grid w_grid = default_w_grid(f, f);
    for (double b : bs) {
        const OlctParams A(0.0, b, -1.0 / b, 0.0);
        const TimeFreqMap V = wolct(f, f, A, canonical_u_grid(t_grid, A), w_grid, TransformMethod::fast);
        for (double p : ps) {
            double sum = 0.0;
            for (const cplx& z : V.values()) sum += std::pow(std::abs(z), p);
            const double measured = sum * V.u_grid().step() * V.w_grid().step();
            survey.rows.push_back({p, b, measured, lieb_bound_constant(p, b), lieb_printed_constant(p, b)});
        }
    }
    for (double p : ps) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
        for (const auto& row : survey.rows) {
            if (row.p != p) continue;
            const double x = std::log(std::abs(row.b)), y = std::log(row.measured);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
        const double denom = n * sxx - sx * sx;
        const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
        const double intercept = (sy - slope * sx) / n;
        survey.fits.push_back(
            {p, slope, intercept, 1.0 - p / 2.0, std::log(2.0 / p) + (1.0 - p / 2.0) * std::log(2.0 * kPi)});
    }
    return survey;
}

double SuiteConfig::slack_for(Check c) const {
    const auto it = slack.find(c);
    return it == slack.end() ? default_slack : it->second;
}

bool UncertaintyReport::all_proven_hold() const {
    for (const auto& o : outcomes) {
        if (!is_proven(o.name)) continue;
        if (!o.result || !o.result->holds) return false;
    }
    return true;
}

UncertaintyReport run_suite(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A,
                            const SuiteConfig& config) {
    const double nf = norm_l2(f), nphi = norm_l2(phi);
    if (!(nphi > 0.0)) throw InputError("window must be nonzero");
    if (!(nf > 0.0)) throw InputError("signal must be nonzero");
    if (A.b() == 0.0) throw InputError("suite needs b != 0");

    const Grid u_grid = config.u_grid.value_or(canonical_u_grid(f.grid(), A));
    const Grid w_grid = config.w_grid.value_or(default_w_grid(f, phi));
    const TimeFreqMap V = wolct(f, phi, A, u_grid, w_grid, config.method, config.threads);

    UncertaintyReport report{A, f.grid(), u_grid, w_grid, {}, {}};
    const double norm_sq = nf * nf * nphi * nphi;
    {
        const SampledSignal F = olct(f, A, u_grid, config.method);
        report.identities["olct_parseval_ratio"] = energy_of(F) / (nf * nf);
        report.identities["wolct_energy_ratio"] = V.energy() / norm_sq;
        const TimeFreqMap G = wlct(f, phi, A, u_grid, w_grid, config.method, config.threads);
        report.identities["wlct_energy_ratio"] = G.energy() / norm_sq;
        report.identities["f_norm"] = nf;
        report.identities["phi_norm"] = nphi;
    }

    const Moments tm = moments(f.grid(), power(f));
    const std::vector<double> pu = u_marginal(V);
    const Moments um = moments(u_grid, pu);

    for (Check c : kAllChecks) {
        if (std::find(config.checks.begin(), config.checks.end(), c) == config.checks.end()) continue;
        CheckOutcome out{c, std::nullopt, {}};
        const double slack = config.slack_for(c);
        try {
            switch (c) {
                case Check::heisenberg: out.result = heisenberg_check(f, phi, A, V, slack); break;
                case Check::lieb: out.result = lieb_check(V, nf, nphi, config.lieb_p, slack); break;
                case Check::logarithmic: out.result = logarithmic_check(f, phi, V, A, slack); break;
                case Check::donoho_stark: {
                    ConcentrationSpec spec;
                    spec.time_set = IntervalSet::centered(tm.centroid, 3.0 * tm.spread);
                    spec.eps_s = 0.1;
                    const std::size_t center = nearest_index(u_grid, um.centroid);
                    const Capture cap = centered_capture(pu, center, 1.0 - spec.eps_s * spec.eps_s);
                    const double half = (static_cast<double>(cap.half_bins) + 0.5) * u_grid.step();
                    spec.freq_set = IntervalSet::centered(u_grid.point(center), half);
                    spec.eps_d = measure_concentration(f, V, spec.time_set, spec.freq_set).first;
                    out.result = donoho_stark_check(f, V, A, spec, slack);
                    break;
                }
                case Check::beurling: {
                    const double T = std::max(2.0 * std::sqrt(tm.spread * tm.spread + tm.centroid * tm.centroid),
                                              2.0 * f.step());
                    out.result = beurling_growth(f, V, A, T, 4.0 * std::abs(A.b()) / T, slack);
                    break;
                }
                case Check::nazarov: {
                    const IntervalSet T = IntervalSet::centered(tm.centroid, 2.0 * tm.spread);
                    const IntervalSet U = IntervalSet::centered(um.centroid, 2.0 * um.spread).scaled(1.0 / A.b());
                    out.result = nazarov_ratio(f, phi, V, A, T, U);
                    break;
                }
                case Check::hardy: {
                    const HardyFit fit = hardy_classify(f, V, A, config.floor, phi.interpolate(0.0));
                    Diagnostics diag = fit.diagnostics;
                    diag["alpha"] = fit.alpha;
                    diag["beta"] = fit.beta;
                    diag["c_time"] = fit.c_time;
                    diag["c_freq"] = fit.c_freq;
                    diag["fit_residual"] = fit.fit_residual;
                    diag["verdict"] = static_cast<double>(fit.verdict);
                    diag["product_tol"] = kHardyProductTol;
                    InequalityResult r = make_result(Check::hardy, fit.product, 0.25, 0.25 / fit.product,
                                                     1.0 - 0.25 / (0.25 + kHardyProductTol), std::move(diag));
                    r.holds = fit.verdict != HardyVerdict::forces_zero;
                    out.result = std::move(r);
                    break;
                }
                case Check::abb: out.result = abb_support_check(f, V, config.floor); break;
            }
        } catch (const InputError& e) {
            out.error = e.what();
        }
        report.outcomes.push_back(std::move(out));
    }
    return report;
}

}  // namespace wolct::lab
