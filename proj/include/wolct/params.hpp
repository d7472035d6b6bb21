#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wolct {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised for every precondition or input-format violation. The CLI maps it
/// to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// |ad - bc - 1| must not exceed this.
inline constexpr double kUnimodularTol = 1e-12;

/**
 * Six-parameter OLCT matrix (a, b, c, d | u0, w0) with ad - bc = 1.
 *
 * u0 is the frequency-domain shift and w0 the modulation. The b == 0 case
 * selects the chirp-scaling regime; everything else is the integral regime.
 */
class OlctParams {
public:
    enum class Regime { integral, chirp_scaling };

    /// Identity parameters.
    OlctParams() = default;

    /// Throws InputError when ad - bc deviates from 1 by more than
    /// kUnimodularTol. With `project_d`, d is replaced by (1 + bc)/a first
    /// (only when |a| > 1e-8).
    OlctParams(double a, double b, double c, double d, double u0 = 0.0, double w0 = 0.0,
               bool project_d = false);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }
    double u0() const { return u0_; }
    double w0() const { return w0_; }

    Regime regime() const { return b_ == 0.0 ? Regime::chirp_scaling : Regime::integral; }
    bool has_offsets() const { return u0_ != 0.0 || w0_ != 0.0; }

    /// Same (a, b, c, d) with both offsets cleared.
    OlctParams without_offsets() const;

    friend bool operator==(const OlctParams&, const OlctParams&) = default;

private:
    double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0, u0_ = 0.0, w0_ = 0.0;
};

/// A^{-1} = (d, -b, -c, a, b w0 - d u0, c u0 - a w0).
OlctParams invert_params(const OlctParams& A);

namespace special {
/// FT as the canonical quarter rotation (0, 1, -1, 0).
OlctParams fourier();
/// Rotation by `angle`; rejects multiples of pi (b would vanish).
OlctParams fractional_fourier(double angle);
/// Paraxial propagation over `distance` at `wavelength`: (1, lambda z / 2pi, 0, 1).
OlctParams fresnel(double distance, double wavelength);
OlctParams lct(double a, double b, double c, double d);
OlctParams identity();
}  // namespace special

/// Uniform 1-D sampling lattice: point(k) = start + k * step.
class Grid {
public:
    Grid(double start, double step, std::size_t count);

    double start() const { return start_; }
    double step() const { return step_; }
    std::size_t count() const { return count_; }
    double point(std::size_t k) const { return start_ + static_cast<double>(k) * step_; }
    double last() const { return point(count_ - 1); }

    /// Same count and start/step equal to within `rel_tol` of the step.
    bool matches(const Grid& other, double rel_tol = 1e-9) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double start_;
    double step_;
    std::size_t count_;
};

/// Uniformly sampled complex signal. Samples must all be finite.
class SampledSignal {
public:
    SampledSignal(Grid grid, std::vector<cplx> samples);
    /// All-zero signal on `grid`.
    explicit SampledSignal(Grid grid);

    const Grid& grid() const { return grid_; }
    std::span<const cplx> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const cplx& operator[](std::size_t k) const { return samples_[k]; }
    double step() const { return grid_.step(); }

    /// Linear interpolation with zero extension outside the grid.
    cplx interpolate(double t) const;

    SampledSignal scaled(cplx factor) const;

private:
    Grid grid_;
    std::vector<cplx> samples_;
};

/**
 * Time-frequency map V(u, w) over (u_grid x w_grid) together with the
 * parameters that produced it. Storage is slice-major: all u values for one
 * w are contiguous.
 */
class TimeFreqMap {
public:
    TimeFreqMap(Grid u_grid, Grid w_grid, OlctParams params);
    TimeFreqMap(Grid u_grid, Grid w_grid, OlctParams params, std::vector<cplx> values);

    const Grid& u_grid() const { return u_grid_; }
    const Grid& w_grid() const { return w_grid_; }
    const OlctParams& params() const { return params_; }

    std::size_t nu() const { return u_grid_.count(); }
    std::size_t nw() const { return w_grid_.count(); }

    const cplx& at(std::size_t iu, std::size_t iw) const { return values_[iw * nu() + iu]; }
    cplx& at(std::size_t iu, std::size_t iw) { return values_[iw * nu() + iu]; }

    std::span<const cplx> slice(std::size_t iw) const {
        return std::span<const cplx>(values_).subspan(iw * nu(), nu());
    }
    std::span<cplx> slice(std::size_t iw) { return std::span<cplx>(values_).subspan(iw * nu(), nu()); }

    std::span<const cplx> values() const { return values_; }

    /// Index of `w` on the w grid; throws InputError when off-grid.
    std::size_t w_index(double w) const;

    /// du dw sum |V|^2.
    double energy() const;

private:
    Grid u_grid_;
    Grid w_grid_;
    OlctParams params_;
    std::vector<cplx> values_;
};

/// (dt sum |s_k|^2)^{1/2}, rectangle rule.
double norm_l2(const SampledSignal& s);

/// dt sum f_k conj(g_k); grids must agree.
cplx inner_product(const SampledSignal& f, const SampledSignal& g);

std::string to_string(const OlctParams& A);

}  // namespace wolct
