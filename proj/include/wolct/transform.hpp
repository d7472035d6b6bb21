#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "wolct/dft.hpp"
#include "wolct/params.hpp"

namespace wolct {

/// `direct` evaluates the quadrature sum at arbitrary output points; `fast`
/// needs an output grid with the canonical step and the input length.
enum class TransformMethod { direct, fast };

TransformMethod parse_method(std::string_view name);
std::string_view to_string(TransformMethod m);

/// 1 / sqrt(i 2 pi b), principal branch. Throws on b == 0.
cplx kernel_prefactor(double b);

/// K_A(t, u). |K_A| = 1 / sqrt(2 pi |b|).
cplx kernel(const OlctParams& A, double t, double u);

/// Kernel of the windowed LCT: the OLCT kernel with the offsets ignored.
cplx wlct_kernel(const OlctParams& A, double t, double u);

/**
 * Frequency grid on which the chirp-demodulated OLCT sum is an exact DFT:
 * u_m = u0 + 2 pi |b| (m - N/2) / (N dt), m = 0..N-1.
 *
 * |b| keeps the grid ascending for b < 0; the fast path compensates by
 * running the DFT in the backward direction.
 */
Grid canonical_u_grid(const Grid& t_grid, const OlctParams& A);

/// O(N M) Riemann sum dt sum_k f(t_k) K_A(t_k, u_m). Oracle for the fast path.
SampledSignal olct_direct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid);

/// b == 0 branch: sqrt(d) e^{i (cd/2)(u - u0)^2 + i u w0} f(d (u - u0)), with
/// f linearly interpolated and zero-extended.
SampledSignal olct_chirp_scaling(const SampledSignal& f, const OlctParams& A, const Grid& u_grid);

/// Chirp, DFT, chirp evaluation on the canonical grid.
SampledSignal fast_olct(const SampledSignal& f, const OlctParams& A);
/// Same on any grid with the canonical step and length (the center is free).
SampledSignal fast_olct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid);

/// Dispatches on the regime: chirp scaling for b == 0 (direct only), otherwise
/// direct or fast quadrature.
SampledSignal olct(const SampledSignal& f, const OlctParams& A, const Grid& u_grid, TransformMethod method);

/// Scalar phase of the exact inverse,
/// exp(i[(cd/2) u0^2 - a d u0 w0 + (ab/2) w0^2]).
cplx inverse_phase(const OlctParams& A);

/// The same expression with the last term linear in w0. Only used to show
/// that it does not reproduce the measured phase.
cplx inverse_phase_linear_w0(const OlctParams& A);

/// dt-free sum du sum_m F(u_m) K_{A^{-1}}(u_m, t_j), without the scalar phase.
SampledSignal inverse_olct_unphased(const SampledSignal& F, const OlctParams& A, const Grid& t_grid);

/// f(t) = inverse_phase(A) * du sum_m F(u_m) K_{A^{-1}}(u_m, t).
SampledSignal inverse_olct(const SampledSignal& F, const OlctParams& A, const Grid& t_grid);

/**
 * Measures the scalar phase the exact inverse needs:
 *   <f, O_{A^{-1}}(O_A f)> / ||f||^2
 * with O_{A^{-1}} unphased and O_A evaluated on the canonical grid.
 */
cplx measure_inverse_phase(const SampledSignal& f, const OlctParams& A);

/// Window positions w_j = f.t0 + offset + j dt that land on phi's sample
/// lattice, one per sample of f.
Grid default_w_grid(const SampledSignal& f, const SampledSignal& phi);

/// f(t_k) conj(phi(t_k - w)) on f's grid. `w` must be lattice-aligned.
SampledSignal windowed_product(const SampledSignal& f, const SampledSignal& phi, double w);

/// G(u, w) of the windowed LCT. Offsets in A are ignored by the kernel but
/// kept on the returned map.
TimeFreqMap wlct(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A, const Grid& u_grid,
                 const Grid& w_grid, TransformMethod method, unsigned threads = 1);

/// V(u, w) = O_A[f conj(phi(. - w))](u).
TimeFreqMap wolct(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A, const Grid& u_grid,
                  const Grid& w_grid, TransformMethod method, unsigned threads = 1);

/// Recovers f(t) conj(phi(t - w)) from the w-slice of V.
SampledSignal inverse_wolct_slice(const TimeFreqMap& V, double w, const Grid& t_grid);

/**
 * dt sum_k g_k exp(-i t_k (u_m - u_ref) / b) for every u_m on `u_grid`,
 * computed with one DFT plus pre/post phase ramps. u_grid must have the
 * canonical step 2 pi |b| / (N dt) and N points.
 */
class ChirpDft {
public:
    ChirpDft(const Grid& t_grid, const Grid& u_grid, double b, double u_ref);

    void apply(std::span<const cplx> g, std::span<cplx> out);

private:
    std::vector<cplx> pre_;
    std::vector<cplx> post_;
    std::vector<cplx> work_;
    DftPlan plan_;
};

}  // namespace wolct
