#pragma once

#include <cstddef>
#include <span>

#include "wolct/params.hpp"

namespace wolct {

/**
 * Unnormalized complex DFT of fixed length backed by FFTW.
 *
 *   forward:  X_m = sum_k x_k exp(-2 pi i k m / N)
 *   backward: X_m = sum_k x_k exp(+2 pi i k m / N)
 *
 * Each instance owns its plan and aligned work buffers, so one instance per
 * thread is safe. Plans are built with FFTW_ESTIMATE, which makes the
 * arithmetic (and therefore every output bit) a function of N and direction
 * only.
 */
class DftPlan {
public:
    enum class Direction { forward, backward };

    DftPlan(std::size_t n, Direction dir);
    ~DftPlan();

    DftPlan(const DftPlan&) = delete;
    DftPlan& operator=(const DftPlan&) = delete;
    DftPlan(DftPlan&& other) noexcept;
    DftPlan& operator=(DftPlan&& other) noexcept;

    std::size_t size() const { return n_; }
    Direction direction() const { return dir_; }

    /// in.size() == out.size() == size(); in and out may alias.
    void execute(std::span<const cplx> in, std::span<cplx> out);

private:
    void release() noexcept;

    std::size_t n_ = 0;
    Direction dir_ = Direction::forward;
    void* plan_ = nullptr;
    cplx* buf_ = nullptr;
};

}  // namespace wolct
