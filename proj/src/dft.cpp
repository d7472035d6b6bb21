#include "wolct/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <utility>

namespace wolct {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

DftPlan::DftPlan(std::size_t n, Direction dir) : n_(n), dir_(dir) {
    if (n == 0) throw InputError("DftPlan: length must be positive");
    buf_ = static_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(buf_);
    {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    }
    if (!plan_) {
        fftw_free(buf_);
        throw std::runtime_error("DftPlan: FFTW failed to create a plan");
    }
}

DftPlan::~DftPlan() { release(); }

DftPlan::DftPlan(DftPlan&& other) noexcept
    : n_(other.n_), dir_(other.dir_), plan_(other.plan_), buf_(other.buf_) {
    other.plan_ = nullptr;
    other.buf_ = nullptr;
}

DftPlan& DftPlan::operator=(DftPlan&& other) noexcept {
    if (this != &other) {
        release();
        n_ = other.n_;
        dir_ = other.dir_;
        plan_ = std::exchange(other.plan_, nullptr);
        buf_ = std::exchange(other.buf_, nullptr);
    }
    return *this;
}

void DftPlan::release() noexcept {
    if (plan_) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    if (buf_) fftw_free(buf_);
    plan_ = nullptr;
    buf_ = nullptr;
}

void DftPlan::execute(std::span<const cplx> in, std::span<cplx> out) {
    if (in.size() != n_ || out.size() != n_) throw InputError("DftPlan: buffer length mismatch");
    std::copy(in.begin(), in.end(), buf_);
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::copy(buf_, buf_ + n_, out.begin());
}

}  // namespace wolct
