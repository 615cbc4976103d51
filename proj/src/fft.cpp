#include "ctk/fft.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace ctk {
namespace {

std::vector<int> factorize(int n) {
    std::vector<int> factors;
    for (int p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            factors.push_back(p);
            n /= p;
        }
    if (n > 1) factors.push_back(n);
    return factors;
}

thread_local std::vector<Complex> t_scratch;

} // namespace

FftPlan::FftPlan(int n) : n_(n), factors_(factorize(n)) {
    twiddle_.resize(n);
    const double step = -2.0 * M_PI / n;
    for (int k = 0; k < n; ++k) twiddle_[k] = Complex(std::cos(step * k), std::sin(step * k));
}

// Decimation in time: X[k] = sum_j w_n^(jk) * DFT_m(x[j::p])[k mod m].
// `depth` indexes the ascending factor list; twiddle indices advance
// incrementally (compare-subtract instead of modulo) and the complex
// arithmetic is spelled out to keep the loops branch-free.
void FftPlan::transform(const Complex* in, int stride, Complex* out, int n,
                        int depth, bool inv, Complex* scratch) const {
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const int p = factors_[depth];
    const int root_step = n_ / n; // subsample the shared w_{n_} table for w_n
    const double sign = inv ? -1.0 : 1.0;

    if (p == n) {
        // prime length: direct DFT
        for (int k = 0; k < n; ++k) {
            double acc_re = 0.0, acc_im = 0.0;
            int idx = 0; // (j*k) mod n, advanced by k per step
            for (int j = 0; j < n; ++j) {
                const Complex& w = twiddle_[static_cast<size_t>(idx) * root_step];
                const double wre = w.real(), wim = sign * w.imag();
                const Complex& v = in[static_cast<size_t>(j) * stride];
                acc_re += wre * v.real() - wim * v.imag();
                acc_im += wre * v.imag() + wim * v.real();
                idx += k;
                if (idx >= n) idx -= n;
            }
            out[k] = Complex(acc_re, acc_im);
        }
        return;
    }

    const int m = n / p;
    for (int j = 0; j < p; ++j)
        transform(in + static_cast<size_t>(j) * stride, stride * p,
                  scratch + static_cast<size_t>(j) * m, m, depth + 1, inv, scratch + n);
    for (int k = 0; k < n; ++k) {
        const int r = k % m;
        double acc_re = 0.0, acc_im = 0.0;
        int idx = 0; // (j*k) mod n, advanced by k per j
        for (int j = 0; j < p; ++j) {
            const Complex& w = twiddle_[static_cast<size_t>(idx) * root_step];
            const double wre = w.real(), wim = sign * w.imag();
            const Complex& v = scratch[static_cast<size_t>(j) * m + r];
            acc_re += wre * v.real() - wim * v.imag();
            acc_im += wre * v.imag() + wim * v.real();
            idx += k;
            while (idx >= n) idx -= n;
        }
        out[k] = Complex(acc_re, acc_im);
    }
}

void FftPlan::forward(Complex* data) const {
    if (n_ == 1) return;
    if (t_scratch.size() < static_cast<size_t>(3 * n_)) t_scratch.resize(3 * n_);
    Complex* out = t_scratch.data();
    transform(data, 1, out, n_, 0, false, out + n_);
    std::memcpy(data, out, sizeof(Complex) * n_);
}

void FftPlan::inverse(Complex* data) const {
    if (n_ == 1) return;
    if (t_scratch.size() < static_cast<size_t>(3 * n_)) t_scratch.resize(3 * n_);
    Complex* out = t_scratch.data();
    transform(data, 1, out, n_, 0, true, out + n_);
    const double scale = 1.0 / n_;
    for (int k = 0; k < n_; ++k) data[k] = out[k] * scale;
}

namespace {

std::shared_ptr<const FftPlan> plan_for(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<FftPlan>(n);
    return slot;
}

} // namespace

void fft2(std::vector<Complex>& grid, int h, int w) {
    auto row_plan = plan_for(w);
    auto col_plan = plan_for(h);
    for (int y = 0; y < h; ++y) row_plan->forward(grid.data() + static_cast<size_t>(y) * w);
    std::vector<Complex> col(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = grid[static_cast<size_t>(y) * w + x];
        col_plan->forward(col.data());
        for (int y = 0; y < h; ++y) grid[static_cast<size_t>(y) * w + x] = col[y];
    }
}

void ifft2(std::vector<Complex>& grid, int h, int w) {
    auto row_plan = plan_for(w);
    auto col_plan = plan_for(h);
    for (int y = 0; y < h; ++y) row_plan->inverse(grid.data() + static_cast<size_t>(y) * w);
    std::vector<Complex> col(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = grid[static_cast<size_t>(y) * w + x];
        col_plan->inverse(col.data());
        for (int y = 0; y < h; ++y) grid[static_cast<size_t>(y) * w + x] = col[y];
    }
}

} // namespace ctk
