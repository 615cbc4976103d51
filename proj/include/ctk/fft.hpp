#pragma once

#include <complex>
#include <vector>

namespace ctk {

using Complex = std::complex<double>;

/// Complex DFT of arbitrary length n >= 1 (mixed-radix Cooley-Tukey with a
/// direct transform for prime factors). Inverse includes the 1/n scale.
class FftPlan {
public:
    explicit FftPlan(int n);

    int size() const { return n_; }
    void forward(Complex* data) const;
    void inverse(Complex* data) const;

private:
    void transform(const Complex* in, int stride, Complex* out, int n,
                   int depth, bool inv, Complex* scratch) const;

    int n_;
    std::vector<int> factors_;
    std::vector<Complex> twiddle_;     // exp(-2*pi*i*k/n), k in [0, n)
    mutable std::vector<Complex> scratch_;
};

/// In-place 2-D transforms over a row-major h x w complex grid.
void fft2(std::vector<Complex>& grid, int h, int w);
void ifft2(std::vector<Complex>& grid, int h, int w);

} // namespace ctk
