#include "ctk/dfb.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "ctk/fft.hpp"

namespace ctk {
namespace {

bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

// Normalized frequency in cycles/sample for bin i of an n-point DFT,
// standard fftfreq convention (Nyquist maps to -1/2).
double bin_freq(int i, int n) {
    return i <= (n - 1) / 2 ? static_cast<double>(i) / n : static_cast<double>(i - n) / n;
}

// Half-plane angle parameter in [0,1): angle from the vertical-frequency
// axis, folded modulo pi.
double fold_angle(double fy, double fx) {
    double t = std::atan2(fx, fy) / M_PI; // (-1, 1]
    t -= std::floor(t);                   // wrap to [0, 1)
    return t >= 1.0 ? 0.0 : t;
}

void check_band(const ImageTensor& band, const WedgeBank& bank) {
    if (band.channels() != 1) throw ShapeError("dfb expects a single-channel band");
    if (band.height() != bank.height || band.width() != bank.width)
        throw ShapeError("band dims do not match wedge bank dims");
}

} // namespace

WedgeBank build_wedge_bank(int h, int w, int num_directions, double transition_frac) {
    if (!is_pow2(num_directions) || num_directions < 2 || num_directions > 64)
        throw ConfigError("num_directions must be a power of two in [2, 64]");
    if (h < 2 || w < 2) throw ConfigError("wedge bank needs dims of at least 2");
    if (!(transition_frac > 0.0) || transition_frac > 0.5)
        throw ConfigError("transition_frac must be in (0, 0.5]");

    WedgeBank bank;
    bank.num_directions = num_directions;
    bank.height = h;
    bank.width = w;
    bank.transition_frac = transition_frac;
    bank.windows.assign(num_directions, std::vector<double>(static_cast<size_t>(h) * w, -1.0));

    const int d_count = num_directions;
    const double half_width = 0.5 / d_count;              // wedge half-width in t units
    const double tau = transition_frac * half_width;      // crossfade half-width
    const double dc_value = 1.0 / std::sqrt(static_cast<double>(d_count));

    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const size_t idx = static_cast<size_t>(i) * w + j;
            if (bank.windows[0][idx] >= 0.0) continue; // already filled via partner
            const size_t partner = static_cast<size_t>((h - i) % h) * w + (w - j) % w;

            if (i == 0 && j == 0) {
                for (int d = 0; d < d_count; ++d) bank.windows[d][idx] = dc_value;
                continue;
            }
            const double t = fold_angle(bin_freq(i, h), bin_freq(j, w));
            for (int d = 0; d < d_count; ++d) {
                double delta = std::abs(t - static_cast<double>(d) / d_count);
                if (delta > 0.5) delta = 1.0 - delta; // cyclic distance, period 1
                double win;
                if (delta <= half_width - tau) {
                    win = 1.0;
                } else if (delta >= half_width + tau) {
                    win = 0.0;
                } else {
                    win = std::cos((delta - (half_width - tau)) / (2.0 * tau) * (M_PI / 2.0));
                }
                bank.windows[d][idx] = win;
                bank.windows[d][partner] = win; // exact conjugate symmetry
            }
        }
    }
    return bank;
}

std::shared_ptr<const WedgeBank> shared_wedge_bank(int h, int w, int num_directions,
                                                   double transition_frac) {
    using Key = std::tuple<int, int, int, double>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const WedgeBank>> cache;
    const Key key{h, w, num_directions, transition_frac};
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (!slot)
        slot = std::make_shared<const WedgeBank>(build_wedge_bank(h, w, num_directions, transition_frac));
    return slot;
}

std::vector<ImageTensor> dfb_analyze(const ImageTensor& band, const WedgeBank& bank) {
    check_band(band, bank);
    const int h = bank.height, w = bank.width;
    const size_t n = static_cast<size_t>(h) * w;

    std::vector<Complex> spectrum(n);
    for (size_t i = 0; i < n; ++i) spectrum[i] = Complex(band.data()[i], 0.0);
    fft2(spectrum, h, w);

    std::vector<ImageTensor> subbands;
    subbands.reserve(bank.num_directions);
    std::vector<Complex> windowed(n);
    for (int d = 0; d < bank.num_directions; ++d) {
        const auto& win = bank.windows[d];
        for (size_t i = 0; i < n; ++i) windowed[i] = spectrum[i] * win[i];
        ifft2(windowed, h, w);
        ImageTensor sub(h, w, 1);
        for (size_t i = 0; i < n; ++i) sub.data()[i] = windowed[i].real();
        subbands.push_back(std::move(sub));
    }
    return subbands;
}

ImageTensor dfb_synthesize(const std::vector<ImageTensor>& subbands, const WedgeBank& bank) {
    if (static_cast<int>(subbands.size()) != bank.num_directions)
        throw ShapeError("subband count does not match bank directions");
    const int h = bank.height, w = bank.width;
    const size_t n = static_cast<size_t>(h) * w;

    std::vector<Complex> acc(n, Complex(0.0, 0.0));
    std::vector<Complex> spectrum(n);
    for (int d = 0; d < bank.num_directions; ++d) {
        check_band(subbands[d], bank);
        for (size_t i = 0; i < n; ++i) spectrum[i] = Complex(subbands[d].data()[i], 0.0);
        fft2(spectrum, h, w);
        const auto& win = bank.windows[d];
        for (size_t i = 0; i < n; ++i) acc[i] += spectrum[i] * win[i];
    }
    ifft2(acc, h, w);
    ImageTensor out(h, w, 1);
    for (size_t i = 0; i < n; ++i) out.data()[i] = acc[i].real();
    return out;
}

} // namespace ctk
