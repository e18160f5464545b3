#include "sigtext/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace sigtext::fft {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct PlanGuard {
    fftw_plan plan = nullptr;
    ~PlanGuard()
    {
        if (plan != nullptr) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

std::size_t padded_size(std::size_t min_n)
{
    // Smallest 2^a 3^b 5^c >= min_n keeps FFTW on its fast codelets.
    std::size_t best = 1;
    while (best < min_n) {
        best *= 2;
    }
    for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < min_n) {
                v *= 2;
            }
            best = std::min(best, v);
        }
    }
    return best;
}

} // namespace

std::vector<Complex> forward_real(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<Complex> out(n / 2 + 1);
    if (n == 0) {
        return {};
    }
    std::vector<double> in(x.begin(), x.end());
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(g.plan);
    return out;
}

std::vector<double> inverse_real(std::span<const Complex> bins, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 0) {
        return out;
    }
    std::vector<Complex> in(n / 2 + 1);
    std::copy_n(bins.begin(), std::min(bins.size(), in.size()), in.begin());
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                      out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(g.plan);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) {
        v *= scale;
    }
    return out;
}

namespace {
std::vector<Complex> complex_transform(std::span<const Complex> x, int sign)
{
    const std::size_t n = x.size();
    std::vector<Complex> in(x.begin(), x.end());
    std::vector<Complex> out(n);
    if (n == 0) {
        return out;
    }
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                  reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    }
    fftw_execute(g.plan);
    return out;
}
} // namespace

std::vector<Complex> forward(std::span<const Complex> x)
{
    return complex_transform(x, FFTW_FORWARD);
}

std::vector<Complex> inverse(std::span<const Complex> x)
{
    auto out = complex_transform(x, FFTW_BACKWARD);
    const double scale = out.empty() ? 0.0 : 1.0 / static_cast<double>(out.size());
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

std::vector<double> analytic_envelope(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    std::vector<Complex> buf(x.begin(), x.end());
    auto spec = forward(buf);
    // h[k]: 1 at DC (and Nyquist for even n), 2 for positive, 0 for negative bins.
    for (std::size_t k = 1; k < n; ++k) {
        const bool nyquist = (n % 2 == 0) && k == n / 2;
        if (nyquist) {
            continue;
        }
        spec[k] *= (k < (n + 1) / 2) ? 2.0 : 0.0;
    }
    const auto analytic = inverse(spec);
    std::vector<double> env(n);
    std::transform(analytic.begin(), analytic.end(), env.begin(), [](Complex c) { return std::abs(c); });
    return env;
}

std::vector<double> autocorrelation(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    const std::size_t m = padded_size(2 * n);
    std::vector<double> padded(m, 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    auto spec = forward_real(padded);
    for (auto& c : spec) {
        c = Complex(std::norm(c), 0.0);
    }
    auto r = inverse_real(spec, m);
    r.resize(n);
    return r;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    const std::size_t out_n = a.size() + b.size() - 1;
    const std::size_t m = padded_size(out_n);
    std::vector<double> pa(m, 0.0);
    std::vector<double> pb(m, 0.0);
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    auto fa = forward_real(pa);
    const auto fb = forward_real(pb);
    for (std::size_t k = 0; k < fa.size(); ++k) {
        fa[k] *= fb[k];
    }
    auto out = inverse_real(fa, m);
    out.resize(out_n);
    return out;
}

} // namespace sigtext::fft
