#include "slipflow/fft.hpp"

#include <cmath>

#include "slipflow/common.hpp"

namespace slipflow {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Fft::Fft(int n) : n_(n), pow2_(is_pow2(n)) {
    require(n >= 1, "Fft: size must be positive");
    if (pow2_) {
        rev_.resize(n_);
        int lg = 0;
        while ((1 << lg) < n_) ++lg;
        for (int i = 0; i < n_; ++i) {
            int r = 0;
            for (int b = 0; b < lg; ++b)
                if (i & (1 << b)) r |= 1 << (lg - 1 - b);
            rev_[i] = r;
        }
        tw_fwd_.resize(n_ / 2);
        tw_inv_.resize(n_ / 2);
        for (int i = 0; i < n_ / 2; ++i) {
            double ang = -2.0 * M_PI * i / n_;
            tw_fwd_[i] = {std::cos(ang), std::sin(ang)};
            tw_inv_[i] = {std::cos(ang), -std::sin(ang)};
        }
    } else {
        tw_fwd_.resize(n_);
        tw_inv_.resize(n_);
        for (int i = 0; i < n_; ++i) {
            double ang = -2.0 * M_PI * i / n_;
            tw_fwd_[i] = {std::cos(ang), std::sin(ang)};
            tw_inv_[i] = {std::cos(ang), -std::sin(ang)};
        }
    }
}

void Fft::radix2(std::complex<double>* a, bool inv) const {
    const auto& tw = inv ? tw_inv_ : tw_fwd_;
    for (int i = 0; i < n_; ++i)
        if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (int len = 2; len <= n_; len <<= 1) {
        int step = n_ / len;
        for (int i = 0; i < n_; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                std::complex<double> w = tw[static_cast<size_t>(k) * step];
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void Fft::naive(std::complex<double>* a, bool inv) const {
    const auto& tw = inv ? tw_inv_ : tw_fwd_;
    std::vector<std::complex<double>> out(n_);
    for (int k = 0; k < n_; ++k) {
        std::complex<double> s = 0.0;
        for (int t = 0; t < n_; ++t) s += a[t] * tw[(static_cast<long long>(k) * t) % n_];
        out[k] = s;
    }
    for (int k = 0; k < n_; ++k) a[k] = out[k];
}

void Fft::forward(std::complex<double>* data) const {
    if (pow2_)
        radix2(data, false);
    else
        naive(data, false);
}

void Fft::inverse(std::complex<double>* data) const {
    if (pow2_)
        radix2(data, true);
    else
        naive(data, true);
    for (int i = 0; i < n_; ++i) data[i] /= static_cast<double>(n_);
}

}  // namespace slipflow
