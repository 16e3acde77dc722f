#pragma once

#include <complex>
#include <vector>

namespace slipflow {

/// Plan-style 1D DFT: iterative radix-2 when n is a power of two, cached
/// naive transform otherwise. Desk-scale grids make the fallback acceptable.
class Fft {
public:
    explicit Fft(int n);

    int size() const { return n_; }
    void forward(std::complex<double>* data) const;
    /// Inverse transform including the 1/n normalization.
    void inverse(std::complex<double>* data) const;

private:
    int n_;
    bool pow2_;
    std::vector<int> rev_;
    std::vector<std::complex<double>> tw_fwd_, tw_inv_;  // radix-2 stage twiddles or DFT matrix row factors

    void radix2(std::complex<double>* data, bool inv) const;
    void naive(std::complex<double>* data, bool inv) const;
};

}  // namespace slipflow
