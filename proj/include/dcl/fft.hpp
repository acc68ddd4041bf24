#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dcl::fft {

using cplx = std::complex<double>;

/// Unnormalized DFT, out[n] = sum_m exp(-2 pi i n m / N) in[m].
void forward(std::span<const cplx> in, std::span<cplx> out);

/// Unnormalized inverse DFT, out[m] = sum_n exp(+2 pi i n m / N) in[n].
void backward(std::span<const cplx> in, std::span<cplx> out);

/// Smallest size >= n of the form 2^a 3^b 5^c.
std::size_t good_size(std::size_t n);

}  // namespace dcl::fft
