#ifndef ADMMREG_FFT_HPP_
#define ADMMREG_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace admmreg {

using Cplx = std::complex<double>;

//! In-place DFT of arbitrary length (radix-2 when n is a power of two,
//! Bluestein otherwise). The inverse includes the 1/n factor.
void fft(std::vector<Cplx>& a, bool inverse);

//! Row-major 2D DFT, rows*cols entries.
void fft2(std::vector<Cplx>& a, std::size_t rows, std::size_t cols, bool inverse);

std::vector<Cplx> to_complex(const std::vector<double>& a);
std::vector<double> real_part(const std::vector<Cplx>& a);

}  // namespace admmreg

#endif  // ADMMREG_FFT_HPP_
