#include "admmreg/fft.hpp"

#include <cmath>

namespace admmreg {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative Cooley-Tukey, n a power of two. No scaling.
void fft_radix2(std::vector<Cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const Cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Cplx u = a[i + j];
        const Cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein: DFT of arbitrary n as a cyclic convolution of length >= 2n-1.
void fft_bluestein(std::vector<Cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  const std::size_t m = next_power_of_two(2 * n - 1);
  // Chirp w_k = exp(+-i pi k^2 / n); k^2 mod 2n keeps the argument accurate.
  std::vector<Cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = (inverse ? 1.0 : -1.0) * kTwoPi * 0.5 *
                       static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = Cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<Cplx> p(m, Cplx(0.0, 0.0));
  std::vector<Cplx> q(m, Cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) p[k] = a[k] * chirp[k];
  q[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    q[k] = std::conj(chirp[k]);
    q[m - k] = std::conj(chirp[k]);
  }
  fft_radix2(p, false);
  fft_radix2(q, false);
  for (std::size_t k = 0; k < m; ++k) p[k] *= q[k];
  fft_radix2(p, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = p[k] * scale * chirp[k];
}

}  // namespace

void fft(std::vector<Cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (is_power_of_two(n)) {
    fft_radix2(a, inverse);
  } else {
    fft_bluestein(a, inverse);
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (Cplx& v : a) v *= scale;
  }
}

void fft2(std::vector<Cplx>& a, std::size_t rows, std::size_t cols, bool inverse) {
  std::vector<Cplx> line(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) line[c] = a[r * cols + c];
    fft(line, inverse);
    for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = line[c];
  }
  line.assign(rows, Cplx());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) line[r] = a[r * cols + c];
    fft(line, inverse);
    for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = line[r];
  }
}

std::vector<Cplx> to_complex(const std::vector<double>& a) {
  std::vector<Cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = Cplx(a[i], 0.0);
  return out;
}

std::vector<double> real_part(const std::vector<Cplx>& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
  return out;
}

}  // namespace admmreg
