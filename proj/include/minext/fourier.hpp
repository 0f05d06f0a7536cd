#pragma once

// Unitary Fourier transform on Z_N:
//
//   xhat(w) = N^{-1/2} sum_t x(t) e(-w t / N),   e(u) = exp(2 pi i u)
//   x(t)    = N^{-1/2} sum_w xhat(w) e(+w t / N)
//
// Direct O(N^2) summation is the reference path. Power-of-two lengths also
// have an iterative radix-2 path, which dft()/idft() pick automatically.

#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "minext/signal.hpp"

namespace minext {

/// e(k/N) for k = 0..N-1, computed from the reduced angle so that every
/// entry carries a single rounding.
class TwiddleTable {
 public:
  explicit TwiddleTable(std::size_t n) : table_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      table_[k] = Complex(std::cos(angle), std::sin(angle));
    }
  }

  std::size_t n() const noexcept { return table_.size(); }

  /// e(k/N) for any integer k (reduced mod N).
  Complex operator()(std::size_t k) const noexcept { return table_[k % table_.size()]; }

 private:
  std::vector<Complex> table_;
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

// sign = -1 for the forward kernel e(-wt/N), +1 for the inverse.
inline void direct_transform(std::span<const Complex> in, std::span<Complex> out, int sign,
                             const TwiddleTable& tw) {
  const std::size_t n = in.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t w = 0; w < n; ++w) {
    Complex acc{};
    std::size_t k = 0;  // w*t mod n, advanced incrementally
    for (std::size_t t = 0; t < n; ++t) {
      const Complex e = tw(k);
      acc += in[t] * (sign < 0 ? std::conj(e) : e);
      k += w;
      if (k >= n) k -= n;
    }
    out[w] = acc * scale;
  }
}

// In-place iterative Cooley-Tukey, unnormalized.
inline void radix2_inplace(std::span<Complex> a, int sign, const TwiddleTable& tw) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex e = tw(j * stride);
        const Complex w = sign < 0 ? std::conj(e) : e;
        const Complex u = a[i + j];
        const Complex v = a[i + j + half] * w;
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

inline std::vector<Complex> transform(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  const TwiddleTable tw(n);
  std::vector<Complex> out(n);
  if (is_power_of_two(n) && n >= 8) {
    std::copy(in.begin(), in.end(), out.begin());
    radix2_inplace(out, sign, tw);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Complex& c : out) c *= scale;
  } else {
    direct_transform(in, out, sign, tw);
  }
  return out;
}

}  // namespace detail

/// Reference transform by direct summation.
inline Spectrum dft_direct(const Signal& x) {
  std::vector<Complex> out(x.n());
  detail::direct_transform(x.values(), out, -1, TwiddleTable(x.n()));
  return Spectrum(std::move(out));
}

inline Signal idft_direct(const Spectrum& s) {
  std::vector<Complex> out(s.n());
  detail::direct_transform(s.values(), out, +1, TwiddleTable(s.n()));
  return Signal(std::move(out));
}

inline Spectrum dft(const Signal& x) { return Spectrum(detail::transform(x.values(), -1)); }

inline Signal idft(const Spectrum& s) { return Signal(detail::transform(s.values(), +1)); }

/// a_norm(xhat) = sum_t |x(t)|, the Wiener algebra norm.
inline double a_norm(const Spectrum& s) { return l1_norm(idft(s)); }

/// The unitary partial Fourier map y -> yhat|_Omega and its adjoint.
/// Its rows are orthonormal, so A A^* = I on C^{|Omega|}.
class PartialFourier {
 public:
  PartialFourier(std::size_t n, const SupportSet& omega)
      : n_(n), omega_(omega.members()), tw_(n),
        scale_(1.0 / std::sqrt(static_cast<double>(n))) {
    if (omega.n() != n) throw std::invalid_argument("frequency set lives on a different N");
    // The full radix-2 transform wins once Omega is more than a few rows.
    use_fft_ = detail::is_power_of_two(n) && n >= 8 &&
               omega_.size() * n > 4 * n * static_cast<std::size_t>(std::bit_width(n));
    if (use_fft_) work_.resize(n);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t rows() const noexcept { return omega_.size(); }
  const std::vector<std::size_t>& omega() const noexcept { return omega_; }

  /// out[k] = yhat(omega_k).
  void apply(std::span<const Complex> y, std::span<Complex> out) const {
    if (use_fft_) {
      std::copy(y.begin(), y.end(), work_.begin());
      detail::radix2_inplace(work_, -1, tw_);
      for (std::size_t k = 0; k < omega_.size(); ++k) out[k] = work_[omega_[k]] * scale_;
      return;
    }
    for (std::size_t k = 0; k < omega_.size(); ++k) {
      const std::size_t w = omega_[k];
      Complex acc{};
      std::size_t idx = 0;
      for (std::size_t t = 0; t < n_; ++t) {
        acc += y[t] * std::conj(tw_(idx));
        idx += w;
        if (idx >= n_) idx -= n_;
      }
      out[k] = acc * scale_;
    }
  }

  /// out = idft of the spectrum equal to b on Omega and zero elsewhere.
  void adjoint(std::span<const Complex> b, std::span<Complex> out) const {
    if (use_fft_) {
      std::fill(work_.begin(), work_.end(), Complex{});
      for (std::size_t k = 0; k < omega_.size(); ++k) work_[omega_[k]] = b[k];
      detail::radix2_inplace(work_, +1, tw_);
      for (std::size_t t = 0; t < n_; ++t) out[t] = work_[t] * scale_;
      return;
    }
    std::fill(out.begin(), out.end(), Complex{});
    for (std::size_t k = 0; k < omega_.size(); ++k) {
      const std::size_t w = omega_[k];
      const Complex bk = b[k] * scale_;
      std::size_t idx = 0;
      for (std::size_t t = 0; t < n_; ++t) {
        out[t] += bk * tw_(idx);
        idx += w;
        if (idx >= n_) idx -= n_;
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> omega_;
  TwiddleTable tw_;
  double scale_;
  bool use_fft_ = false;
  mutable std::vector<Complex> work_;
};

}  // namespace minext
