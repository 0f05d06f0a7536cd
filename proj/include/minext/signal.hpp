#pragma once

// Value types for functions on the cyclic group Z_N and its dual copy:
// time-side signals, frequency-side spectra, index sets, and the norms
// and cyclic geometry used throughout the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace minext {

using Complex = std::complex<double>;

struct TimeDomain {};
struct FrequencyDomain {};

/// A complex sequence indexed by Z_N. The tag keeps time-side and
/// frequency-side values from being mixed up at compile time.
template <class Domain>
class Sequence {
 public:
  Sequence() = default;

  explicit Sequence(std::vector<Complex> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument("sequence on Z_N needs N >= 1");
    }
    for (const Complex& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument("sequence entries must be finite");
      }
    }
  }

  Sequence(std::initializer_list<Complex> values)
      : Sequence(std::vector<Complex>(values)) {}

  static Sequence zeros(std::size_t n) {
    return Sequence(std::vector<Complex>(n, Complex{}));
  }

  static Sequence delta(std::size_t n, std::size_t at, Complex value = 1.0) {
    std::vector<Complex> v(n, Complex{});
    v.at(at) = value;
    return Sequence(std::move(v));
  }

  static Sequence from_real(const std::vector<double>& re) {
    return Sequence(std::vector<Complex>(re.begin(), re.end()));
  }

  std::size_t n() const noexcept { return values_.size(); }
  std::size_t size() const noexcept { return values_.size(); }

  const Complex& operator[](std::size_t i) const { return values_[i]; }
  const Complex& at(std::size_t i) const { return values_.at(i); }

  std::span<const Complex> values() const noexcept { return values_; }
  const std::vector<Complex>& vector() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<Complex> values_;
};

using Signal = Sequence<TimeDomain>;
using Spectrum = Sequence<FrequencyDomain>;

template <class D>
Sequence<D> operator+(const Sequence<D>& a, const Sequence<D>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("length mismatch");
  std::vector<Complex> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = a[i] + b[i];
  return Sequence<D>(std::move(out));
}

template <class D>
Sequence<D> operator-(const Sequence<D>& a, const Sequence<D>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("length mismatch");
  std::vector<Complex> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = a[i] - b[i];
  return Sequence<D>(std::move(out));
}

template <class D>
Sequence<D> operator*(Complex s, const Sequence<D>& a) {
  std::vector<Complex> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = s * a[i];
  return Sequence<D>(std::move(out));
}

/// Sorted set of distinct indices of Z_N. Used for time supports S,
/// sampled frequency sets Omega and frequency bands alike.
class SupportSet {
 public:
  SupportSet() = default;

  SupportSet(std::size_t n, std::vector<std::size_t> members)
      : n_(n), members_(std::move(members)) {
    if (n_ == 0) throw std::invalid_argument("SupportSet needs N >= 1");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw std::invalid_argument("SupportSet members must be distinct");
    }
    if (!members_.empty() && members_.back() >= n_) {
      throw std::invalid_argument("SupportSet member out of range");
    }
  }

  static SupportSet full(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return SupportSet(n, std::move(m));
  }

  static SupportSet empty(std::size_t n) { return SupportSet(n, {}); }

  /// `length` consecutive residues starting at `offset`, wrapping mod N.
  static SupportSet interval(std::size_t n, std::size_t offset, std::size_t length) {
    if (length > n) throw std::invalid_argument("interval longer than N");
    std::vector<std::size_t> m(length);
    for (std::size_t i = 0; i < length; ++i) m[i] = (offset + i) % n;
    return SupportSet(n, std::move(m));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<std::size_t>& members() const noexcept { return members_; }

  bool contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }

  SupportSet complement() const {
    std::vector<std::size_t> m;
    m.reserve(n_ - members_.size());
    for (std::size_t i = 0; i < n_; ++i) {
      if (!contains(i)) m.push_back(i);
    }
    return SupportSet(n_, std::move(m));
  }

  SupportSet translated(std::size_t shift) const {
    std::vector<std::size_t> m(members_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = (members_[i] + shift) % n_;
    return SupportSet(n_, std::move(m));
  }

  /// Closed under i -> -i mod N.
  bool symmetric() const {
    return std::all_of(members_.begin(), members_.end(),
                       [&](std::size_t i) { return contains((n_ - i) % n_); });
  }

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> members_;
};

/// Magnitude at or below which an entry counts as zero.
class ZeroTolerance {
 public:
  static constexpr double kDefault = 1e-10;

  constexpr ZeroTolerance() = default;
  explicit ZeroTolerance(double eps) : eps_(eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("eps_zero must be >= 0");
  }

  constexpr double value() const noexcept { return eps_; }

 private:
  double eps_ = kDefault;
};

template <class D>
std::size_t l0_norm(const Sequence<D>& x, ZeroTolerance tol = {}) {
  return static_cast<std::size_t>(std::count_if(
      x.begin(), x.end(), [&](const Complex& v) { return std::abs(v) > tol.value(); }));
}

template <class D>
SupportSet support(const Sequence<D>& x, ZeroTolerance tol = {}) {
  std::vector<std::size_t> m;
  for (std::size_t i = 0; i < x.n(); ++i) {
    if (std::abs(x[i]) > tol.value()) m.push_back(i);
  }
  return SupportSet(x.n(), std::move(m));
}

inline double l1_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::abs(c);
  return s;
}

inline double l2_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

inline double linf_norm(std::span<const Complex> v) {
  double m = 0.0;
  for (const Complex& c : v) m = std::max(m, std::abs(c));
  return m;
}

inline double l1_norm(const Signal& x) { return l1_norm(x.values()); }
inline double l2_norm(const Signal& x) { return l2_norm(x.values()); }
inline double l2_norm(const Spectrum& s) { return l2_norm(s.values()); }

/// Rescale to unit l2 norm; the zero sequence is returned unchanged.
template <class D>
Sequence<D> normalized(const Sequence<D>& x) {
  const double nrm = l2_norm(x.values());
  if (nrm == 0.0) return x;
  return Complex(1.0 / nrm) * x;
}

template <class D>
double max_abs_diff(const Sequence<D>& a, const Sequence<D>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::size_t cyclic_distance(std::size_t i, std::size_t j, std::size_t n) {
  const std::size_t d = i > j ? i - j : j - i;
  return std::min(d, n - d);
}

/// Minimal pairwise cyclic distance of S; a singleton has step N.
inline std::size_t cyclic_step(const SupportSet& s) {
  if (s.empty()) throw std::invalid_argument("cyclic_step of an empty set");
  const auto& m = s.members();
  if (m.size() == 1) return s.n();
  // Sorted members: the minimum is attained between neighbours, including
  // the wrap-around pair (last, first).
  std::size_t best = s.n() - m.back() + m.front();
  for (std::size_t i = 1; i < m.size(); ++i) best = std::min(best, m[i] - m[i - 1]);
  return best;
}

}  // namespace minext
