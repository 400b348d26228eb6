#include "archicop/rank.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "archicop/errors.hpp"
#include "archicop/parallel.hpp"

namespace archicop {

DataMatrix pobs(const Matrix& x) {
  const std::size_t n = x.rows();
  if (n < 2) throw ArgumentError("pobs: need at least two observations");
  DataMatrix out(n, x.cols());
  std::vector<std::size_t> idx(n);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x(a, j) < x(b, j); });
    std::size_t i = 0;
    while (i < n) {
      std::size_t k = i + 1;
      while (k < n && x(idx[k], j) == x(idx[i], j)) ++k;
      // positions i..k-1 share the average of ranks i+1..k
      const double r = 0.5 * static_cast<double>(i + 1 + k);
      for (std::size_t m = i; m < k; ++m) out(idx[m], j) = r / static_cast<double>(n + 1);
      i = k;
    }
  }
  return out;
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("sample_tau: columns differ in length");
  if (x.size() < 2) throw ArgumentError("sample_tau: need at least two observations");
}

// pairs tied within runs of equal values of a sorted sequence
template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq eq) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t k = i + 1;
    while (k < n && eq(i, k)) ++k;
    const std::uint64_t r = k - i;
    total += r * (r - 1) / 2;
    i = k;
  }
  return total;
}

std::uint64_t merge_count(std::vector<double>& a, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      swaps += mid - i;
      buf[k++] = a[j++];
    } else {
      buf[k++] = a[i++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
  return swaps;
}

}  // namespace

double sample_tau(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::uint64_t n1 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[idx[a]] == x[idx[b]]; });
  const std::uint64_t n3 = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[idx[a]] == x[idx[b]] && y[idx[a]] == y[idx[b]];
  });
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_count(ys, buf, 0, n);
  const std::uint64_t n2 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const auto diff = static_cast<std::int64_t>(n0) - static_cast<std::int64_t>(n1) -
                    static_cast<std::int64_t>(n2) + static_cast<std::int64_t>(n3) -
                    2 * static_cast<std::int64_t>(swaps);
  return static_cast<double>(diff) / static_cast<double>(n0);
}

double sample_tau_naive(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::int64_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double p = (x[i] - x[k]) * (y[i] - y[k]);
      s += (p > 0) - (p < 0);
    }
  }
  return static_cast<double>(s) / (static_cast<double>(n) * (n - 1) / 2.0);
}

std::vector<double> pairwise_tau(const Matrix& x, Exec exec) {
  const std::size_t d = x.cols();
  if (d < 2) throw ArgumentError("pairwise_tau: need at least two columns");
  std::vector<std::vector<double>> cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = x.column(j);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) pairs.emplace_back(a, b);
  std::vector<double> out(pairs.size());
  for_each_index(pairs.size(), exec,
                 [&](std::size_t p) { out[p] = sample_tau(cols[pairs[p].first], cols[pairs[p].second]); });
  return out;
}

}  // namespace archicop
