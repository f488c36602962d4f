#include "support.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace testsup {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = d * (sn + 0.12 + 0.11 / sn);
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

double chi2_pvalue(double stat, int dof) {
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

// Port of Hartigan & Hartigan's dip algorithm (AS 217): alternate between the
// greatest convex minorant and least concave majorant of the empirical CDF,
// shrinking [lo, hi] to the modal interval until the deviation stabilizes.
// Indices are 1-based to mirror the published recurrences.
double dip_statistic(std::vector<double> sample) {
  const long n = static_cast<long>(sample.size());
  if (n < 2) return 0.0;
  std::sort(sample.begin(), sample.end());
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (long i = 1; i <= n; ++i) x[static_cast<std::size_t>(i)] = sample[static_cast<std::size_t>(i - 1)];
  if (x[1] == x[static_cast<std::size_t>(n)]) return 0.0;

  std::vector<long> mn(static_cast<std::size_t>(n) + 1), mj(static_cast<std::size_t>(n) + 1);
  std::vector<long> gcm(static_cast<std::size_t>(n) + 2), lcm(static_cast<std::size_t>(n) + 2);

  // Convex-minorant predecessor chain.
  mn[1] = 1;
  for (long j = 2; j <= n; ++j) {
    mn[static_cast<std::size_t>(j)] = j - 1;
    for (;;) {
      const long mnj = mn[static_cast<std::size_t>(j)];
      const long mnmnj = mn[static_cast<std::size_t>(mnj)];
      if (mnj == 1 ||
          (x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(mnj)]) * (mnj - mnmnj) <
              (x[static_cast<std::size_t>(mnj)] - x[static_cast<std::size_t>(mnmnj)]) * (j - mnj)) {
        break;
      }
      mn[static_cast<std::size_t>(j)] = mnmnj;
    }
  }
  // Concave-majorant successor chain.
  mj[static_cast<std::size_t>(n)] = n;
  for (long k = n - 1; k >= 1; --k) {
    mj[static_cast<std::size_t>(k)] = k + 1;
    for (;;) {
      const long mjk = mj[static_cast<std::size_t>(k)];
      const long mjmjk = mj[static_cast<std::size_t>(mjk)];
      if (mjk == n ||
          (x[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(mjk)]) * (mjk - mjmjk) <
              (x[static_cast<std::size_t>(mjk)] - x[static_cast<std::size_t>(mjmjk)]) * (k - mjk)) {
        break;
      }
      mj[static_cast<std::size_t>(k)] = mjmjk;
    }
  }

  long lo = 1, hi = n;
  double dip = 1.0;  // in units of 1/n; divided by 2n at the end
  for (;;) {
    long l_gcm = 1;
    gcm[1] = hi;
    while (gcm[static_cast<std::size_t>(l_gcm)] > lo) {
      gcm[static_cast<std::size_t>(l_gcm + 1)] = mn[static_cast<std::size_t>(gcm[static_cast<std::size_t>(l_gcm)])];
      ++l_gcm;
    }
    long ig = l_gcm;
    long ix = l_gcm - 1;

    long l_lcm = 1;
    lcm[1] = lo;
    while (lcm[static_cast<std::size_t>(l_lcm)] < hi) {
      lcm[static_cast<std::size_t>(l_lcm + 1)] = mj[static_cast<std::size_t>(lcm[static_cast<std::size_t>(l_lcm)])];
      ++l_lcm;
    }
    long ih = l_lcm;
    long iv = 2;

    double d = 0.0;
    if (l_gcm != 2 || l_lcm != 2) {
      do {
        const long gcm_ix = gcm[static_cast<std::size_t>(ix)];
        const long lcm_iv = lcm[static_cast<std::size_t>(iv)];
        double dx;
        if (gcm_ix > lcm_iv) {
          const long gcm_i1 = gcm[static_cast<std::size_t>(ix + 1)];
          dx = (lcm_iv - gcm_i1 + 1) -
               (x[static_cast<std::size_t>(lcm_iv)] - x[static_cast<std::size_t>(gcm_i1)]) *
                   (gcm_ix - gcm_i1) /
                   (x[static_cast<std::size_t>(gcm_ix)] - x[static_cast<std::size_t>(gcm_i1)]);
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const long lcm_i1 = lcm[static_cast<std::size_t>(iv - 1)];
          dx = (x[static_cast<std::size_t>(gcm_ix)] - x[static_cast<std::size_t>(lcm_i1)]) *
                   (lcm_iv - lcm_i1) /
                   (x[static_cast<std::size_t>(lcm_iv)] - x[static_cast<std::size_t>(lcm_i1)]) -
               (gcm_ix - lcm_i1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (gcm[static_cast<std::size_t>(ix)] != lcm[static_cast<std::size_t>(iv)]);
    } else {
      d = 1.0;
    }
    if (d < dip) break;

    double dip_l = 0.0;
    {
      long j_u = gcm[static_cast<std::size_t>(ig)];
      for (long j = ig; j < l_gcm; ++j) {
        double max_t = 1.0;
        const long j_l = gcm[static_cast<std::size_t>(j + 1)];
        if (j_u - j_l > 1 && x[static_cast<std::size_t>(j_u)] != x[static_cast<std::size_t>(j_l)]) {
          const double c =
              (j_u - j_l) / (x[static_cast<std::size_t>(j_u)] - x[static_cast<std::size_t>(j_l)]);
          for (long jj = j_l; jj <= j_u; ++jj) {
            const double t = (jj - j_l + 1) -
                             (x[static_cast<std::size_t>(jj)] - x[static_cast<std::size_t>(j_l)]) * c;
            max_t = std::max(max_t, t);
          }
        }
        dip_l = std::max(dip_l, max_t);
        j_u = j_l;
      }
    }
    double dip_u = 0.0;
    {
      long j_l = lcm[static_cast<std::size_t>(ih)];
      for (long j = ih; j < l_lcm; ++j) {
        double max_t = 1.0;
        const long j_u = lcm[static_cast<std::size_t>(j + 1)];
        if (j_u - j_l > 1 && x[static_cast<std::size_t>(j_u)] != x[static_cast<std::size_t>(j_l)]) {
          const double c =
              (j_u - j_l) / (x[static_cast<std::size_t>(j_u)] - x[static_cast<std::size_t>(j_l)]);
          for (long jj = j_l; jj <= j_u; ++jj) {
            const double t =
                (x[static_cast<std::size_t>(jj)] - x[static_cast<std::size_t>(j_l)]) * c -
                (jj - j_l - 1);
            max_t = std::max(max_t, t);
          }
        }
        dip_u = std::max(dip_u, max_t);
        j_l = j_u;
      }
    }
    dip = std::max(dip, std::max(dip_l, dip_u));

    if (lo == gcm[static_cast<std::size_t>(ig)] && hi == lcm[static_cast<std::size_t>(ih)]) break;
    lo = gcm[static_cast<std::size_t>(ig)];
    hi = lcm[static_cast<std::size_t>(ih)];
  }
  return dip / (2.0 * static_cast<double>(n));
}

double sample_skewness(const std::vector<double>& sample) {
  const double n = static_cast<double>(sample.size());
  if (n < 3) throw std::invalid_argument("sample_skewness: need at least 3 points");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : sample) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

}  // namespace testsup
