#include "booledyn/expbaker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "booledyn/empirical.hpp"
#include "booledyn/errors.hpp"
#include "booledyn/orbitstats.hpp"
#include "booledyn/parallel.hpp"

namespace booledyn {

StripMap::StripMap(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("StripMap: degree must be >= 1");
  // w P'(w) = (1-w)^n - 1 gives P(w) = sum_{k=1..n} C(n,k) (-1)^k w^k / k.
  coeffs_.assign(static_cast<std::size_t>(degree) + 1, 0.0);
  double binom = 1.0;
  for (int k = 1; k <= degree; ++k) {
    binom = binom * (degree - k + 1) / k;  // C(n,k)
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeffs_[static_cast<std::size_t>(k)] = sign * binom / k;
  }
}

complex StripMap::eval(complex z) const {
  complex w = std::exp(-z);
  complex poly = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) poly = (poly + coeffs_[k]) * w;
  return z - poly;
}

complex StripMap::derivative_from_poly(complex z) const {
  complex w = std::exp(-z);
  complex dpoly = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;)
    dpoly = dpoly * w + static_cast<double>(k) * coeffs_[k];
  return 1.0 + dpoly * w;
}

complex StripMap::inverse_branch(complex w, int bit) const {
  if (degree_ != 1)
    throw std::invalid_argument("inverse_branch: implemented for the degree-1 family only");
  if (bit != 0 && bit != 1) throw std::invalid_argument("inverse_branch: bit must be 0 or 1");
  if (std::abs(w - 1.0) <= 1e-6)
    throw NoConvergence("inverse_branch: w too close to the critical value 1");

  // The two preimages: a principal root near w - e^-w that follows the sign
  // of Im w, and a logarithmic root z = -Log(w - z) on the opposite side.
  // Branch 0 must land in the closed upper half-strip.
  bool want_principal = (bit == 0) ? (std::imag(w) >= 0.0) : (std::imag(w) < 0.0);

  complex z;
  if (want_principal) {
    z = w - std::exp(-w);
  } else {
    z = 0.0;
    for (int i = 0; i < 24; ++i) z = -std::log(w - z);
  }
  for (int i = 0; i < 50; ++i) {
    complex f = z + std::exp(-z) - w;
    if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(w))) break;
    complex fp = 1.0 - std::exp(-z);
    if (std::abs(fp) < 1e-14) throw NoConvergence("inverse_branch: derivative vanished");
    z -= f / fp;
  }
  if (std::abs(z + std::exp(-z) - w) > 1e-12 * std::max(1.0, std::abs(w)))
    throw NoConvergence("inverse_branch: Newton failed near w=(" + std::to_string(w.real()) +
                        "," + std::to_string(w.imag()) + ")");
  return z;
}

long long SymbolCode::block_count() const {
  if (bits.empty()) return 0;
  long long blocks = 1;
  for (std::size_t k = 0; k + 1 < bits.size(); ++k)
    if (bits[k + 1] != bits[k]) ++blocks;
  return blocks;
}

long long SymbolCode::last_block_length() const {
  if (bits.empty()) return 0;
  long long len = 1;
  for (std::size_t k = bits.size() - 1; k-- > 0;) {
    if (bits[k] != bits.back()) break;
    ++len;
  }
  return len;
}

long long SymbolCode::first_block_length() const {
  if (bits.empty()) return 0;
  long long len = 1;
  for (std::size_t k = 1; k < bits.size(); ++k) {
    if (bits[k] != bits.front()) break;
    ++len;
  }
  return len;
}

SymbolCode code_from_boole_orbit(double x0, long long horizon) {
  if (horizon < 1) throw std::invalid_argument("code_from_boole_orbit: horizon must be >= 1");
  GeneralizedBoole boole = GeneralizedBoole::boole();
  if (boole.near_pole(x0))
    throw OrbitTruncated("code_from_boole_orbit: initial point inside the pole guard");
  SymbolCode code;
  code.bits.reserve(static_cast<std::size_t>(horizon));
  std::uint8_t symbol = 0;
  double x = x0;
  for (long long k = 0; k < horizon; ++k) {
    code.bits.push_back(symbol);
    if (k + 1 < horizon) {
      bool flip = (x >= -1.0 && x <= 1.0);
      x = boole.next_point(x);
      if (std::isnan(x))
        throw OrbitTruncated("code_from_boole_orbit: orbit hit a pole guard at step " +
                             std::to_string(k + 1));
      if (flip) symbol = static_cast<std::uint8_t>(1 - symbol);
    }
  }
  return code;
}

BlockStatisticsResult block_statistics(long long samples, long long horizon,
                                       const SeededSampler& sampler, long long m_lo,
                                       long long m_hi) {
  if (samples < 1 || horizon < 2) throw std::invalid_argument("block_statistics: bad sizes");
  GeneralizedBoole boole = GeneralizedBoole::boole();
  const Interval zone(-1.0, 1.0);

  std::vector<double> b_scaled(static_cast<std::size_t>(samples));
  std::vector<double> l_scaled(static_cast<std::size_t>(samples));
  std::vector<long long> first_block(static_cast<std::size_t>(samples));
  std::vector<char> consistent(static_cast<std::size_t>(samples), 1);
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);

  double sqrt_n = std::sqrt(static_cast<double>(horizon));
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(
          sampler, static_cast<long long>(i), resampled_per[i], [&](RandomStream& rs) {
            double x0 = rs.cauchy();
            SymbolCode code;
            try {
              code = code_from_boole_orbit(x0, horizon);
            } catch (const OrbitTruncated&) {
              return false;
            }
            // Occupation of the changing zone over steps 0..n-2, counted
            // directly from the orbit for the exact-consistency check.
            long long occupation = 0;
            double x = x0;
            for (long long k = 0; k + 1 < horizon; ++k) {
              if (zone.contains(x)) ++occupation;
              x = boole.eval(x);
            }
            long long blocks = code.block_count();
            consistent[i] = (blocks - 1 == occupation) ? 1 : 0;
            b_scaled[i] = static_cast<double>(blocks) / sqrt_n;
            l_scaled[i] = 1.0 - static_cast<double>(code.last_block_length()) /
                                    static_cast<double>(horizon);
            first_block[i] = code.first_block_length();
            return true;
          });
    }
  });

  BlockStatisticsResult out;
  for (long long r : resampled_per) out.resampled += r;
  for (char c : consistent) out.consistency_ok = out.consistency_ok && (c != 0);

  // First-block survival fractions on dyadic thresholds.
  std::vector<double> log_m, log_frac;
  for (long long m = m_lo; m <= m_hi; m *= 2) {
    long long count = 0;
    for (long long fb : first_block)
      if (fb >= m) ++count;
    double frac = static_cast<double>(count) / static_cast<double>(samples);
    if (count < 100)
      throw InsufficientSamples("block_statistics: only " + std::to_string(count) +
                                " codes with first block >= " + std::to_string(m));
    out.survival_m.push_back(m);
    out.survival_fraction.push_back(frac);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_frac.push_back(std::log(frac));
  }
  out.h_slope = least_squares_slope(log_m, log_frac);

  // B_n/sqrt(n) law: P(B_n/sqrt(n) <= (2 sqrt 2/pi) t) -> half-normal CDF(t).
  double block_scale = 2.0 * std::sqrt(2.0) / M_PI;
  EmpiricalDistribution b_dist(std::move(b_scaled));
  out.b_ks = b_dist.ks_distance(
      [block_scale](double s) { return half_normal_pi_cdf(s / block_scale); });

  EmpiricalDistribution l_dist(std::move(l_scaled));
  out.l_ks = l_dist.ks_distance(arcsine_cdf);
  return out;
}

HairTrace hair_contraction(const StripMap& map, const SymbolCode& code, const Disk& seed,
                           int fit_burn_in) {
  if (code.bits.empty()) throw std::invalid_argument("hair_contraction: empty code");

  constexpr int kCloud = 16;
  std::vector<complex> cloud(kCloud);
  for (int j = 0; j < kCloud; ++j) {
    double angle = 2.0 * M_PI * j / kCloud;
    cloud[static_cast<std::size_t>(j)] =
        seed.center + seed.radius * complex(std::cos(angle), std::sin(angle));
  }

  auto diameter = [&]() {
    double best = 0.0;
    for (int a = 0; a < kCloud; ++a)
      for (int b = a + 1; b < kCloud; ++b)
        best = std::max(best, std::abs(cloud[a] - cloud[b]));
    return best;
  };
  auto centroid = [&]() {
    complex acc = 0.0;
    for (const complex& z : cloud) acc += z;
    return acc / static_cast<double>(kCloud);
  };

  HairTrace trace;
  double diam0 = diameter();
  trace.diameters.push_back(diam0);
  trace.partial_sums.push_back(diam0);
  trace.centers.push_back(centroid());

  for (std::size_t k = 0; k < code.bits.size(); ++k) {
    int bit = code.bits[k];
    for (complex& z : cloud) z = map.inverse_branch(z, bit);
    double d = diameter();
    trace.diameters.push_back(d);
    trace.partial_sums.push_back(trace.partial_sums.back() + d);
    trace.centers.push_back(centroid());
  }

  // Fit diam_k ~ diam_0 K^(-cbrt(k)) past the burn-in.
  std::vector<double> xs, ys;
  for (std::size_t k = static_cast<std::size_t>(fit_burn_in); k < trace.diameters.size(); ++k) {
    if (!(trace.diameters[k] > 0.0)) continue;
    xs.push_back(std::cbrt(static_cast<double>(k)));
    ys.push_back(std::log(diam0 / trace.diameters[k]));
  }
  if (xs.size() >= 2) {
    trace.fitted_contraction = std::exp(least_squares_slope(xs, ys));
    for (std::size_t k = trace.diameters.size(); k-- > 1;) {
      double bound = diam0 * std::pow(trace.fitted_contraction,
                                      -std::cbrt(static_cast<double>(k)));
      if (trace.diameters[k] > bound) {
        trace.settled_index = static_cast<long long>(k) + 1;
        break;
      }
      trace.settled_index = static_cast<long long>(k);
    }
  }
  return trace;
}

IdentityReport inner_function_identities(int grid_size, double tol) {
  if (grid_size < 10) throw std::invalid_argument("inner_function_identities: grid too small");
  auto g = [](complex z) { return (3.0 * z * z + 1.0) / (3.0 + z * z); };
  auto h = [](complex z) { return z - 1.0 / z; };
  auto moebius = [](complex z) { return complex(0.0, 1.0) * (1.0 + z) / (1.0 - z); };

  IdentityReport report;
  // Spiral grid over the disk, skipping the two M-singular points.
  int rings = std::max(4, static_cast<int>(std::sqrt(grid_size)));
  int spokes = (grid_size + rings - 1) / rings;
  for (int a = 0; a < rings; ++a) {
    double r = 0.92 * (a + 1) / rings;
    for (int b = 0; b < spokes; ++b) {
      double angle = 2.0 * M_PI * (b + 0.5 * (a % 2)) / spokes;
      complex z = std::polar(r, angle);
      if (std::abs(1.0 - z) < 1e-3 || std::abs(moebius(z)) < 1e-3) continue;
      complex lhs = moebius(g(z));
      complex rhs = h(moebius(z));
      double defect = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
      if (defect > tol)
        throw IdentityViolation("inner_function_identities: defect " + std::to_string(defect) +
                                " at z=(" + std::to_string(z.real()) + "," +
                                std::to_string(z.imag()) + ")");
      report.max_defect = std::max(report.max_defect, defect);
      ++report.grid_points;
    }
  }

  report.value_at_zero_defect = std::abs(g(0.0) - complex(1.0 / 3.0));
  report.fixed_point_defect = std::abs(g(1.0) - 1.0);
  double fd_h = 1e-5;
  report.derivative_defect =
      std::abs((g(1.0 + fd_h) - g(1.0 - fd_h)) / (2.0 * fd_h) - 1.0);
  double fd_h2 = 1e-4;
  report.second_derivative_defect =
      std::abs((g(1.0 + fd_h2) - 2.0 * g(1.0) + g(1.0 - fd_h2)) / (fd_h2 * fd_h2));
  // Cubic normal form at the fixed point: g(t) - t ~ c (1-t)^3 with c != 0
  // (the derivative there is 1, so the naive difference g(1) - g(t) is
  // dominated by the linear term).
  double t = 1.0 - 1e-3;
  report.cubic_ratio = std::abs((g(t) - t) / std::pow(1.0 - t, 3.0));
  return report;
}

}  // namespace booledyn
