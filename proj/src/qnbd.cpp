#include "cqstat/qnbd.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cqstat/errors.hpp"

namespace cqstat {

namespace {

constexpr double kPmfSumTol = 1e-9;
constexpr double kTailTol = 1e-12;
constexpr double kPoissonGuard = 1e-9;

std::vector<double> renormalize_if_needed(std::vector<double> probs) {
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (1.0 - total > kTailTol) {
    for (double& v : probs) v /= total;
  }
  return probs;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidDistributionError("Pmf: empty");
  double total = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0)) throw InvalidDistributionError("Pmf: negative or NaN entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kPmfSumTol) {
    std::ostringstream msg;
    msg << "Pmf: probabilities sum to " << total;
    throw InvalidDistributionError(msg.str());
  }
}

double Pmf::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) m += static_cast<double>(n) * probs_[n];
  return m;
}

double Pmf::second_factorial_moment() const {
  double m = 0.0;
  for (std::size_t n = 2; n < probs_.size(); ++n) {
    const double nn = static_cast<double>(n);
    m += nn * (nn - 1.0) * probs_[n];
  }
  return m;
}

std::optional<double> Pmf::g2() const {
  const double mu = mean();
  if (mu <= 0.0) return std::nullopt;
  return second_factorial_moment() / (mu * mu);
}

std::optional<double> Pmf::mandel_q() const {
  const double mu = mean();
  if (mu <= 0.0) return std::nullopt;
  return (second_factorial_moment() - mu * mu) / mu;
}

std::vector<double> nbd_pmf_raw_sequence(double s, double p, int n_max) {
  if (!(p > 0.0)) throw std::domain_error("nbd: p must be > 0");
  if (s == 0.0 || !std::isfinite(s)) throw std::domain_error("nbd: s must be finite and nonzero");
  if (n_max < 0) throw std::invalid_argument("nbd: n_max must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  out[0] = std::pow(p, s);
  const double q = 1.0 - p;
  for (int n = 0; n < n_max; ++n) {
    out[static_cast<std::size_t>(n) + 1] =
        out[static_cast<std::size_t>(n)] * (s + n) / (n + 1.0) * q;
  }
  return out;
}

double nbd_pmf_raw(double s, double p, int n) {
  if (n < 0) throw std::invalid_argument("nbd: n must be >= 0");
  return nbd_pmf_raw_sequence(s, p, n).back();
}

QnbdParams make_qnbd_params(double s, double p) {
  QnbdParams out;
  out.s = s;
  out.p = p;
  if (s > 0.0 && p > 0.0 && p <= 1.0) {
    out.regime = QnbdRegime::classical;
  } else if (s < 0.0 && p > 1.0 && std::isfinite(s) && std::isfinite(p)) {
    out.regime = QnbdRegime::nonclassical;
    const int cut = static_cast<int>(std::floor(std::abs(s) + 1.0));
    out.n_cut = cut;
    const auto raw = nbd_pmf_raw_sequence(s, p, cut);
    out.normalization = 1.0 / std::accumulate(raw.begin(), raw.end(), 0.0);
  } else {
    out.regime = QnbdRegime::boundary;
  }
  return out;
}

Pmf qnbd_pmf(const QnbdParams& params, int n_max) {
  if (n_max < 0) throw std::invalid_argument("qnbd_pmf: n_max must be >= 0");
  switch (params.regime) {
    case QnbdRegime::classical:
      return Pmf(renormalize_if_needed(nbd_pmf_raw_sequence(params.s, params.p, n_max)));
    case QnbdRegime::nonclassical: {
      std::vector<double> probs(static_cast<std::size_t>(n_max) + 1, 0.0);
      const int last = std::min(n_max, *params.n_cut);
      const auto raw = nbd_pmf_raw_sequence(params.s, params.p, last);
      // The normalization is fixed by the full truncated support; a smaller
      // n_max only drops probability mass, which is renormalized separately.
      for (int n = 0; n <= last; ++n) {
        probs[static_cast<std::size_t>(n)] = params.normalization * raw[static_cast<std::size_t>(n)];
      }
      return Pmf(renormalize_if_needed(std::move(probs)));
    }
    case QnbdRegime::boundary:
      break;
  }
  std::ostringstream msg;
  msg << "qnbd: (s, p) = (" << params.s << ", " << params.p
      << ") is neither classical (s>0, 0<p<=1) nor nonclassical (s<0, p>1)";
  throw std::domain_error(msg.str());
}

Pmf thermal_pmf(double nbar, int n_max) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("thermal_pmf: nbar must be >= 0");
  if (n_max < 0) throw std::invalid_argument("thermal_pmf: n_max must be >= 0");
  std::vector<double> probs(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double ratio = nbar / (1.0 + nbar);
  double v = 1.0 / (1.0 + nbar);
  for (auto& x : probs) {
    x = v;
    v *= ratio;
  }
  return Pmf(renormalize_if_needed(std::move(probs)));
}

Pmf poisson_pmf(double nbar, int n_max) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("poisson_pmf: nbar must be >= 0");
  if (n_max < 0) throw std::invalid_argument("poisson_pmf: n_max must be >= 0");
  std::vector<double> probs(static_cast<std::size_t>(n_max) + 1, 0.0);
  probs[0] = 1.0;
  if (nbar > 0.0) {
    const double log_nbar = std::log(nbar);
    for (int n = 0; n <= n_max; ++n) {
      probs[static_cast<std::size_t>(n)] = std::exp(n * log_nbar - nbar - std::lgamma(n + 1.0));
    }
  }
  return Pmf(renormalize_if_needed(std::move(probs)));
}

QnbdParams params_from_moments(double mean, double second_factorial_moment) {
  if (!(mean > 0.0)) throw std::domain_error("params_from_moments: mean must be > 0");
  if (!(second_factorial_moment >= 0.0)) {
    throw std::domain_error("params_from_moments: second factorial moment must be >= 0");
  }
  const double excess = second_factorial_moment - mean * mean;
  if (std::abs(excess) < kPoissonGuard * mean * mean) {
    throw PoissonLimitError(
        "params_from_moments: Poissonian moments (g2 = 1); use the Poisson limit s -> inf, p -> 1");
  }
  const double s = mean * mean / excess;
  const double p = mean / (second_factorial_moment + mean - mean * mean);
  return make_qnbd_params(s, p);
}

QnbdParams params_from_witnesses(double g2, double q) {
  if (std::abs(g2 - 1.0) < kPoissonGuard) {
    throw PoissonLimitError("params_from_witnesses: g2 = 1 is the Poisson limit");
  }
  if (!(q > -1.0)) throw std::domain_error("params_from_witnesses: Q must be > -1");
  return make_qnbd_params(1.0 / (g2 - 1.0), 1.0 / (1.0 + q));
}

CriticalProbability critical_probability(double s, double p) {
  if (!(s < 0.0 && p > 1.0)) {
    throw std::domain_error("critical_probability: requires s < 0 and p > 1");
  }
  const int n_cr = static_cast<int>(std::floor(std::abs(s))) + 2;
  return {n_cr, nbd_pmf_raw(s, p, n_cr)};
}

ValidityReport validity_check(double g2, double q, double p_cr_threshold) {
  if (!(g2 < 1.0 && q > -1.0 && q < 0.0)) {
    throw std::domain_error("validity_check: requires g2 < 1 and -1 < Q < 0");
  }
  const QnbdParams params = params_from_witnesses(g2, q);
  const CriticalProbability cp = critical_probability(params.s, params.p);
  ValidityReport r{};
  r.s = params.s;
  r.p = params.p;
  r.n_cr = cp.n_cr;
  r.p_cr = cp.p_cr;
  r.abs_p_cr = std::abs(cp.p_cr);
  r.p_cr_ok = r.abs_p_cr < p_cr_threshold;
  r.decreasing_ok = q > -0.5;
  r.mean_n = q / (g2 - 1.0);
  return r;
}

double klyshko_qnbd(double s, int n) {
  const double denom = s + n - 1.0;
  if (std::abs(denom) < 1e-12) throw std::domain_error("klyshko_qnbd: pole at n = 1 - s");
  return (s + n) / denom;
}

double fidelity(std::span<const double> a, std::span<const double> b) {
  auto check = [](std::span<const double> x, const char* name) {
    double total = 0.0;
    for (double v : x) {
      if (!(v >= 0.0)) throw std::invalid_argument(std::string("fidelity: negative entry in ") + name);
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw std::invalid_argument(std::string("fidelity: ") + name + " is not normalized");
    }
  };
  check(a, "first argument");
  check(b, "second argument");
  double overlap = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) overlap += std::sqrt(a[k] * b[k]);
  return std::min(1.0, overlap * overlap);
}

double fidelity(const Pmf& a, const Pmf& b) { return fidelity(a.probs(), b.probs()); }

}  // namespace cqstat
