#pragma once

// Negative binomial photon distributions and their extension to the
// nonclassical domain (s < 0, p > 1), where the distribution is truncated at
// n <= |s| + 1 and renormalized.

#include <optional>
#include <span>
#include <vector>

namespace cqstat {

/// Non-negative probability vector indexed by photon number, summing to one
/// within 1e-9.
class Pmf {
 public:
  /// Throws InvalidDistributionError if the invariants are violated.
  explicit Pmf(std::vector<double> probs);

  [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }

  [[nodiscard]] double mean() const;
  /// sum n (n-1) P(n)
  [[nodiscard]] double second_factorial_moment() const;
  /// Undefined (std::nullopt) for a point mass at zero.
  [[nodiscard]] std::optional<double> g2() const;
  [[nodiscard]] std::optional<double> mandel_q() const;

 private:
  std::vector<double> probs_;
};

enum class QnbdRegime { classical, nonclassical, boundary };

struct QnbdParams {
  double s = 1.0;
  double p = 0.5;
  double normalization = 1.0;
  std::optional<int> n_cut;  // largest n with P(n) != 0 when truncated
  QnbdRegime regime = QnbdRegime::classical;
};

/// Classifies (s, p) and computes the truncation and normalization.
/// classical: s > 0 and 0 < p <= 1; nonclassical: s < 0 and p > 1;
/// anything else (including the Fock limit Q = -1, where p diverges) is
/// flagged boundary (qnbd_pmf rejects it).
QnbdParams make_qnbd_params(double s, double p);

/// P(0) = p^s, P(n+1) = P(n) (s+n)/(n+1) (1-p). Valid for any real s != 0
/// and p > 0; may be negative for s < 0 beyond the critical index.
double nbd_pmf_raw(double s, double p, int n);

/// Raw values P(0..n_max) in one recursion pass.
std::vector<double> nbd_pmf_raw_sequence(double s, double p, int n_max);

/// Throws std::domain_error for boundary parameters.
Pmf qnbd_pmf(const QnbdParams& params, int n_max);

/// Truncated at n_max; renormalized when the dropped tail exceeds 1e-12.
Pmf thermal_pmf(double nbar, int n_max);
Pmf poisson_pmf(double nbar, int n_max);

/// s = mean^2 / (m2 - mean^2), p = mean / (m2 + mean - mean^2).
/// Throws PoissonLimitError when |g2 - 1| < 1e-9 and std::domain_error for
/// invalid moments.
QnbdParams params_from_moments(double mean, double second_factorial_moment);

/// s = 1 / (g2 - 1), p = 1 / (1 + Q).
QnbdParams params_from_witnesses(double g2, double q);

struct CriticalProbability {
  int n_cr;
  double p_cr;
};

/// n_cr = floor(|s|) + 2, p_cr = raw P(n_cr). Nonclassical parameters only.
CriticalProbability critical_probability(double s, double p);

struct ValidityReport {
  double s;
  double p;
  int n_cr;
  double p_cr;
  double abs_p_cr;
  bool p_cr_ok;        // |p_cr| < threshold
  bool decreasing_ok;  // Q > -0.5  (p < 2)
  double mean_n;       // Q / (g2 - 1)
  [[nodiscard]] bool valid() const { return p_cr_ok && decreasing_ok; }
};

inline constexpr double kDefaultPcrThreshold = 1e-3;

/// Requires g2 < 1 and -1 < q < 0 (std::domain_error otherwise).
ValidityReport validity_check(double g2, double q, double p_cr_threshold = kDefaultPcrThreshold);

/// (s+n)/(s+n-1); throws std::domain_error at the pole n = 1 - s.
double klyshko_qnbd(double s, int n);

/// (sum sqrt(a_n b_n))^2, shorter input padded with zeros.
/// Throws std::invalid_argument if either input is unnormalized beyond 1e-6
/// or has negative entries.
double fidelity(std::span<const double> a, std::span<const double> b);
double fidelity(const Pmf& a, const Pmf& b);

}  // namespace cqstat
