#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cqstat/density_matrix.hpp"

namespace cqstat {

enum class StatisticsClass { antibunched, coherent, bunched, thermal, superbunched };

std::string_view to_string(StatisticsClass c);
/// Inverse of to_string(); throws std::invalid_argument.
StatisticsClass statistics_class_from_string(std::string_view name);

struct CavityMoments {
  double mean_n = 0.0;                   // <a^dag a>
  double second_factorial_moment = 0.0;  // <a^dag a^dag a a>
};

struct PhotonStatistics {
  double mean_n = 0.0;
  double second_factorial_moment = 0.0;
  // Undefined when mean_n vanishes.
  std::optional<double> g2;
  std::optional<double> q;
  std::optional<StatisticsClass> classification;
  std::vector<double> pmf;
  // klyshko[k] is kappa_{k+1}; empty entries where P(n) is below the floor.
  std::vector<std::optional<double>> klyshko;
  // Indexed by DickeState; only for two-atom states.
  std::optional<std::array<double, 4>> dicke_populations;
};

inline constexpr double kMeanFloor = 1e-12;
inline constexpr double kKlyshkoFloor = 1e-12;
inline constexpr double kPmfClipTolerance = 1e-10;
inline constexpr double kClassificationTol = 0.01;

/// Partial trace over the atoms. The result has n_atoms = 0.
DensityMatrix reduced_cavity_state(const DensityMatrix& rho);

/// Moments from Tr(rho_c a^dag a) and Tr(rho_c a^dag a^dag a a).
CavityMoments cavity_moments(const DensityMatrix& rho);

/// <a^dag a^dag a a> / <a^dag a>^2. Throws UndefinedStatisticsError when the
/// mean photon number is below kMeanFloor.
double g2(const DensityMatrix& rho);

/// (<a^dag a^dag a a> - <a^dag a>^2) / <a^dag a>. Same error as g2().
double mandel_q(const DensityMatrix& rho);

/// Diagonal of the reduced cavity state. Entries in [-1e-10, 0) are clipped to
/// zero and the result renormalized; more negative values raise
/// InvalidDistributionError.
std::vector<double> photon_distribution(const DensityMatrix& rho);

/// kappa_n = (n+1) P(n-1) P(n+1) / (n P(n)^2) for n = 1 .. size-2.
/// Requires at least three entries (std::invalid_argument).
std::vector<std::optional<double>> klyshko(std::span<const double> pmf,
                                           double floor = kKlyshkoFloor);

/// coherent / thermal inside the +-tol bands, otherwise by strict inequality.
StatisticsClass classify_statistics(double g2, double tol = kClassificationTol);

/// Populations of |gg>, |+>, |->, |ee>. Requires a two-atom state.
std::array<double, 4> atomic_populations(const DensityMatrix& rho);

PhotonStatistics compute_statistics(const DensityMatrix& rho, double class_tol = kClassificationTol);

}  // namespace cqstat
