#include "cqstat/photon_statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cqstat/errors.hpp"
#include "cqstat/system_model.hpp"

namespace cqstat {

std::string_view to_string(StatisticsClass c) {
  switch (c) {
    case StatisticsClass::antibunched: return "antibunched";
    case StatisticsClass::coherent: return "coherent";
    case StatisticsClass::bunched: return "bunched";
    case StatisticsClass::thermal: return "thermal";
    case StatisticsClass::superbunched: return "superbunched";
  }
  return "?";
}

StatisticsClass statistics_class_from_string(std::string_view name) {
  for (auto c : {StatisticsClass::antibunched, StatisticsClass::coherent, StatisticsClass::bunched,
                 StatisticsClass::thermal, StatisticsClass::superbunched}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown statistics class '" + std::string(name) + "'");
}

DensityMatrix reduced_cavity_state(const DensityMatrix& rho) {
  const Index nc = rho.cavity_dim();
  Matrix out = Matrix::Zero(nc, nc);
  for (Index a = 0; a < rho.atom_dim(); ++a) {
    out += rho.matrix().block(a * nc, a * nc, nc, nc);
  }
  return DensityMatrix(std::move(out), 0, rho.n_max());
}

CavityMoments cavity_moments(const DensityMatrix& rho) {
  const DensityMatrix rc = rho.n_atoms() == 0 ? rho : reduced_cavity_state(rho);
  const Matrix a = destroy(rc.n_max());
  const Matrix ad = a.adjoint();
  CavityMoments m;
  m.mean_n = rc.expectation(ad * a).real();
  m.second_factorial_moment = rc.expectation(ad * ad * a * a).real();
  return m;
}

namespace {

CavityMoments defined_moments(const DensityMatrix& rho) {
  const CavityMoments m = cavity_moments(rho);
  if (!(m.mean_n >= kMeanFloor)) {
    throw UndefinedStatisticsError("photon statistics undefined: mean photon number " +
                                   std::to_string(m.mean_n) + " is below 1e-12");
  }
  return m;
}

}  // namespace

double g2(const DensityMatrix& rho) {
  const CavityMoments m = defined_moments(rho);
  return m.second_factorial_moment / (m.mean_n * m.mean_n);
}

double mandel_q(const DensityMatrix& rho) {
  const CavityMoments m = defined_moments(rho);
  return (m.second_factorial_moment - m.mean_n * m.mean_n) / m.mean_n;
}

std::vector<double> photon_distribution(const DensityMatrix& rho) {
  const DensityMatrix rc = rho.n_atoms() == 0 ? rho : reduced_cavity_state(rho);
  std::vector<double> pmf(static_cast<std::size_t>(rc.cavity_dim()));
  double total = 0.0;
  for (std::size_t n = 0; n < pmf.size(); ++n) {
    double v = rc.matrix()(static_cast<Index>(n), static_cast<Index>(n)).real();
    if (v < 0.0) {
      if (v < -kPmfClipTolerance) {
        throw InvalidDistributionError("negative photon probability p(" + std::to_string(n) +
                                       ") = " + std::to_string(v));
      }
      v = 0.0;
    }
    pmf[n] = v;
    total += v;
  }
  if (!(total > 0.0)) throw InvalidDistributionError("photon distribution has zero mass");
  for (double& v : pmf) v /= total;
  return pmf;
}

std::vector<std::optional<double>> klyshko(std::span<const double> pmf, double floor) {
  if (pmf.size() < 3) throw std::invalid_argument("klyshko: need at least three probabilities");
  std::vector<std::optional<double>> out;
  out.reserve(pmf.size() - 2);
  for (std::size_t n = 1; n + 1 < pmf.size(); ++n) {
    if (pmf[n] > floor) {
      const double nn = static_cast<double>(n);
      out.emplace_back((nn + 1.0) * pmf[n - 1] * pmf[n + 1] / (nn * pmf[n] * pmf[n]));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

StatisticsClass classify_statistics(double g2, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_statistics: tol must be > 0");
  if (std::abs(g2 - 1.0) <= tol) return StatisticsClass::coherent;
  if (std::abs(g2 - 2.0) <= tol) return StatisticsClass::thermal;
  if (g2 < 1.0) return StatisticsClass::antibunched;
  if (g2 < 2.0) return StatisticsClass::bunched;
  return StatisticsClass::superbunched;
}

std::array<double, 4> atomic_populations(const DensityMatrix& rho) {
  if (rho.n_atoms() != 2) throw std::invalid_argument("atomic_populations: needs a two-atom state");
  const auto projectors = dicke_projectors(rho.n_max());
  std::array<double, 4> pops{};
  for (std::size_t k = 0; k < 4; ++k) pops[k] = rho.expectation(projectors[k]).real();
  return pops;
}

PhotonStatistics compute_statistics(const DensityMatrix& rho, double class_tol) {
  PhotonStatistics s;
  const CavityMoments m = cavity_moments(rho);
  s.mean_n = m.mean_n;
  s.second_factorial_moment = m.second_factorial_moment;
  if (m.mean_n >= kMeanFloor) {
    s.g2 = g2(rho);
    s.q = mandel_q(rho);
    s.classification = classify_statistics(*s.g2, class_tol);
  }
  s.pmf = photon_distribution(rho);
  if (s.pmf.size() >= 3) s.klyshko = klyshko(s.pmf);
  if (rho.n_atoms() == 2) s.dicke_populations = atomic_populations(rho);
  return s;
}

}  // namespace cqstat
