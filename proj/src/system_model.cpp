#include "cqstat/system_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cqstat {

SystemParams SystemParams::validated() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemParams: " + msg); };
  if (!(g >= 0.0)) fail("g must be >= 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(eta >= 0.0)) fail("eta must be >= 0");
  if (!(kappa > 0.0)) fail("kappa must be > 0");
  if (!std::isfinite(delta) || !std::isfinite(delta_a)) fail("detunings must be finite");
  if (!std::isfinite(phi_z)) fail("phi_z must be finite");
  if (n_max < 2) fail("n_max must be >= 2");
  if (n_atoms != 1 && n_atoms != 2) fail("n_atoms must be 1 or 2");

  SystemParams out = *this;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  out.phi_z = std::fmod(phi_z, two_pi);
  if (out.phi_z < 0.0) out.phi_z += two_pi;
  if (out.phi_z >= two_pi) out.phi_z = 0.0;
  return out;
}

const std::vector<std::string_view>& SystemParams::field_names() {
  static const std::vector<std::string_view> names = {
      "g", "kappa", "gamma", "eta", "delta", "delta_a", "phi_z", "n_max", "n_atoms"};
  return names;
}

double SystemParams::get(std::string_view name) const {
  if (name == "g") return g;
  if (name == "kappa") return kappa;
  if (name == "gamma") return gamma;
  if (name == "eta") return eta;
  if (name == "delta") return delta;
  if (name == "delta_a") return delta_a;
  if (name == "phi_z") return phi_z;
  if (name == "n_max") return n_max;
  if (name == "n_atoms") return n_atoms;
  throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

void SystemParams::set(std::string_view name, double value) {
  if (name == "g") g = value;
  else if (name == "kappa") kappa = value;
  else if (name == "gamma") gamma = value;
  else if (name == "eta") eta = value;
  else if (name == "delta") delta = value;
  else if (name == "delta_a") delta_a = value;
  else if (name == "phi_z") phi_z = value;
  else if (name == "n_max") n_max = static_cast<int>(std::lround(value));
  else if (name == "n_atoms") n_atoms = static_cast<int>(std::lround(value));
  else throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

std::string_view to_string(DickeState s) {
  switch (s) {
    case DickeState::gg: return "gg";
    case DickeState::plus: return "plus";
    case DickeState::minus: return "minus";
    case DickeState::ee: return "ee";
  }
  return "?";
}

ModelOperators build_operators(const SystemParams& params) {
  const SystemParams p = params.validated();
  ModelOperators ops;
  for (int i = 0; i < p.n_atoms; ++i) ops.dims.push_back(2);
  ops.dims.push_back(p.cavity_dim());
  const std::size_t cavity_slot = ops.dims.size() - 1;
  ops.a = embed(destroy(p.n_max), cavity_slot, ops.dims);
  for (int i = 0; i < p.n_atoms; ++i) {
    ops.sigma_minus.push_back(embed(spin_lowering(), static_cast<std::size_t>(i), ops.dims));
  }
  return ops;
}

Couplings coupling_constants(const SystemParams& params) {
  const SystemParams p = params.validated();
  return {p.g, p.g * std::cos(p.phi_z)};
}

DickeCouplings symmetric_couplings(const SystemParams& params) {
  const SystemParams p = params.validated();
  const double c = std::cos(p.phi_z);
  return {p.g * (1.0 + c) / std::numbers::sqrt2, p.g * (1.0 - c) / std::numbers::sqrt2};
}

Matrix build_hamiltonian(const SystemParams& params) {
  const SystemParams p = params.validated();
  const ModelOperators ops = build_operators(p);
  const Couplings cpl = coupling_constants(p);
  const std::array<double, 2> gi = {cpl.g1, cpl.g2};

  const Matrix ad = ops.a.adjoint();
  Matrix h = p.delta * (ad * ops.a);
  for (std::size_t i = 0; i < ops.sigma_minus.size(); ++i) {
    const Matrix& sm = ops.sigma_minus[i];
    const Matrix sp = sm.adjoint();
    h += p.delta_a * (sp * sm);
    h += gi[i] * (sp * ops.a + sm * ad);
    h += p.eta * (sp + sm);
  }
  return h;
}

std::vector<CollapseChannel> build_collapse_channels(const SystemParams& params) {
  const SystemParams p = params.validated();
  ModelOperators ops = build_operators(p);
  std::vector<CollapseChannel> channels;
  for (auto& sm : ops.sigma_minus) channels.push_back({std::move(sm), p.gamma});
  channels.push_back({std::move(ops.a), p.kappa});
  return channels;
}

SuperOperator assemble_liouvillian(const Matrix& hamiltonian,
                                   const std::vector<CollapseChannel>& channels) {
  SuperOperator l = hamiltonian_superoperator(hamiltonian);
  for (const auto& ch : channels) {
    l += lindblad_dissipator(ch.op, ch.rate);
  }
  l.matrix.makeCompressed();
  return l;
}

SuperOperator build_liouvillian(const SystemParams& params) {
  return assemble_liouvillian(build_hamiltonian(params), build_collapse_channels(params));
}

std::array<Matrix, 4> dicke_projectors(int n_max) {
  if (n_max < 1) throw std::invalid_argument("dicke_projectors: n_max must be >= 1");
  // two-atom basis index = 2*atom1 + atom2: |gg>=0, |ge>=1, |eg>=2, |ee>=3
  Eigen::Vector4cd gg = Eigen::Vector4cd::Unit(0);
  Eigen::Vector4cd ee = Eigen::Vector4cd::Unit(3);
  Eigen::Vector4cd plus = (Eigen::Vector4cd::Unit(1) + Eigen::Vector4cd::Unit(2)) / std::numbers::sqrt2;
  Eigen::Vector4cd minus = (Eigen::Vector4cd::Unit(1) - Eigen::Vector4cd::Unit(2)) / std::numbers::sqrt2;
  const Matrix cavity_id = identity(n_max + 1);
  auto proj = [&](const Eigen::Vector4cd& v) { return kron(Matrix(v * v.adjoint()), cavity_id); };
  return {proj(gg), proj(plus), proj(minus), proj(ee)};
}

}  // namespace cqstat
