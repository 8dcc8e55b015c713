#pragma once

// Two coherently pumped two-level atoms coupled to one lossy cavity mode.
// Units: hbar = 1, every rate in the same (arbitrary) unit; configs use
// kappa = 1.

#include <array>
#include <string_view>
#include <vector>

#include "cqstat/operators.hpp"

namespace cqstat {

struct SystemParams {
  double g = 1.0;        // maximum atom-cavity coupling
  double kappa = 1.0;    // cavity decay rate
  double gamma = 1.0;    // spontaneous emission rate
  double eta = 1.0;      // Rabi frequency of the transverse pump
  double delta = 0.0;    // cavity-laser detuning  omega_C - omega_L
  double delta_a = 0.0;  // atom-laser detuning    omega_A - omega_L
  double phi_z = 0.0;    // interatomic phase
  int n_max = 20;        // Fock cutoff
  int n_atoms = 2;       // 1 or 2

  /// Checks the invariants and returns a copy with phi_z reduced to [0, 2pi).
  /// Throws std::invalid_argument.
  [[nodiscard]] SystemParams validated() const;

  [[nodiscard]] Index atom_dim() const { return n_atoms == 2 ? 4 : 2; }
  [[nodiscard]] Index cavity_dim() const { return n_max + 1; }
  [[nodiscard]] Index dim() const { return atom_dim() * cavity_dim(); }

  /// Named access used by sweeps and config files. n_max and n_atoms are
  /// rounded to the nearest integer on write. Throws std::invalid_argument for
  /// unknown names.
  [[nodiscard]] double get(std::string_view name) const;
  void set(std::string_view name, double value);

  static const std::vector<std::string_view>& field_names();
};

struct Couplings {
  double g1;
  double g2;  // signed
};

struct DickeCouplings {
  double g_plus;
  double g_minus;
};

struct CollapseChannel {
  Matrix op;
  double rate;
};

enum class DickeState { gg = 0, plus = 1, minus = 2, ee = 3 };
inline constexpr std::array<DickeState, 4> kDickeStates = {DickeState::gg, DickeState::plus,
                                                           DickeState::minus, DickeState::ee};
std::string_view to_string(DickeState s);

/// Operators of the model embedded in the full atom (x) cavity space.
struct ModelOperators {
  std::vector<Index> dims;
  Matrix a;
  std::vector<Matrix> sigma_minus;  // one per atom
};

ModelOperators build_operators(const SystemParams& params);

/// g1 = g, g2 = g cos(phi_z).
Couplings coupling_constants(const SystemParams& params);

/// g_pm = g (1 +- cos phi_z) / sqrt(2): couplings of the symmetric and
/// antisymmetric Dicke states to the cavity.
DickeCouplings symmetric_couplings(const SystemParams& params);

/// H = Delta sum_i S_i^z + delta a^dag a + sum_i g_i (S_i^+ a + S_i^- a^dag)
///     + eta sum_i (S_i^+ + S_i^-),  with S^z = |e><e|.
Matrix build_hamiltonian(const SystemParams& params);

/// [(S_1^-, gamma), (S_2^-, gamma), (a, kappa)]; one atomic channel for a
/// single atom.
std::vector<CollapseChannel> build_collapse_channels(const SystemParams& params);

/// Liouvillian from an arbitrary Hamiltonian and channel list.
SuperOperator assemble_liouvillian(const Matrix& hamiltonian,
                                   const std::vector<CollapseChannel>& channels);

/// Generator of the master equation, L vec(rho) = vec(d rho / dt).
SuperOperator build_liouvillian(const SystemParams& params);

/// Projectors onto |gg>, |+>, |->, |ee> tensored with the cavity identity
/// on |0>..|n_max>.
std::array<Matrix, 4> dicke_projectors(int n_max);

}  // namespace cqstat
