#pragma once

// Truncated Fock-space matrices and the charge-space (2x2 block) operators
// built from them. Blocks are dense; n_max is at most a few hundred.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fvcs/spectrum.hpp"

namespace fvcs {

using FockMatrix = Eigen::MatrixXcd;

struct Ladder {
  FockMatrix b;
  FockMatrix b_dagger;
  FockMatrix n_hat;
};

/// b|n> = sqrt(n)|n-1> on the basis |0>..|n_max-1>.
Ladder ladder_matrices(int n_max);

/// [a] = b eps(n); the undeformed kind gives plain b.
FockMatrix deformed_annihilator(const SpectrumKind& kind, int n_max);

enum class Basis { standard, feshbach_villars, nonlocal };

/// 2x2 charge-space matrix of Fock blocks: [[upper_left, upper_right],
/// [lower_left, lower_right]] in the tau basis.
class ChargeFockMatrix {
 public:
  ChargeFockMatrix(FockMatrix ul, FockMatrix ur, FockMatrix ll, FockMatrix lr,
                   Basis basis = Basis::standard);

  static ChargeFockMatrix zero(int dim, Basis basis = Basis::standard);
  /// a 1 + b tau_1 with a, b given as Fock operators.
  static ChargeFockMatrix even_odd(const FockMatrix& even, const FockMatrix& odd,
                                   Basis basis = Basis::standard);

  int dim() const { return static_cast<int>(blocks_[0].rows()); }
  Basis basis() const { return basis_; }
  const FockMatrix& block(int row, int col) const { return blocks_[2 * row + col]; }

  /// Charge-diagonal part (the observable part).
  ChargeFockMatrix even_part() const;
  /// Charge-off-diagonal part.
  ChargeFockMatrix odd_part() const;

  ChargeFockMatrix operator+(const ChargeFockMatrix& o) const;
  ChargeFockMatrix operator-(const ChargeFockMatrix& o) const;
  ChargeFockMatrix operator*(const ChargeFockMatrix& o) const;
  /// Fock operator acting identically in both charge components.
  friend ChargeFockMatrix operator*(const FockMatrix& f, const ChargeFockMatrix& m);

  Eigen::MatrixXcd dense() const;
  double max_abs() const;

 private:
  std::array<FockMatrix, 4> blocks_;
  Basis basis_;
};

/// R(n) = eps(n) + chi(n) tau_1 (identity at n = 0, where b annihilates).
ChargeFockMatrix R_matrix(const SpectrumKind& kind, int n_max);

/// Per-level transform U(n) = [(E+1) + (E-1) tau_1] / (2 sqrt E).
Eigen::Matrix2d level_transform(const SpectrumKind& kind, int n);
Eigen::Matrix2d level_transform_inverse(const SpectrumKind& kind, int n);

/// max_n || U(n-1) U^{-1}(n) - (eps(n) + chi(n) tau_1) || over 1 <= n < n_max.
double R_transform_deviation(const SpectrumKind& kind, int n_max);

/// Standard annihilator a = b R(n).
ChargeFockMatrix standard_annihilator(const SpectrumKind& kind, int n_max);

/// tau_3 E(n): the Hamiltonian in the nonlocal representation.
ChargeFockMatrix nonlocal_hamiltonian(const SpectrumKind& kind, int n_max);

/// Number of top indices excluded from truncated identities.
inline constexpr int kBoundaryRows = 2;

struct CommutatorCheck {
  double max_deviation = 0.0;       ///< interior indices n < n_max - 2
  double boundary_deviation = 0.0;  ///< over all indices, for documentation
  Eigen::VectorXcd closed_form;     ///< closed-form diagonal
};

/// [[a],[a]^+] against eps^2(n+1)(n+1) - eps^2(n) n.
CommutatorCheck commutator_check_32(const SpectrumKind& kind, int n_max);

/// [[x],[y]] against (i sigma^2/2)(eps^2(n+1)(n+1) - eps^2(n) n - 1), with
/// [q], [p] built from the deformed pair and sigma = 1/lambda.
CommutatorCheck commutator_check_32a(const SpectrumKind& kind, int n_max);

struct Commutator38Check {
  double max_deviation = 0.0;          ///< FD vs derived closed form
  double max_fd_error = 0.0;           ///< Richardson estimate of the FD error
  double max_literal_deviation = 0.0;  ///< FD vs the prefactor as printed
  double fitted_prefactor_ratio = 0.0; ///< least-squares FD / printed-form ratio
  double zero_pz_max = 0.0;            ///< max |FD| at p_z == 0 grid points (if any)
};

/// Derived diagonal of [[z],[a]] / (i p_z b):
///   (-lambda^2/2) (E(n) - E(n-1)) / (E(n) E(n-1))^{5/2}.
double commutator_38_factor(double lambda, double p_z, int n);
/// Same structure with the prefactor +1/2 exactly as printed.
double commutator_38_factor_printed(double lambda, double p_z, int n);

/// [z] = i d/dp_z realised by central differences with step h around each p_z
/// point. Throws ConvergenceError if the estimated FD error exceeds tol.
Commutator38Check commutator_check_38(double lambda, std::span<const double> p_z_points,
                                      int n_max, double h = 1e-3, double tol = 1e-6);

struct FreeTransform {
  double p = 0.0;
  Eigen::Matrix2d U;
  Eigen::Matrix2d U_inverse;
  double diagonalization_deviation = 0.0;  ///< || U H U^-1 - tau_3 E(p) ||_max
  double det = 0.0;
};

/// Free Feshbach-Villars Hamiltonian (tau_3 + i tau_2) p^2/2 + tau_3.
Eigen::Matrix2d fv_hamiltonian_free(double p);
std::vector<FreeTransform> fv_transform_free(std::span<const double> p_grid);

}  // namespace fvcs
