#include "fvcs/fock.hpp"

#include <numbers>
#include <sstream>

namespace fvcs {

namespace {

void check_dim(int n_max) {
  if (n_max < kMinFockTruncation) {
    throw DomainError("n_max below minimum " + std::to_string(kMinFockTruncation));
  }
}

const std::complex<double> I{0.0, 1.0};

// Max |M_ij| over i, j < limit.
double max_abs_leading(const FockMatrix& m, int limit) {
  if (limit <= 0) return 0.0;
  return m.topLeftCorner(limit, limit).cwiseAbs().maxCoeff();
}

CommutatorCheck compare_diagonal(const FockMatrix& commutator, Eigen::VectorXcd closed) {
  const int n = static_cast<int>(commutator.rows());
  FockMatrix diff = commutator;
  diff.diagonal() -= closed;
  CommutatorCheck r;
  r.max_deviation = max_abs_leading(diff, n - kBoundaryRows);
  r.boundary_deviation = diff.cwiseAbs().maxCoeff();
  r.closed_form = std::move(closed);
  return r;
}

// eps^2(n+1)(n+1) - eps^2(n) n on the diagonal.
Eigen::VectorXcd closed_32(const SpectrumKind& kind, int n_max) {
  Eigen::VectorXcd c(n_max);
  for (int n = 0; n < n_max; ++n) {
    const double up = std::exp(2.0 * log_eps(kind, n + 1)) * (n + 1);
    const double down = n == 0 ? 0.0 : std::exp(2.0 * log_eps(kind, n)) * n;
    c(n) = up - down;
  }
  return c;
}

}  // namespace

Ladder ladder_matrices(int n_max) {
  check_dim(n_max);
  Ladder l;
  l.b = FockMatrix::Zero(n_max, n_max);
  l.n_hat = FockMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) l.b(n - 1, n) = std::sqrt(static_cast<double>(n));
  for (int n = 0; n < n_max; ++n) l.n_hat(n, n) = static_cast<double>(n);
  l.b_dagger = l.b.adjoint();
  return l;
}

FockMatrix deformed_annihilator(const SpectrumKind& kind, int n_max) {
  FockMatrix a = ladder_matrices(n_max).b;
  const EpsTable eps(kind, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) *= eps.eps(n);
  return a;
}

ChargeFockMatrix::ChargeFockMatrix(FockMatrix ul, FockMatrix ur, FockMatrix ll, FockMatrix lr,
                                   Basis basis)
    : blocks_{std::move(ul), std::move(ur), std::move(ll), std::move(lr)}, basis_(basis) {
  const auto rows = blocks_[0].rows();
  for (const auto& b : blocks_) {
    if (b.rows() != rows || b.cols() != rows) {
      throw DomainError("charge-space blocks must be square and of equal size");
    }
  }
}

ChargeFockMatrix ChargeFockMatrix::zero(int dim, Basis basis) {
  const FockMatrix z = FockMatrix::Zero(dim, dim);
  return {z, z, z, z, basis};
}

ChargeFockMatrix ChargeFockMatrix::even_odd(const FockMatrix& even, const FockMatrix& odd,
                                            Basis basis) {
  return {even, odd, odd, even, basis};
}

ChargeFockMatrix ChargeFockMatrix::even_part() const {
  const FockMatrix z = FockMatrix::Zero(dim(), dim());
  return {blocks_[0], z, z, blocks_[3], basis_};
}

ChargeFockMatrix ChargeFockMatrix::odd_part() const {
  const FockMatrix z = FockMatrix::Zero(dim(), dim());
  return {z, blocks_[1], blocks_[2], z, basis_};
}

ChargeFockMatrix ChargeFockMatrix::operator+(const ChargeFockMatrix& o) const {
  return {blocks_[0] + o.blocks_[0], blocks_[1] + o.blocks_[1], blocks_[2] + o.blocks_[2],
          blocks_[3] + o.blocks_[3], basis_};
}

ChargeFockMatrix ChargeFockMatrix::operator-(const ChargeFockMatrix& o) const {
  return {blocks_[0] - o.blocks_[0], blocks_[1] - o.blocks_[1], blocks_[2] - o.blocks_[2],
          blocks_[3] - o.blocks_[3], basis_};
}

ChargeFockMatrix ChargeFockMatrix::operator*(const ChargeFockMatrix& o) const {
  const auto& a = blocks_;
  const auto& b = o.blocks_;
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3], basis_};
}

ChargeFockMatrix operator*(const FockMatrix& f, const ChargeFockMatrix& m) {
  return {f * m.blocks_[0], f * m.blocks_[1], f * m.blocks_[2], f * m.blocks_[3], m.basis_};
}

Eigen::MatrixXcd ChargeFockMatrix::dense() const {
  const int d = dim();
  Eigen::MatrixXcd out(2 * d, 2 * d);
  out << blocks_[0], blocks_[1], blocks_[2], blocks_[3];
  return out;
}

double ChargeFockMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

ChargeFockMatrix R_matrix(const SpectrumKind& kind, int n_max) {
  check_dim(n_max);
  FockMatrix even = FockMatrix::Identity(n_max, n_max);
  FockMatrix odd = FockMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) {
    const auto ec = eps_chi(kind, n);
    even(n, n) = ec.eps;
    odd(n, n) = ec.chi;
  }
  return ChargeFockMatrix::even_odd(even, odd, Basis::standard);
}

Eigen::Matrix2d level_transform(const SpectrumKind& kind, int n) {
  const double e = energy(kind, n);
  const double s = 2.0 * std::sqrt(e);
  Eigen::Matrix2d u;
  u << (e + 1.0) / s, (e - 1.0) / s, (e - 1.0) / s, (e + 1.0) / s;
  return u;
}

Eigen::Matrix2d level_transform_inverse(const SpectrumKind& kind, int n) {
  const double e = energy(kind, n);
  const double s = 2.0 * std::sqrt(e);
  Eigen::Matrix2d u;
  u << (e + 1.0) / s, -(e - 1.0) / s, -(e - 1.0) / s, (e + 1.0) / s;
  return u;
}

double R_transform_deviation(const SpectrumKind& kind, int n_max) {
  check_dim(n_max);
  double worst = 0.0;
  for (int n = 1; n < n_max; ++n) {
    const Eigen::Matrix2d r = level_transform(kind, n - 1) * level_transform_inverse(kind, n);
    // The transforms always carry the deformation, also for the nonlocal baseline.
    SpectrumKind deformed = kind;
    deformed.deformed = true;
    const auto ec = eps_chi(deformed, n);
    Eigen::Matrix2d expect;
    expect << ec.eps, ec.chi, ec.chi, ec.eps;
    worst = std::max(worst, (r - expect).cwiseAbs().maxCoeff());
  }
  return worst;
}

ChargeFockMatrix standard_annihilator(const SpectrumKind& kind, int n_max) {
  const FockMatrix b = ladder_matrices(n_max).b;
  return b * R_matrix(kind, n_max);
}

ChargeFockMatrix nonlocal_hamiltonian(const SpectrumKind& kind, int n_max) {
  check_dim(n_max);
  FockMatrix e = FockMatrix::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) e(n, n) = energy(kind, n);
  const FockMatrix z = FockMatrix::Zero(n_max, n_max);
  return {e, z, z, -e, Basis::nonlocal};
}

CommutatorCheck commutator_check_32(const SpectrumKind& kind, int n_max) {
  const FockMatrix a = deformed_annihilator(kind, n_max);
  const FockMatrix ad = a.adjoint();
  return compare_diagonal(a * ad - ad * a, closed_32(kind, n_max));
}

CommutatorCheck commutator_check_32a(const SpectrumKind& kind, int n_max) {
  const double sigma = 1.0 / kind.lambda;
  const FockMatrix a = deformed_annihilator(kind, n_max);
  const FockMatrix ad = a.adjoint();
  const FockMatrix q = sigma * (a + ad) / std::numbers::sqrt2;
  const FockMatrix p = (a - ad) / (I * std::numbers::sqrt2 * sigma);
  // The guiding-centre pair only contributes its c-number commutator -i.
  // With hbar = m = 1 and m omega = lambda^2 = 1/sigma^2, 1/(2 m omega) = sigma^2/2.
  const FockMatrix id = FockMatrix::Identity(n_max, n_max);
  const FockMatrix xy = (0.5 * sigma * sigma) * (-I * id - (p * q - q * p));
  Eigen::VectorXcd closed = closed_32(kind, n_max);
  closed = (I * 0.5 * sigma * sigma) * (closed.array() - 1.0).matrix();
  return compare_diagonal(xy, std::move(closed));
}

double commutator_38_factor(double lambda, double p_z, int n) {
  const auto kind = SpectrumKind::magnetic(lambda, p_z);
  const double e1 = energy(kind, n);
  const double e0 = energy(kind, n - 1);
  return -0.5 * lambda * lambda * level_gap(kind, n - 1) / std::pow(e1 * e0, 2.5);
}

double commutator_38_factor_printed(double lambda, double p_z, int n) {
  const auto kind = SpectrumKind::magnetic(lambda, p_z);
  const double e1 = energy(kind, n);
  const double e0 = energy(kind, n - 1);
  return 0.5 * level_gap(kind, n - 1) / std::pow(e1 * e0, 2.5);
}

Commutator38Check commutator_check_38(double lambda, std::span<const double> p_z_points,
                                      int n_max, double h, double tol) {
  check_dim(n_max);
  if (!(h > 0.0)) throw DomainError("finite-difference step must be > 0");
  if (p_z_points.empty()) throw DomainError("p_z grid is empty");

  auto column_eps = [&](double pz) {
    const EpsTable t(SpectrumKind::magnetic(lambda, pz), n_max);
    Eigen::VectorXd e(n_max);
    for (int n = 0; n < n_max; ++n) e(n) = n == 0 ? 1.0 : t.eps(n);
    return e;
  };

  Commutator38Check r;
  double num = 0.0;
  double den = 0.0;
  const int interior = n_max - kBoundaryRows;
  for (double pz : p_z_points) {
    // [z][a] - [a][z] = i (d/dp_z [a]); [a] = b diag(eps) so only the
    // superdiagonal entries sqrt(n) eps(n, p_z) vary.
    const Eigen::VectorXd d1 = (column_eps(pz + h) - column_eps(pz - h)) / (2.0 * h);
    const Eigen::VectorXd d2 = (column_eps(pz + 2 * h) - column_eps(pz - 2 * h)) / (4.0 * h);
    for (int n = 1; n < interior; ++n) {
      const double sq = std::sqrt(static_cast<double>(n));
      const std::complex<double> fd = I * sq * d1(n);
      const std::complex<double> fd_err = sq * (d1(n) - d2(n)) / 3.0;
      const std::complex<double> derived = I * pz * sq * commutator_38_factor(lambda, pz, n);
      const std::complex<double> printed =
          I * pz * sq * commutator_38_factor_printed(lambda, pz, n);
      r.max_deviation = std::max(r.max_deviation, std::abs(fd - derived));
      r.max_fd_error = std::max(r.max_fd_error, std::abs(fd_err));
      r.max_literal_deviation = std::max(r.max_literal_deviation, std::abs(fd - printed));
      num += (fd * std::conj(printed)).real();
      den += std::norm(printed);
      if (pz == 0.0) r.zero_pz_max = std::max(r.zero_pz_max, std::abs(fd));
    }
  }
  r.fitted_prefactor_ratio = den > 0.0 ? num / den : 0.0;
  if (r.max_fd_error > tol) {
    std::ostringstream os;
    os << "finite-difference error estimate " << r.max_fd_error << " exceeds " << tol
       << "; refine the p_z step (h = " << h << ")";
    throw ConvergenceError(os.str(), r.max_deviation, r.max_fd_error);
  }
  return r;
}

Eigen::Matrix2d fv_hamiltonian_free(double p) {
  Eigen::Matrix2d h;
  const double k = 0.5 * p * p;
  h << k + 1.0, k, -k, -k - 1.0;
  return h;
}

std::vector<FreeTransform> fv_transform_free(std::span<const double> p_grid) {
  std::vector<FreeTransform> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    const double e = energy_free(p);
    const double s = 2.0 * std::sqrt(e);
    FreeTransform t;
    t.p = p;
    t.U << (e + 1.0) / s, (e - 1.0) / s, (e - 1.0) / s, (e + 1.0) / s;
    t.U_inverse << (e + 1.0) / s, -(e - 1.0) / s, -(e - 1.0) / s, (e + 1.0) / s;
    Eigen::Matrix2d expect = Eigen::Matrix2d::Zero();
    expect(0, 0) = e;
    expect(1, 1) = -e;
    t.diagonalization_deviation =
        (t.U * fv_hamiltonian_free(p) * t.U_inverse - expect).cwiseAbs().maxCoeff();
    t.det = t.U.determinant();
    out.push_back(t);
  }
  return out;
}

}  // namespace fvcs
