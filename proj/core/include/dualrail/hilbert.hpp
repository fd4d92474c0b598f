#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace dualrail {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Alice (x) Bob (x) ancilla, in that order everywhere.
struct ModeLayout {
  int dim_a = 4;
  int dim_b = 4;
  int dim_q = 2;

  int total() const { return dim_a * dim_b * dim_q; }
  int index(int na, int nb, int q) const { return (na * dim_b + nb) * dim_q + q; }
  void validate() const;
  bool operator==(const ModeLayout&) const = default;
};

struct OperatorMatrix {
  ModeLayout layout;
  Mat m;
};

struct PureState {
  ModeLayout layout;
  Vec amp;

  void normalize();
  double norm() const { return amp.norm(); }
};

struct MixedState {
  ModeLayout layout;
  Mat rho;

  static MixedState from_pure(const PureState& psi);
  double trace() const { return rho.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  // throws if any of the density-matrix invariants are violated
  void check(double trace_tol = 1e-8, double herm_tol = 1e-10, double pos_tol = 1e-7) const;
};

struct ModeOperators {
  ModeLayout layout;
  Mat id;
  Mat a, b, n_a, n_b;
  Mat sigma_x, sigma_z;  // on the g-e pair
  Mat proj_g, proj_e, proj_f;  // proj_f is zero when dim_q == 2
  Mat sigma_ge;  // |g><e|
  Mat sigma_ef;  // |e><f| (zero when dim_q == 2)
  Mat sigma_gf;  // |g><f| (zero when dim_q == 2)
};

ModeOperators build_mode_operators(const ModeLayout& layout);

// Embeds a single-mode operator; mode = 0 (Alice), 1 (Bob), 2 (ancilla).
Mat embed(const ModeLayout& layout, int mode, const Mat& op);

OperatorMatrix total_photon_projector(const ModeLayout& layout, int N);

PureState basis_state(const ModeLayout& layout, int na, int nb, int q = 0);

double max_abs_diff(const Mat& x, const Mat& y);
bool is_hermitian(const Mat& m, double tol = 1e-12);

double fidelity(const PureState& x, const PureState& y);
double fidelity(const PureState& x, const MixedState& r);
double fidelity(const MixedState& r, const PureState& x);
double fidelity(const MixedState& r, const MixedState& s);

cplx expectation(const Mat& op, const PureState& psi);
cplx expectation(const Mat& op, const MixedState& rho);

enum class Mode { Alice = 0, Bob = 1, Ancilla = 2 };

struct ReducedState {
  std::vector<int> dims;  // kept subsystems, in layout order
  Mat rho;
};

ReducedState partial_trace(const MixedState& s, const std::vector<Mode>& keep);

// Population on the top Fock level of either cavity.
double edge_population(const MixedState& s);
double edge_population(const PureState& s);

// Population in joint-photon manifolds that the layout cannot hold completely
// (N > min(dim_a, dim_b) - 1). Dynamics here conserve or lower N, so this is
// what actually signals truncation error.
double truncated_manifold_population(const MixedState& s);
double truncated_manifold_population(const PureState& s);

inline constexpr double kTruncationThreshold = 1e-6;

}  // namespace dualrail
