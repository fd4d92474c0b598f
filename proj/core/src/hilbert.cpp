#include "dualrail/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualrail {

void ModeLayout::validate() const {
  if (dim_a < 2 || dim_b < 2)
    throw std::invalid_argument("cavity truncation must be >= 2");
  if (dim_q != 2 && dim_q != 3)
    throw std::invalid_argument("ancilla dimension must be 2 or 3, got " + std::to_string(dim_q));
}

void PureState::normalize() {
  double n = amp.norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize zero state");
  amp /= n;
}

MixedState MixedState::from_pure(const PureState& psi) {
  return {psi.layout, psi.amp * psi.amp.adjoint()};
}

double MixedState::hermiticity_error() const { return max_abs_diff(rho, rho.adjoint()); }

double MixedState::min_eigenvalue() const {
  Mat h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void MixedState::check(double trace_tol, double herm_tol, double pos_tol) const {
  if (std::abs(trace() - 1.0) > trace_tol)
    throw std::runtime_error("density matrix trace off by " + std::to_string(trace() - 1.0));
  if (hermiticity_error() > herm_tol)
    throw std::runtime_error("density matrix not Hermitian");
  if (min_eigenvalue() < -pos_tol)
    throw std::runtime_error("density matrix has negative eigenvalue");
}

namespace {

Mat lowering(int d) {
  Mat m = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(double(n));
  return m;
}

Mat ket_bra(int d, int i, int j) {
  Mat m = Mat::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

Mat herm_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat embed(const ModeLayout& l, int mode, const Mat& op) {
  Mat ia = Mat::Identity(l.dim_a, l.dim_a);
  Mat ib = Mat::Identity(l.dim_b, l.dim_b);
  Mat iq = Mat::Identity(l.dim_q, l.dim_q);
  switch (mode) {
    case 0: return kron(kron(op, ib), iq);
    case 1: return kron(kron(ia, op), iq);
    case 2: return kron(kron(ia, ib), op);
  }
  throw std::invalid_argument("bad mode index");
}

ModeOperators build_mode_operators(const ModeLayout& l) {
  l.validate();
  ModeOperators o;
  o.layout = l;
  const int dq = l.dim_q;
  o.id = Mat::Identity(l.total(), l.total());
  o.a = embed(l, 0, lowering(l.dim_a));
  o.b = embed(l, 1, lowering(l.dim_b));
  auto number = [](int d) { return Mat(Eigen::VectorXd::LinSpaced(d, 0, d - 1).cast<cplx>().asDiagonal()); };
  o.n_a = embed(l, 0, number(l.dim_a));
  o.n_b = embed(l, 1, number(l.dim_b));
  o.proj_g = embed(l, 2, ket_bra(dq, 0, 0));
  o.proj_e = embed(l, 2, ket_bra(dq, 1, 1));
  o.proj_f = dq == 3 ? embed(l, 2, ket_bra(dq, 2, 2)) : Mat::Zero(l.total(), l.total());
  o.sigma_ge = embed(l, 2, ket_bra(dq, 0, 1));
  o.sigma_ef = dq == 3 ? embed(l, 2, ket_bra(dq, 1, 2)) : Mat::Zero(l.total(), l.total());
  o.sigma_gf = dq == 3 ? embed(l, 2, ket_bra(dq, 0, 2)) : Mat::Zero(l.total(), l.total());
  o.sigma_x = o.sigma_ge + o.sigma_ge.adjoint();
  o.sigma_z = o.proj_g - o.proj_e;
  return o;
}

OperatorMatrix total_photon_projector(const ModeLayout& l, int N) {
  l.validate();
  if (N < 0 || N > l.dim_a + l.dim_b - 2)
    throw std::out_of_range("photon number outside truncation");
  Mat p = Mat::Zero(l.total(), l.total());
  for (int na = 0; na < l.dim_a; ++na) {
    int nb = N - na;
    if (nb < 0 || nb >= l.dim_b) continue;
    for (int q = 0; q < l.dim_q; ++q) p(l.index(na, nb, q), l.index(na, nb, q)) = 1.0;
  }
  return {l, p};
}

PureState basis_state(const ModeLayout& l, int na, int nb, int q) {
  l.validate();
  if (na < 0 || na >= l.dim_a || nb < 0 || nb >= l.dim_b || q < 0 || q >= l.dim_q)
    throw std::out_of_range("basis label outside layout");
  PureState s{l, Vec::Zero(l.total())};
  s.amp(l.index(na, nb, q)) = 1.0;
  return s;
}

double max_abs_diff(const Mat& x, const Mat& y) { return (x - y).cwiseAbs().maxCoeff(); }

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) < tol;
}

static void require_same(const ModeLayout& x, const ModeLayout& y) {
  if (!(x == y)) throw std::invalid_argument("layout mismatch");
}

double fidelity(const PureState& x, const PureState& y) {
  require_same(x.layout, y.layout);
  return std::norm(x.amp.dot(y.amp));
}

double fidelity(const PureState& x, const MixedState& r) {
  require_same(x.layout, r.layout);
  return std::clamp((x.amp.adjoint() * r.rho * x.amp)(0, 0).real(), 0.0, 1.0);
}

double fidelity(const MixedState& r, const PureState& x) { return fidelity(x, r); }

double fidelity(const MixedState& r, const MixedState& s) {
  require_same(r.layout, s.layout);
  Mat sr = herm_sqrt(r.rho);
  Mat inner = sr * s.rho * sr;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

cplx expectation(const Mat& op, const PureState& psi) { return psi.amp.dot(op * psi.amp); }

cplx expectation(const Mat& op, const MixedState& r) { return (op * r.rho).trace(); }

ReducedState partial_trace(const MixedState& s, const std::vector<Mode>& keep) {
  const ModeLayout& l = s.layout;
  const int dims[3] = {l.dim_a, l.dim_b, l.dim_q};
  bool kept[3] = {false, false, false};
  for (Mode m : keep) kept[int(m)] = true;
  ReducedState out;
  int dk = 1;
  for (int i = 0; i < 3; ++i)
    if (kept[i]) {
      out.dims.push_back(dims[i]);
      dk *= dims[i];
    }
  out.rho = Mat::Zero(dk, dk);
  auto split = [&](int idx, int* q) {
    q[2] = idx % dims[2];
    idx /= dims[2];
    q[1] = idx % dims[1];
    q[0] = idx / dims[1];
  };
  auto kept_index = [&](const int* q) {
    int k = 0;
    for (int i = 0; i < 3; ++i)
      if (kept[i]) k = k * dims[i] + q[i];
    return k;
  };
  int qi[3], qj[3];
  for (int i = 0; i < l.total(); ++i) {
    split(i, qi);
    for (int j = 0; j < l.total(); ++j) {
      split(j, qj);
      bool traced_match = true;
      for (int m = 0; m < 3; ++m)
        if (!kept[m] && qi[m] != qj[m]) traced_match = false;
      if (traced_match) out.rho(kept_index(qi), kept_index(qj)) += s.rho(i, j);
    }
  }
  return out;
}

namespace {

bool on_edge(const ModeLayout& l, int na, int nb) { return na == l.dim_a - 1 || nb == l.dim_b - 1; }
bool in_truncated_manifold(const ModeLayout& l, int na, int nb) {
  return na + nb > std::min(l.dim_a, l.dim_b) - 1;
}

template <class Pred>
double diag_population(const ModeLayout& l, const Eigen::VectorXd& diag, Pred pred) {
  double p = 0.0;
  for (int na = 0; na < l.dim_a; ++na)
    for (int nb = 0; nb < l.dim_b; ++nb)
      if (pred(l, na, nb))
        for (int q = 0; q < l.dim_q; ++q) p += diag(l.index(na, nb, q));
  return p;
}

}  // namespace

double edge_population(const MixedState& s) {
  return diag_population(s.layout, s.rho.diagonal().real(), on_edge);
}
double edge_population(const PureState& s) {
  return diag_population(s.layout, s.amp.cwiseAbs2(), on_edge);
}
double truncated_manifold_population(const MixedState& s) {
  return diag_population(s.layout, s.rho.diagonal().real(), in_truncated_manifold);
}
double truncated_manifold_population(const PureState& s) {
  return diag_population(s.layout, s.amp.cwiseAbs2(), in_truncated_manifold);
}

}  // namespace dualrail
