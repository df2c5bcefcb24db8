#include "qcf/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace qcf {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

void require_bit(int v, const char* what) {
  if (v != 0 && v != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace

SingleQubitState SingleQubitState::alpha(complexd x, complexd y) {
  return SingleQubitState{x, y, Half::Alpha};
}

SingleQubitState SingleQubitState::beta(complexd b0, complexd b1) {
  return SingleQubitState{b0, b1, Half::Beta};
}

SingleQubitState encode_outcome(int p, int q) {
  require_bit(p, "p");
  require_bit(q, "q");
  if (p == 0) {
    return SingleQubitState::beta(q == 0 ? 1.0 : 0.0, q == 0 ? 0.0 : 1.0);
  }
  return SingleQubitState::beta(kInvSqrt2, q == 0 ? kInvSqrt2 : -kInvSqrt2);
}

MeasurementBasis MeasurementBasis::alpha_xy() {
  return {SingleQubitState::alpha(1.0, 0.0), SingleQubitState::alpha(0.0, 1.0)};
}

MeasurementBasis MeasurementBasis::alpha_diagonal() {
  return {SingleQubitState::alpha(kInvSqrt2, kInvSqrt2),
          SingleQubitState::alpha(kInvSqrt2, -kInvSqrt2)};
}

MeasurementBasis MeasurementBasis::beta_conjugate(int p) {
  require_bit(p, "p");
  return {encode_outcome(p, 0), encode_outcome(p, 1)};
}

MeasurementBasis MeasurementBasis::around(const SingleQubitState& state) {
  if (std::abs(state.norm2() - 1.0) > kNormTolerance)
    throw std::invalid_argument("basis state must be normalized");
  SingleQubitState perp{-std::conj(state.a1), std::conj(state.a0), state.role};
  return {state, perp};
}

bool DensityMatrix2::is_hermitian(double tol) const {
  return std::abs(m[0][1] - std::conj(m[1][0])) <= tol && std::abs(m[0][0].imag()) <= tol &&
         std::abs(m[1][1].imag()) <= tol;
}

bool DensityMatrix2::is_unit_trace(double tol) const { return std::abs(trace() - 1.0) <= tol; }

std::array<double, 2> DensityMatrix2::eigenvalues_hermitian() const {
  const double a = m[0][0].real();
  const double d = m[1][1].real();
  const double mid = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m[0][1]));
  return {mid - r, mid + r};
}

std::array<SingleQubitState, 2> DensityMatrix2::eigenvectors_hermitian(Half role) const {
  const auto ev = eigenvalues_hermitian();
  const complexd b = m[0][1];
  std::array<SingleQubitState, 2> out;
  for (int i = 0; i < 2; ++i) {
    complexd v0, v1;
    if (std::abs(b) > 1e-14) {
      v0 = b;
      v1 = complexd(ev[i] - m[0][0].real(), 0.0);
    } else {
      // diagonal matrix: eigenvectors are the basis states, ordered by value
      const bool first_is_00 = m[0][0].real() <= m[1][1].real();
      const bool pick0 = (i == 0) == first_is_00;
      v0 = pick0 ? 1.0 : 0.0;
      v1 = pick0 ? 0.0 : 1.0;
    }
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    out[i] = SingleQubitState{v0 / n, v1 / n, role};
  }
  return out;
}

bool DensityMatrix2::is_psd(double tol) const {
  const auto ev = eigenvalues_hermitian();
  return ev[0] >= -tol;
}

DensityMatrix2 DensityMatrix2::pure(const SingleQubitState& s) {
  DensityMatrix2 r;
  r.m[0][0] = s.a0 * std::conj(s.a0);
  r.m[0][1] = s.a0 * std::conj(s.a1);
  r.m[1][0] = s.a1 * std::conj(s.a0);
  r.m[1][1] = s.a1 * std::conj(s.a1);
  return r;
}

DensityMatrix2 DensityMatrix2::operator+(const DensityMatrix2& o) const {
  DensityMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
  return r;
}

DensityMatrix2 DensityMatrix2::operator-(const DensityMatrix2& o) const {
  DensityMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
  return r;
}

DensityMatrix2 DensityMatrix2::operator*(double c) const {
  DensityMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * c;
  return r;
}

PairState PairState::from_amplitudes(const std::array<complexd, 4>& amp) {
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > kNormTolerance)
    throw std::invalid_argument("pair state amplitudes are not normalized");
  PairState s;
  s.amp_ = amp;
  s.status_ = PairStatus::Intact;
  return s;
}

bool PairState::alpha_measured() const {
  return status_ == PairStatus::AlphaMeasured || status_ == PairStatus::BothMeasured;
}

bool PairState::beta_measured() const {
  return status_ == PairStatus::BetaMeasured || status_ == PairStatus::BothMeasured;
}

const std::array<complexd, 4>& PairState::amplitudes() const {
  if (!intact()) throw std::logic_error("amplitudes(): pair is no longer intact");
  return amp_;
}

// Projection of the joint state onto outcome k of `basis` on `half`,
// expressed as the unnormalized state of the other half.
static SingleQubitState project_half(const std::array<complexd, 4>& amp, Half half,
                                     const MeasurementBasis& basis, int k) {
  const SingleQubitState& b = (k == 0) ? basis.first : basis.second;
  if (b.role != half) throw std::invalid_argument("measurement basis is for the wrong half");
  SingleQubitState out;
  if (half == Half::Beta) {
    // residual alpha amplitudes: sum_b conj(basis_b) * amp(a, b)
    out.role = Half::Alpha;
    out.a0 = std::conj(b.a0) * amp[0] + std::conj(b.a1) * amp[1];
    out.a1 = std::conj(b.a0) * amp[2] + std::conj(b.a1) * amp[3];
  } else {
    out.role = Half::Beta;
    out.a0 = std::conj(b.a0) * amp[0] + std::conj(b.a1) * amp[2];
    out.a1 = std::conj(b.a0) * amp[1] + std::conj(b.a1) * amp[3];
  }
  return out;
}

double PairState::outcome_probability(Half half, const MeasurementBasis& basis, int k) const {
  if (!intact()) throw std::logic_error("outcome_probability(): pair is no longer intact");
  return clamp01(project_half(amp_, half, basis, k).norm2());
}

SingleQubitState PairState::residual_after(Half half, const MeasurementBasis& basis, int k) const {
  if (!intact()) throw std::logic_error("residual_after(): pair is no longer intact");
  SingleQubitState proj = project_half(amp_, half, basis, k);
  const double n2 = proj.norm2();
  if (n2 <= kNormTolerance * kNormTolerance)
    throw std::domain_error("conditional state of a zero-amplitude branch");
  const double n = std::sqrt(n2);
  proj.a0 /= n;
  proj.a1 /= n;
  return proj;
}

DensityMatrix2 PairState::reduced_beta() const {
  if (!intact()) throw std::logic_error("reduced_beta(): pair is no longer intact");
  DensityMatrix2 r;
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      r.m[b][bp] = amp_[b] * std::conj(amp_[bp]) + amp_[2 + b] * std::conj(amp_[2 + bp]);
  return r;
}

int PairState::measure_half(Half half, const MeasurementBasis& basis, RandomStream& rng) {
  if (half == Half::Beta && beta_measured())
    throw std::logic_error("beta half has already been measured");
  if (half == Half::Alpha && alpha_measured())
    throw std::logic_error("alpha half has already been measured");

  if (intact()) {
    const double p0 = outcome_probability(half, basis, 0);
    const int k = rng.bernoulli(p0) ? 0 : 1;
    const SingleQubitState other = residual_after(half, basis, k);
    const SingleQubitState own = (k == 0) ? basis.first : basis.second;
    if (half == Half::Beta) {
      beta_state_ = own;
      alpha_state_ = other;
      status_ = PairStatus::BetaMeasured;
    } else {
      alpha_state_ = own;
      beta_state_ = other;
      status_ = PairStatus::AlphaMeasured;
    }
    return k;
  }

  // Other half already measured: measure this half's conditional state.
  SingleQubitState& own = (half == Half::Beta) ? beta_state_ : alpha_state_;
  if (basis.first.role != own.role)
    throw std::invalid_argument("measurement basis is for the wrong half");
  const double p0 = clamp01(basis.first.overlap(own));
  const int k = rng.bernoulli(p0) ? 0 : 1;
  own = (k == 0) ? basis.first : basis.second;
  status_ = PairStatus::BothMeasured;
  return k;
}

QubitOutcome PairState::measure_beta(int basis_p, RandomStream& rng) {
  const int q = measure_half(Half::Beta, MeasurementBasis::beta_conjugate(basis_p), rng);
  return QubitOutcome{basis_p, q};
}

int PairState::measure_beta_general(const MeasurementBasis& basis, RandomStream& rng) {
  return measure_half(Half::Beta, basis, rng);
}

int PairState::measure_alpha(const MeasurementBasis& basis, RandomStream& rng) {
  return measure_half(Half::Alpha, basis, rng);
}

int PairState::measure_collapsed(Half half, const MeasurementBasis& basis, RandomStream& rng) {
  const bool measured = (half == Half::Alpha) ? alpha_measured() : beta_measured();
  if (!measured)
    throw std::logic_error("measure_collapsed: that half has not collapsed yet");
  SingleQubitState& own = (half == Half::Alpha) ? alpha_state_ : beta_state_;
  if (basis.first.role != own.role)
    throw std::invalid_argument("measurement basis is for the wrong half");
  const double p0 = clamp01(basis.first.overlap(own));
  const int k = rng.bernoulli(p0) ? 0 : 1;
  own = (k == 0) ? basis.first : basis.second;
  return k;
}

const SingleQubitState& PairState::residual() const {
  if (status_ == PairStatus::AlphaMeasured) return beta_state_;
  if (status_ == PairStatus::BetaMeasured) return alpha_state_;
  throw std::logic_error("residual(): exactly one half must have been measured");
}

std::array<complexd, 4> PairState::effective_joint() const {
  if (intact()) return amp_;
  return {alpha_state_.a0 * beta_state_.a0, alpha_state_.a0 * beta_state_.a1,
          alpha_state_.a1 * beta_state_.a0, alpha_state_.a1 * beta_state_.a1};
}

bool PairState::project_and_collapse(const PairState& target, RandomStream& rng) {
  const auto t = target.effective_joint();
  const auto joint = effective_joint();
  complexd ip{0.0, 0.0};
  for (int i = 0; i < 4; ++i) ip += std::conj(t[i]) * joint[i];
  const double p = clamp01(std::norm(ip));
  const bool success = rng.bernoulli(p);
  std::array<complexd, 4> post;
  if (success) {
    post = t;
  } else {
    double n2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      post[i] = joint[i] - ip * t[i];
      n2 += std::norm(post[i]);
    }
    const double n = std::sqrt(n2);
    for (auto& a : post) a /= n;
  }
  amp_ = post;
  status_ = PairStatus::Intact;
  return success;
}

// amp[2a + b] += c * <computational b | p,q>
static void add_beta_ket(std::array<complexd, 4>& amp, int a, int p, int q, complexd c) {
  const SingleQubitState ket = encode_outcome(p, q);
  amp[2 * a + 0] += c * ket.a0;
  amp[2 * a + 1] += c * ket.a1;
}

PairState prepare_general(complexd c_x, complexd c_y, complexd c_xp, complexd c_yp) {
  std::array<complexd, 4> amp{};
  add_beta_ket(amp, 0, 0, 0, c_x);
  add_beta_ket(amp, 1, 1, 0, c_y);
  add_beta_ket(amp, 0, 0, 1, c_xp);
  add_beta_ket(amp, 1, 1, 1, c_yp);
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  if (n2 <= kNormTolerance)
    throw std::invalid_argument("general pair state: non-normalizable coefficient set");
  const double n = std::sqrt(n2);
  for (auto& a : amp) a /= n;
  return PairState::from_amplitudes(amp);
}

PairState prepare_product(QubitOutcome beta, const SingleQubitState& alpha) {
  if (alpha.role != Half::Alpha) throw std::invalid_argument("alpha state required");
  if (std::abs(alpha.norm2() - 1.0) > kNormTolerance)
    throw std::invalid_argument("alpha state must be normalized");
  const SingleQubitState b = encode_outcome(beta.p, beta.q);
  return PairState::from_amplitudes(
      {alpha.a0 * b.a0, alpha.a0 * b.a1, alpha.a1 * b.a0, alpha.a1 * b.a1});
}

PairState prepare_product(QubitOutcome beta) {
  return prepare_product(beta, SingleQubitState::alpha(1.0, 0.0));
}

PairState prepare_pair(PairKind kind, int q, double theta) {
  constexpr double kHalfPi = 1.5707963267948966192;
  switch (kind) {
    case PairKind::MaxEntangled:
      return PairState::from_amplitudes({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
    case PairKind::Protocol:
      theta = 0.25 * 3.14159265358979323846;
      [[fallthrough]];
    case PairKind::AlgIII: {
      require_bit(q, "q");
      if (!(theta > 0.0 && theta < kHalfPi))
        throw std::invalid_argument("theta must lie in (0, pi/2)");
      std::array<complexd, 4> amp{};
      add_beta_ket(amp, 0, 0, q, std::cos(theta));
      add_beta_ket(amp, 1, 1, q, std::sin(theta));
      return PairState::from_amplitudes(amp);
    }
    case PairKind::AlgIV: {
      require_bit(q, "q");
      if (!(theta > 0.0 && theta < kHalfPi))
        throw std::invalid_argument("theta must lie in (0, pi/2)");
      std::array<complexd, 4> amp{};
      add_beta_ket(amp, 0, 0, q, std::cos(theta));
      add_beta_ket(amp, 1, 1, 1 - q, std::sin(theta));
      return PairState::from_amplitudes(amp);
    }
    case PairKind::Product:
      return prepare_product(QubitOutcome{0, q});
    case PairKind::General:
      throw std::invalid_argument("use prepare_general for caller-supplied coefficients");
  }
  throw std::invalid_argument("unknown pair kind");
}

SingleQubitState conditional_alpha(int q, QubitOutcome beta_outcome, double theta) {
  const PairState pair = prepare_pair(PairKind::AlgIII, q, theta);
  return pair.residual_after(Half::Beta, MeasurementBasis::beta_conjugate(beta_outcome.p),
                             beta_outcome.q);
}

DensityMatrix2 reduced_rho_q(int q) {
  require_bit(q, "q");
  return (DensityMatrix2::pure(encode_outcome(0, q)) +
          DensityMatrix2::pure(encode_outcome(1, q))) *
         0.5;
}

double helstrom_success(const DensityMatrix2& rho0, const DensityMatrix2& rho1) {
  for (const DensityMatrix2* rho : {&rho0, &rho1}) {
    if (!rho->is_hermitian()) throw std::invalid_argument("helstrom_success: non-Hermitian input");
    if (!rho->is_unit_trace())
      throw std::invalid_argument("helstrom_success: input trace is not 1");
    if (!rho->is_psd()) throw std::invalid_argument("helstrom_success: input is not PSD");
  }
  const auto ev = (rho0 - rho1).eigenvalues_hermitian();
  const double trace_norm = std::abs(ev[0]) + std::abs(ev[1]);
  const double p = 0.5 + 0.25 * trace_norm;
  return p < 0.5 ? 0.5 : (p > 1.0 ? 1.0 : p);
}

double project_pair(const PairState& state, const PairState& target) {
  if (!state.intact()) throw std::logic_error("project_pair: state is no longer intact");
  const auto& s = state.amplitudes();
  const auto& t = target.amplitudes();
  double tn2 = 0.0;
  for (const auto& a : t) tn2 += std::norm(a);
  if (std::abs(tn2 - 1.0) > kNormTolerance)
    throw std::invalid_argument("project_pair: target is not normalized");
  complexd ip{0.0, 0.0};
  for (int i = 0; i < 4; ++i) ip += std::conj(t[i]) * s[i];
  return clamp01(std::norm(ip));
}

}  // namespace qcf
