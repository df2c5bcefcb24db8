// Exact simulation of the protocol's two-qubit systems.
//
// Qubit notation: a beta qubit state is written |p,q> where p = 0,1 selects
// the basis (0 computational, 1 diagonal) and q = 0,1 selects the eigenstate.
// |1,0> = (|0,0> + |0,1>)/sqrt(2), |1,1> = (|0,0> - |0,1>)/sqrt(2).
//
// A pair alpha (x) beta lives in the 4-dimensional product space spanned by
// {|x>,|y>} (x) {|0,0>,|0,1>}, amplitude index 2*a + b. Diagonal-basis kets
// are expanded to computational amplitudes at construction. Measuring one
// half collapses the other half to an exact conditional residual; each half
// can be measured exactly once.

#pragma once

#include <array>
#include <complex>

#include "qcf/rng.hpp"

namespace qcf {

using complexd = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

// One beta-qubit measurement result or announcement, |p,q>.
struct QubitOutcome {
  int p = 0;  // basis bit
  int q = 0;  // eigenstate bit
  friend bool operator==(const QubitOutcome&, const QubitOutcome&) = default;
};

enum class Half { Alpha, Beta };

// Pure single-qubit state. Amplitudes are over {|x>,|y>} for alpha qubits
// and over the computational pair {|0,0>,|0,1>} for beta qubits.
struct SingleQubitState {
  complexd a0{0.0, 0.0};
  complexd a1{0.0, 0.0};
  Half role = Half::Beta;

  double norm2() const { return std::norm(a0) + std::norm(a1); }
  complexd inner(const SingleQubitState& other) const {
    return std::conj(a0) * other.a0 + std::conj(a1) * other.a1;
  }
  // |<this|other>|^2
  double overlap(const SingleQubitState& other) const { return std::norm(inner(other)); }

  static SingleQubitState alpha(complexd x, complexd y);
  static SingleQubitState beta(complexd b0, complexd b1);
};

// The pure state |p,q> in computational amplitudes.
SingleQubitState encode_outcome(int p, int q);

// Orthonormal measurement basis for one half. first/second are the two
// outcome states; outcome index 0 means "collapsed to first".
struct MeasurementBasis {
  SingleQubitState first;
  SingleQubitState second;

  // {|x>,|y>}
  static MeasurementBasis alpha_xy();
  // {(|x>+|y>)/sqrt2, (|x>-|y>)/sqrt2}
  static MeasurementBasis alpha_diagonal();
  // beta conjugate basis p: {|p,0>, |p,1>}
  static MeasurementBasis beta_conjugate(int p);
  // {state, orthogonal complement}; role taken from `state`
  static MeasurementBasis around(const SingleQubitState& state);
};

enum class PairKind { MaxEntangled, AlgIII, AlgIV, Protocol, Product, General };

enum class PairStatus { Intact, AlphaMeasured, BetaMeasured, BothMeasured };

// 2x2 complex matrix; used for reduced beta states.
struct DensityMatrix2 {
  std::array<std::array<complexd, 2>, 2> m{};

  complexd trace() const { return m[0][0] + m[1][1]; }
  bool is_hermitian(double tol = kNormTolerance) const;
  bool is_unit_trace(double tol = kNormTolerance) const;
  bool is_psd(double tol = kNormTolerance) const;
  // Closed-form eigenvalues of a Hermitian 2x2 (ascending).
  std::array<double, 2> eigenvalues_hermitian() const;
  // Orthonormal eigenvectors matching eigenvalues_hermitian() order.
  std::array<SingleQubitState, 2> eigenvectors_hermitian(Half role) const;

  static DensityMatrix2 pure(const SingleQubitState& s);
  DensityMatrix2 operator+(const DensityMatrix2& o) const;
  DensityMatrix2 operator-(const DensityMatrix2& o) const;
  DensityMatrix2 operator*(double c) const;
};

class PairState {
 public:
  PairState() = default;

  // Throws std::invalid_argument unless the 4-vector is normalized.
  static PairState from_amplitudes(const std::array<complexd, 4>& amp);

  PairStatus status() const { return status_; }
  bool intact() const { return status_ == PairStatus::Intact; }
  bool alpha_measured() const;
  bool beta_measured() const;

  // Intact only.
  const std::array<complexd, 4>& amplitudes() const;

  // ---- exact (non-sampling, non-mutating) queries; Intact only ----

  // Born probability of outcome k in `basis` on the given half.
  double outcome_probability(Half half, const MeasurementBasis& basis, int k) const;

  // Conditional state of the other half after outcome k on `half`.
  // Throws std::domain_error on a zero-amplitude branch.
  SingleQubitState residual_after(Half half, const MeasurementBasis& basis, int k) const;

  // Reduced density matrix of the beta half.
  DensityMatrix2 reduced_beta() const;

  // ---- sampling measurements (collapse; a half can be measured once) ----

  // Conjugate-basis beta measurement; returns |p',q'> with p' = basis_p.
  QubitOutcome measure_beta(int basis_p, RandomStream& rng);
  // Arbitrary-basis measurements; return the outcome index.
  int measure_beta_general(const MeasurementBasis& basis, RandomStream& rng);
  int measure_alpha(const MeasurementBasis& basis, RandomStream& rng);

  // Re-measurement of a half that has already collapsed (e.g. a handed-over
  // alpha the sender measured first): acts on the stored single-qubit state.
  int measure_collapsed(Half half, const MeasurementBasis& basis, RandomStream& rng);

  // Collapsed state of the not-yet-measured half (exactly one half measured).
  const SingleQubitState& residual() const;

  // Joint amplitudes regardless of status: the live 4-vector while intact,
  // else the product of the collapsed/conditional halves.
  std::array<complexd, 4> effective_joint() const;

  // Projective pair measurement {|target><target|, complement}: draws against
  // the overlap of the current joint state with `target` and collapses to the
  // corresponding post-measurement state (intact again either way).
  bool project_and_collapse(const PairState& target, RandomStream& rng);

 private:
  int measure_half(Half half, const MeasurementBasis& basis, RandomStream& rng);

  std::array<complexd, 4> amp_{};
  PairStatus status_ = PairStatus::BothMeasured;  // default-constructed is inert
  SingleQubitState alpha_state_{};  // meaningful once any half is measured
  SingleQubitState beta_state_{};
};

// State constructors for the pair families the protocol and the detection
// algorithms use. `q` and `theta` are ignored where a family does not use
// them; theta must lie in (0, pi/2) where used.
//   MaxEntangled: (|x>|0,0> + |y>|0,1>)/sqrt2
//   AlgIII:       cos(theta)|x>|0,q> + sin(theta)|y>|1,q>
//   AlgIV:        cos(theta)|x>|0,q> + sin(theta)|y>|1,~q>
//   Protocol:     AlgIII with theta = pi/4
//   Product:      |p,q> beta with alpha in the reference state |x> (see
//                 prepare_product for arbitrary p)
PairState prepare_pair(PairKind kind, int q, double theta);

// c_x|x>|0,0> + c_y|y>|1,0> + c_xp|x>|0,1> + c_yp|y>|1,1>, normalized.
// Throws std::invalid_argument for a non-normalizable coefficient set.
PairState prepare_general(complexd c_x, complexd c_y, complexd c_xp, complexd c_yp);

// Unentangled alpha (x) |p,q> beta.
PairState prepare_product(QubitOutcome beta, const SingleQubitState& alpha);
PairState prepare_product(QubitOutcome beta);  // alpha = |x>

// Normalized alpha state conditional on Bob's beta outcome, for the AlgIII
// family state with parameters (q, theta). Throws std::domain_error if the
// branch has zero amplitude.
SingleQubitState conditional_alpha(int q, QubitOutcome beta_outcome, double theta);

// Reduced beta density matrix of the protocol-family pair state for q.
DensityMatrix2 reduced_rho_q(int q);

// 1/2 + (1/4) * trace norm of (rho0 - rho1): optimal equal-prior two-state
// discrimination probability. Validates both inputs as density matrices.
double helstrom_success(const DensityMatrix2& rho0, const DensityMatrix2& rho1);

// |<target|state>|^2 of two intact pairs. A Bernoulli draw against this value
// implements the collective projection check.
double project_pair(const PairState& state, const PairState& target);

}  // namespace qcf
