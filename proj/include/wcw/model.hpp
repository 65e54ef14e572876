#pragma once

// Weighted spin systems and their energies.
//
// Convention used throughout the library (k_B = 1):
//   H(s) = -(1/(2n)) * sum_ij w_ij s_i s_j - h * sum_i s_i
//   Z    = sum_s exp(-H(s) / T)
// Diagonal terms w_ii are part of the quadratic sum.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace wcw {

enum class UnitKind { PlusMinusOne, ZeroOne };

const char* to_string(UnitKind kind);

class WeightedSystem {
 public:
  WeightedSystem(Eigen::MatrixXd w, double h, UnitKind kind = UnitKind::PlusMinusOne);

  // Every entry of w equal to j.
  static WeightedSystem constant_coupling(int n, double j, double h = 0.0,
                                          UnitKind kind = UnitKind::PlusMinusOne);

  int n() const { return static_cast<int>(w_.rows()); }
  const Eigen::MatrixXd& w() const { return w_; }
  double h() const { return h_; }
  UnitKind kind() const { return kind_; }

  WeightedSystem with_field(double h) const { return {w_, h, kind_}; }
  WeightedSystem with_coupling(Eigen::MatrixXd w) const { return {std::move(w), h_, kind_}; }

 private:
  Eigen::MatrixXd w_;
  double h_;
  UnitKind kind_;
};

struct BipartiteSystem {
  BipartiteSystem(Eigen::MatrixXd w, double h);

  int n_a() const { return static_cast<int>(w.rows()); }
  int n_b() const { return static_cast<int>(w.cols()); }

  Eigen::MatrixXd w;
  double h;  // acts on the b-layer
};

class Thermodynamics {
 public:
  explicit Thermodynamics(double temperature);
  static Thermodynamics from_beta(double beta);

  double temperature() const { return temperature_; }
  double beta() const { return beta_; }

 private:
  double temperature_;
  double beta_;
};

struct SpinState {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
};

// Throws a Dimension error if the length differs and a Domain error if an
// entry lies outside the unit domain of `kind`.
void validate_state(const SpinState& state, int n, UnitKind kind);

double energy(const WeightedSystem& system, const SpinState& state);

// Energy of an arbitrary real vector under the canonical Hamiltonian; no
// domain checks. Used by the mean-field and oracle code paths.
double energy(const Eigen::MatrixXd& w, double h, std::span<const double> x);

// Extended system with one extra unit clamped to +1 in position 0 and zero
// field: energy(extended, (1, s)) == energy(system, s) for every s.
WeightedSystem absorb_field(const WeightedSystem& system);

// Same construction for a per-unit field; reproduces
//   -(1/(2n)) s^T w s - sum_i fields_i s_i.
WeightedSystem absorb_fields(const Eigen::MatrixXd& w, std::span<const double> fields);

enum class BipartiteForm {
  Canonical,  // -(1/(2N)) a^T w b - h sum b, N = n_a + n_b
  Unnormalized,  // u^T w v, no 1/(2N) factor, no field term
};

const char* to_string(BipartiteForm form);

double energy_bipartite(const BipartiteSystem& system, const SpinState& a, const SpinState& b,
                        BipartiteForm form = BipartiteForm::Canonical);

}  // namespace wcw
