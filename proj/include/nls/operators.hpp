#pragma once

#include <string>

#include "nls/soliton.hpp"

namespace nls::ops {

enum class Sign { plus, minus };
enum class Kind { commutator, full };

// One symmetry block: spherical harmonic k for d = 3, parity for d = 1.
struct Block {
  int k = 0;
  bool odd = false;  // d = 1 only
};

// Linearization and commutator potentials built from the soliton.
// V- = g(R^2), V+ = g(R^2) + 2 g'(R^2) R^2, V1 = g + g' R^2, V2 = g' R^2,
// calV(+/-) = (1/2) r (V+/-)'.  Derivatives to order 3 are analytic (chain
// rule through the profile equation), never finite differences.
class PotentialSet {
 public:
  explicit PotentialSet(const soliton::Profile& R) : R_(&R) {}

  const Problem& problem() const { return R_->prob; }
  const soliton::Profile& R() const { return *R_; }

  double Vm(double r) const { return coeff(Sign::minus) * pow2s(r); }
  double Vp(double r) const { return coeff(Sign::plus) * pow2s(r); }
  double V1(double r) const { return (1.0 + problem().sigma) * pow2s(r); }
  double V2(double r) const { return problem().sigma * pow2s(r); }
  double calV(Sign s, double r) const;

  // out = {V, V', V'', V'''} for the requested sign.
  void derivs(Sign s, double r, double out[4]) const;

 private:
  double coeff(Sign s) const {
    return s == Sign::plus ? 1.0 + 2.0 * problem().sigma : 1.0;
  }
  double pow2s(double r) const;
  const soliton::Profile* R_;
};

// One radial operator block.  Commutator kind:
//   calL = -Delta_r + calV_sign + k(k+d-2)/r^2 - delta0 e^{-r^2}
// (no lambda term); full kind: L = -Delta_r + lambda - V_sign.  After
// regularize() the solution variable is the tilde one (u = r^k u_tilde) and
// the centrifugal term is absorbed into the drift (d-1+2k)/r.
struct RadialOperator {
  const PotentialSet* pot = nullptr;  // nullptr = zero potential (tests)
  Sign sign = Sign::plus;
  Kind kind = Kind::commutator;
  int d = 3;
  Block block;
  double delta0 = 0.0;
  double lambda = 1.0;
  bool regularized = false;

  int drift() const { return regularized ? d - 1 + 2 * block.k : d - 1; }
  double centrifugal() const {
    return regularized ? 0.0 : double(block.k) * (block.k + d - 2);
  }
  // Multiplicative potential Q with -u'' - drift/r u' + Q u = f.
  double Q(double r) const;
  std::string descriptor() const;
};

RadialOperator commutator_operator(const PotentialSet& pot, Sign sign,
                                   Block block, double delta0 = 0.0);
RadialOperator full_operator(const PotentialSet& pot, Sign sign,
                             Block block = {});
RadialOperator regularize(const RadialOperator& op);

}  // namespace nls::ops
