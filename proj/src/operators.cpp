#include "nls/operators.hpp"

#include <cmath>

namespace nls::ops {

double PotentialSet::pow2s(double r) const {
  return std::pow((*R_)(r), 2.0 * problem().sigma);
}

double PotentialSet::calV(Sign s, double r) const {
  // (1/2) r V' with V = c R^{2 sigma}:  V' = 2 sigma c R^{2 sigma - 1} R'.
  double sig = problem().sigma;
  double Rv = (*R_)(r);
  return coeff(s) * sig * r * std::pow(Rv, 2.0 * sig - 1.0) * R_->deriv(r);
}

void PotentialSet::derivs(Sign s, double r, double out[4]) const {
  double sig = problem().sigma;
  double c = coeff(s);
  double R0 = (*R_)(r), R1 = R_->deriv(r), R2 = R_->deriv2(r),
         R3 = R_->deriv3(r);
  double p = 2.0 * sig;
  out[0] = c * std::pow(R0, p);
  out[1] = c * p * std::pow(R0, p - 1) * R1;
  out[2] = c * p * ((p - 1) * std::pow(R0, p - 2) * R1 * R1 +
                    std::pow(R0, p - 1) * R2);
  out[3] = c * p * ((p - 1) * (p - 2) * std::pow(R0, p - 3) * R1 * R1 * R1 +
                    3 * (p - 1) * std::pow(R0, p - 2) * R1 * R2 +
                    std::pow(R0, p - 1) * R3);
}

double RadialOperator::Q(double r) const {
  double q = 0.0;
  if (kind == Kind::commutator) {
    if (pot) q += pot->calV(sign, r);
    q -= delta0 * std::exp(-r * r);
  } else {
    q += lambda;
    if (pot) q -= (sign == Sign::plus ? pot->Vp(r) : pot->Vm(r));
  }
  double cf = centrifugal();
  if (cf != 0.0) q += cf / (r * r);
  return q;
}

std::string RadialOperator::descriptor() const {
  std::string s = kind == Kind::commutator ? "calL" : "L";
  s += (sign == Sign::plus) ? "+" : "-";
  if (d == 3)
    s += " k=" + std::to_string(block.k);
  else
    s += block.odd ? " odd" : " even";
  if (delta0 > 0.0) s += " delta0=" + std::to_string(delta0);
  return s;
}

RadialOperator commutator_operator(const PotentialSet& pot, Sign sign,
                                   Block block, double delta0) {
  const Problem& p = pot.problem();
  if (p.d == 1 && block.k != 0)
    throw InvalidBlock("operators", "harmonic index requires d = 3");
  if (p.d == 3 && block.odd)
    throw InvalidBlock("operators", "parity blocks exist only for d = 1");
  if (block.k < 0) throw InvalidBlock("operators", "k must be >= 0");
  if (delta0 < 0.0) throw InvalidConfig("operators", "delta0 must be >= 0");
  RadialOperator op;
  op.pot = &pot;
  op.sign = sign;
  op.kind = Kind::commutator;
  op.d = p.d;
  op.block = block;
  op.delta0 = delta0;
  op.lambda = p.lambda;
  return op;
}

RadialOperator full_operator(const PotentialSet& pot, Sign sign, Block block) {
  RadialOperator op = commutator_operator(pot, sign, block, 0.0);
  op.kind = Kind::full;
  return op;
}

RadialOperator regularize(const RadialOperator& op) {
  if (op.block.k == 0) return op;  // no-op
  if (op.d != 3)
    throw InvalidBlock("operators", "regularization applies to d = 3 blocks");
  RadialOperator out = op;
  out.regularized = true;
  return out;
}

}  // namespace nls::ops
