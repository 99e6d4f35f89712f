#include "dfrc/fractional.hpp"

#include <cmath>

namespace dfrc {

namespace {

double jamming_power(const CVec& c, const CMat& W_n) {
  return W_n.size() == 0 ? 0.0 : (c.transpose() * W_n).squaredNorm();
}

} // namespace

LinkAuxiliary link_auxiliary(const CVec& c, const CVec& w, const CMat& W_n, double sigma2) {
  const cplx signal = (c.transpose() * w).value();
  const double amp = std::abs(signal);
  const double interference = jamming_power(c, W_n) + sigma2;
  LinkAuxiliary aux;
  aux.theta = amp > 0.0 ? std::arg(signal) : 0.0;
  // gamma first: alpha is evaluated at the refreshed gamma so the transform is exact.
  aux.gamma = amp * amp / interference;
  aux.alpha = std::sqrt(1.0 + aux.gamma) * amp / (amp * amp + interference);
  return aux;
}

double link_transform(const LinkAuxiliary& aux, const CVec& c, const CVec& w, const CMat& W_n,
                      double sigma2) {
  const double amp = std::abs((c.transpose() * w).value());
  const double total = amp * amp + jamming_power(c, W_n) + sigma2;
  return -aux.alpha * aux.alpha * total + 2.0 * aux.alpha * std::sqrt(1.0 + aux.gamma) * amp +
         std::log1p(aux.gamma) - aux.gamma;
}

AuxiliaryState update_auxiliaries(const CVec& c_u, const CVec& c_te, const CVec& w, const CMat& W_n,
                                  double sigma2_u, double sigma2_te) {
  const LinkAuxiliary u = link_auxiliary(c_u, w, W_n, sigma2_u);
  const LinkAuxiliary te = link_auxiliary(c_te, w, W_n, sigma2_te);
  return {u.alpha, u.gamma, te.alpha, te.gamma, u.theta, te.theta};
}

AuxiliaryState update_auxiliaries(const DesignState& d, const Scenario& s) {
  return update_auxiliaries(effective_user_channel(d.phi, s), effective_ed_channel(d.phi, s), d.w,
                            d.W_n, s.sigma2_u, s.sigma2_te);
}

TransformConstants transform_constants(const AuxiliaryState& aux, const CVec& c_u, const CVec& c_te,
                                       double sigma2_u, double sigma2_te) {
  TransformConstants k;
  k.c = std::log1p(aux.gamma_u) - aux.gamma_u - std::log1p(aux.gamma_te) + aux.gamma_te +
        aux.alpha_te * aux.alpha_te * sigma2_te - aux.alpha_u * aux.alpha_u * sigma2_u;
  k.v = 2.0 * aux.alpha_u * std::sqrt(1.0 + aux.gamma_u) * std::polar(1.0, -aux.theta_u) * c_u -
        2.0 * aux.alpha_te * std::sqrt(1.0 + aux.gamma_te) * std::polar(1.0, -aux.theta_te) * c_te;
  k.M = aux.alpha_te * aux.alpha_te * (c_te.conjugate() * c_te.transpose()) -
        aux.alpha_u * aux.alpha_u * (c_u.conjugate() * c_u.transpose());
  return k;
}

double transformed_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s) {
  const CVec c_u = effective_user_channel(d.phi, s);
  const CVec c_te = effective_ed_channel(d.phi, s);
  return link_transform({aux.alpha_u, aux.gamma_u, aux.theta_u}, c_u, d.w, d.W_n, s.sigma2_u) -
         link_transform({aux.alpha_te, aux.gamma_te, aux.theta_te}, c_te, d.w, d.W_n, s.sigma2_te);
}

double linearized_objective(const TransformConstants& k, const CVec& w, const CMat& W_n) {
  double quad = std::real(w.dot(k.M * w)); // w^H M w
  if (W_n.size() != 0) quad += std::real((W_n.adjoint() * k.M * W_n).trace());
  return k.c + std::real((k.v.transpose() * w).value()) + quad;
}

double linearized_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s) {
  const TransformConstants k = transform_constants(aux, effective_user_channel(d.phi, s),
                                                   effective_ed_channel(d.phi, s), s.sigma2_u,
                                                   s.sigma2_te);
  return linearized_objective(k, d.w, d.W_n);
}

} // namespace dfrc
