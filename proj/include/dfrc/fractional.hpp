#pragma once

#include "dfrc/metrics.hpp"

namespace dfrc {

/// Quadratic-transform auxiliaries for the user (u) and eavesdropper/target (te) links.
struct AuxiliaryState {
  double alpha_u = 0.0;
  double gamma_u = 0.0;
  double alpha_te = 0.0;
  double gamma_te = 0.0;
  double theta_u = 0.0;  ///< arg(c_u^T w) at the refresh point
  double theta_te = 0.0; ///< arg(c_te^T w) at the refresh point
};

/// Constants of the non-fractional objective c + Re(v^T w) + tr(M (W_n W_n^H + w w^H)).
/// M is Hermitian. v carries the phase references e^{-j theta}, so Re(v^T w) reproduces
/// the modulus terms at the refresh point.
struct TransformConstants {
  double c = 0.0;
  CVec v;
  CMat M;
};

struct LinkAuxiliary {
  double alpha = 0.0;
  double gamma = 0.0;
  double theta = 0.0;
};

/// gamma = SINR, alpha = sqrt(1+gamma)|c^T w| / (|c^T w|^2 + ||c^T W_n||^2 + sigma2),
/// theta = arg(c^T w) (0 when c^T w = 0).
LinkAuxiliary link_auxiliary(const CVec& c, const CVec& w, const CMat& W_n, double sigma2);

/// Lagrangian-dual / quadratic-transform expression of log(1 + SINR) at fixed auxiliaries:
/// -alpha^2 (|c^T w|^2 + ||c^T W_n||^2 + sigma2) + 2 alpha sqrt(1+gamma)|c^T w| + log(1+gamma) - gamma.
double link_transform(const LinkAuxiliary& aux, const CVec& c, const CVec& w, const CMat& W_n,
                      double sigma2);

AuxiliaryState update_auxiliaries(const DesignState& d, const Scenario& s);
AuxiliaryState update_auxiliaries(const CVec& c_u, const CVec& c_te, const CVec& w, const CMat& W_n,
                                  double sigma2_u, double sigma2_te);

TransformConstants transform_constants(const AuxiliaryState& aux, const CVec& c_u, const CVec& c_te,
                                       double sigma2_u, double sigma2_te);

/// Transformed secrecy objective using moduli |c^T w|; exact at update_auxiliaries(d).
double transformed_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s);

/// Same objective with |c^T w| replaced by Re(e^{-j theta} c^T w), i.e.
/// c + Re(v^T w) + tr(M (W_n W_n^H + w w^H)). This is the form the two sub-problems optimize;
/// it equals transformed_objective wherever arg(c^T w) = theta on both links.
double linearized_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s);
double linearized_objective(const TransformConstants& k, const CVec& w, const CMat& W_n);

} // namespace dfrc
