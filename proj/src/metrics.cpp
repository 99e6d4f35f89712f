#include "dfrc/metrics.hpp"

#include <cmath>

namespace dfrc {

double link_sinr(const CVec& c, const CVec& w, const CMat& W_n, double sigma2) {
  const double signal = std::norm((c.transpose() * w).value());
  const double jamming = W_n.size() == 0 ? 0.0 : (c.transpose() * W_n).squaredNorm();
  return signal / (jamming + sigma2);
}

double link_rate(const CVec& c, const CVec& w, const CMat& W_n, double sigma2) {
  return std::log1p(link_sinr(c, w, W_n, sigma2));
}

double radar_snr(const CVec& w, const CMat& W_n, const CMat& cascade, double sigma2_r) {
  double echo = (cascade * w).squaredNorm();
  if (W_n.size() != 0) echo += (cascade * W_n).squaredNorm();
  return echo / sigma2_r;
}

double radar_snr(const DesignState& d, const Scenario& s) {
  return radar_snr(d.w, d.W_n, radar_cascade_channel(d.phi, s), s.sigma2_r);
}

double user_rate(const DesignState& d, const Scenario& s) {
  return link_rate(effective_user_channel(d.phi, s), d.w, d.W_n, s.sigma2_u);
}

double ed_rate(const DesignState& d, const Scenario& s) {
  return link_rate(effective_ed_channel(d.phi, s), d.w, d.W_n, s.sigma2_te);
}

double secrecy_rate(const DesignState& d, const Scenario& s) { return user_rate(d, s) - ed_rate(d, s); }

} // namespace dfrc
