#include "dfrc/units.hpp"

#include <cmath>

namespace dfrc::units {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace dfrc::units
