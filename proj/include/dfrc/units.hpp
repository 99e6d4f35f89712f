#pragma once

namespace dfrc::units {

// Power ratio in dB to linear scale.
double db_to_linear(double db);
// Power in dBm to watts.
double dbm_to_watts(double dbm);
// Amplitude quantity given in dB (20 log10 convention) to linear amplitude.
double db_to_amplitude(double db);
double linear_to_db(double linear);

} // namespace dfrc::units
