#pragma once

// Flat-loss channel and NRZ slicer BER.
//
// Swings are differential peak-to-peak; the slicer sees half the eye
// against the rms input-referred noise, BER = Q(swing / 2 / noise).

#include <cmath>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "rxlink/errors.hpp"

namespace rxlink {

struct ChannelSpec {
  double loss_db = 0;    // dB, >= 0
  double tx_swing = 1.0; // V
};

inline void validate(const ChannelSpec& ch) {
  if (!(ch.loss_db >= 0)) throw ValidationError("channel: loss_db must be >= 0");
  if (!(ch.tx_swing > 0)) throw ValidationError("channel: tx_swing must be > 0");
}

enum class BerLabel { wireline, wireless, custom };

struct BerTarget {
  double ber = 1e-12;
  BerLabel label = BerLabel::custom;

  static BerTarget wireline() { return {1e-12, BerLabel::wireline}; }
  static BerTarget wireless() { return {1e-3, BerLabel::wireless}; }
  static BerTarget custom(double p) {
    if (!(p > 0 && p < 0.5)) throw ValidationError("BER target must lie in (0, 0.5)");
    if (p == 1e-12) return wireline();
    if (p == 1e-3) return wireless();
    return {p, BerLabel::custom};
  }
};

inline double rx_swing(const ChannelSpec& ch) {
  return ch.tx_swing * std::pow(10.0, -ch.loss_db / 20.0);
}

/// Standard normal upper tail.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Inverse of q_function on (0, 1).
inline double q_inverse(double p) {
  if (!(p > 0 && p < 1)) throw DomainError("q_inverse: probability must lie in (0, 1)");
  return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

/// BER of an NRZ slicer for amplitude ratio (half eye / rms noise).
inline double ber_from_snr(double snr_amplitude_ratio) {
  if (!(snr_amplitude_ratio >= 0)) throw DomainError("ber_from_snr: ratio must be >= 0");
  return q_function(snr_amplitude_ratio);
}

inline double ber_at(double swing, double noise_rms) {
  return ber_from_snr(0.5 * swing / noise_rms);
}

/// Loss at which a receiver with input noise `noise_rms` just meets the target.
inline double max_loss_for_ber(double noise_rms_at_input, double tx_swing,
                               const BerTarget& target) {
  if (!(noise_rms_at_input > 0) || !(tx_swing > 0))
    throw DomainError("max_loss_for_ber: inputs must be > 0");
  const double needed_swing = 2.0 * q_inverse(target.ber) * noise_rms_at_input;
  const double l = 20.0 * std::log10(tx_swing / needed_swing);
  if (l < 0)
    throw CapacityError("max_loss_for_ber: target missed even with a lossless channel",
                        q_function(0.5 * tx_swing / noise_rms_at_input));
  return l;
}

}  // namespace rxlink
