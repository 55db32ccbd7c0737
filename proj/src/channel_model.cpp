#include "fsotopo/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsotopo {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (!(mw > 0.0)) throw std::domain_error("mw_to_dbm: power must be > 0");
  return 10.0 * std::log10(mw);
}

double geometric_loss(double p_tx_mw, double diameter_m, double distance_m,
                      double theta_rad) {
  const double ratio = diameter_m / (diameter_m + 100.0 * distance_m * theta_rad);
  return p_tx_mw * ratio * ratio;
}

double rf_path_loss(double p_tx_mw, double distance_m,
                    const ChannelParams& channel) {
  const double d = std::max(distance_m, 1.0);
  return p_tx_mw * channel.rf_reference_gain *
         std::pow(d, -channel.rf_pathloss_exponent);
}

double ber_rf_fsk(double p_rx_mw, double p_noise_mw, BerMode mode) {
  if (!(p_noise_mw > 0.0)) {
    throw std::domain_error("ber_rf_fsk: noise power must be > 0");
  }
  const double arg = p_rx_mw / (2.0 * p_noise_mw);
  if (mode == BerMode::kLiteral) {
    return std::clamp(0.5 * std::erfc(-arg), 0.0, 1.0);
  }
  return 0.5 * std::erfc(arg);
}

double ber_fso_ook(double p_rx_mw, double responsivity, double p_noise_mw) {
  if (!(p_noise_mw > 0.0)) {
    throw std::domain_error("ber_fso_ook: noise power must be > 0");
  }
  if (!(responsivity > 0.0)) {
    throw std::domain_error("ber_fso_ook: responsivity must be > 0");
  }
  return 0.5 * std::erfc(responsivity * p_rx_mw /
                         (2.0 * std::sqrt(2.0) * p_noise_mw));
}

double received_power(const TransceiverSpec& tx, double p_tx_mw,
                      double distance_m, double theta_rad,
                      const ChannelParams& channel) {
  if (tx.is_fso()) {
    return geometric_loss(p_tx_mw, tx.diameter_m, distance_m, theta_rad);
  }
  return rf_path_loss(p_tx_mw, distance_m, channel);
}

double link_ber(TransceiverKind kind, double p_rx_mw,
                const ChannelParams& channel) {
  if (kind == TransceiverKind::kFso) {
    return ber_fso_ook(p_rx_mw, channel.responsivity, channel.p_noise_fso_mw);
  }
  return ber_rf_fsk(p_rx_mw, channel.p_noise_rf_mw, channel.ber_mode);
}

double max_range(const TransceiverSpec& tx, double p_tx_mw, double theta_rad,
                 const ChannelParams& channel) {
  return max_range(tx, p_tx_mw, theta_rad, channel,
                   dbm_to_mw(tx.sensitivity_dbm));
}

double max_range(const TransceiverSpec& tx, double p_tx_mw, double theta_rad,
                 const ChannelParams& channel, double sensitivity_mw) {
  if (!(p_tx_mw > 0.0) || p_tx_mw < sensitivity_mw) return 0.0;
  if (tx.is_fso()) {
    if (theta_rad <= 0.0) return channel.range_cap_m;
    const double d = tx.diameter_m * (std::sqrt(p_tx_mw / sensitivity_mw) - 1.0) /
                     (100.0 * theta_rad);
    return std::min(d, channel.range_cap_m);
  }
  // Received power is flat below 1 m, so no range exists if even that is too weak.
  const double at_one_meter = p_tx_mw * channel.rf_reference_gain;
  if (at_one_meter < sensitivity_mw) return 0.0;
  const double d = std::pow(at_one_meter / sensitivity_mw,
                            1.0 / channel.rf_pathloss_exponent);
  return std::min(d, channel.range_cap_m);
}

}  // namespace fsotopo
