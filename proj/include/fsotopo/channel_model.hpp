#pragma once

#include "fsotopo/network.hpp"

namespace fsotopo {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
inline double mrad_to_rad(double mrad) { return mrad * 1e-3; }

// Received power after geometric spreading of a diverging beam:
//   p_tx * (D / (D + 100 * d * theta))^2
// with D and d in meters and theta in radians.
double geometric_loss(double p_tx_mw, double diameter_m, double distance_m,
                      double theta_rad);

// Inverse-power RF path loss, p_tx * g_ref * (1 m / d)^alpha, d clamped to 1 m.
double rf_path_loss(double p_tx_mw, double distance_m,
                    const ChannelParams& channel);

// Non-coherent binary FSK. Throws std::domain_error for p_noise <= 0.
double ber_rf_fsk(double p_rx_mw, double p_noise_mw, BerMode mode);

// On-off keying: 1/2 erfc(R * Pr / (2 sqrt(2) Pn)).
double ber_fso_ook(double p_rx_mw, double responsivity, double p_noise_mw);

// Power seen by a receiver at distance_m when `tx` sends p_tx_mw with beam
// opening theta_rad (ignored for RF).
double received_power(const TransceiverSpec& tx, double p_tx_mw,
                      double distance_m, double theta_rad,
                      const ChannelParams& channel);

double link_ber(TransceiverKind kind, double p_rx_mw,
                const ChannelParams& channel);

// Largest distance at which the received power still reaches the
// sensitivity. Returns 0 when p_tx is below the sensitivity and
// channel.range_cap_m when the beam does not diverge.
double max_range(const TransceiverSpec& tx, double p_tx_mw, double theta_rad,
                 const ChannelParams& channel);

// Same, against an explicit receiver sensitivity in mW.
double max_range(const TransceiverSpec& tx, double p_tx_mw, double theta_rad,
                 const ChannelParams& channel, double sensitivity_mw);

}  // namespace fsotopo
