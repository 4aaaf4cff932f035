// SPDX-License-Identifier: Apache-2.0
#pragma once

// Physical-layer and market math for one BS-user pair: MRT over M Rayleigh
// branches gives a Gamma(M, theta)-distributed gain sum, from which outage,
// ergodic rate, throughput and the provider's utility follow.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moe/core/random.hpp"

namespace moe::wireless {

struct ChannelParams {
  int num_antennas = 10;
  double fading_scale = 6.0;  // mean of each |h_j|^2
  double distance = 10.0;     // meters
  double path_loss_exponent = 2.0;
  double noise_power = 1.0;   // watts
  double bandwidth = 1e6;     // Hz
  double outage_threshold = 10.0;  // linear SNR

  // Throws DomainError on the first violated invariant.
  void validate() const;
};

double db_to_linear(double db);

enum class QosMetric { OpComplement, DataRate, Throughput };

inline constexpr std::array<QosMetric, 3> kAllMetrics{QosMetric::OpComplement, QosMetric::DataRate,
                                                      QosMetric::Throughput};

std::string_view to_string(QosMetric metric);
QosMetric metric_from_string(std::string_view name);

struct QosBounds {
  double min = 0.0;
  double max = 1.0;
};

struct MarketParams {
  double payment_coeff = 1.0;
  double cost_coeff = 0.003;  // per watt
  std::vector<double> power_grid{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  double power_threshold = 50.0;
  // Indexed by QosMetric.
  std::array<QosBounds, 3> bounds{};

  const QosBounds& bounds_for(QosMetric metric) const { return bounds[static_cast<std::size_t>(metric)]; }
  QosBounds& bounds_for(QosMetric metric) { return bounds[static_cast<std::size_t>(metric)]; }

  void validate() const;
};

struct QosValue {
  QosMetric metric = QosMetric::OpComplement;
  double value = 0.0;
};

struct WirelessContext {
  ChannelParams channel;
  MarketParams market;
  int pair_index = 1;
  int num_pairs = 1;

  void validate() const;
};

/// Mean per-branch SNR, theta * P * D^-alpha / sigma^2.
double snr_scale(const ChannelParams& ch, double power);

/// Density of the post-MRT SNR at z.
double snr_pdf(double z, const ChannelParams& ch, double power);

/// Probability that the SNR falls below the outage threshold.
double outage_probability(const ChannelParams& ch, double power);

/// Ergodic rate B * E[log2(1 + SNR)] in bit/s, by adaptive quadrature.
double data_rate(const ChannelParams& ch, double power);

/// (1 - OP) * DR in bit/s.
double throughput(const ChannelParams& ch, double power);

QosValue qos_value(const ChannelParams& ch, QosMetric metric, double power);

/// (q - Q_min) / (Q_max - Q_min), unclamped.
double normalized_utility(const QosValue& q, const MarketParams& mp);

struct UtilityPoint {
  double power = 0.0;
  QosMetric metric = QosMetric::OpComplement;
  double qos = 0.0;
  double normalized = 0.0;
  double utility = 0.0;
  bool feasible = true;        // qos >= Q_min
  bool outside_bounds = false; // normalized value left [0, 1]
};

/// beta1 * F(Q(P)) - beta2 * P for any P in (0, P_th]; no grid membership check.
UtilityPoint evaluate_utility(const WirelessContext& ctx, QosMetric metric, double power);

/// As evaluate_utility, but P must be one of the market's grid powers.
UtilityPoint nsp_utility(const WirelessContext& ctx, QosMetric metric, double power);

struct PowerOptimum {
  double power = 0.0;
  double utility = 0.0;
  std::vector<UtilityPoint> sweep;  // one row per grid power, feasible or not
};

/// Exhaustive search over the grid; ties go to the lowest power.
PowerOptimum brute_force_optimal_power(const WirelessContext& ctx, QosMetric metric);

/// Fills the default normalization bounds: OP-complement (0, 1); DR and TP
/// (0, value at P_th). Bounds already marked as explicit are left alone.
MarketParams with_default_bounds(const ChannelParams& ch, MarketParams market,
                                 std::array<bool, 3> explicit_bounds = {false, false, false});

/// The scenario the evaluation is run at (M=10, theta=6, D=10, alpha=2,
/// sigma^2=1, B=1 MHz, 10 dB threshold, beta1=1, beta2=0.003).
WirelessContext default_wireless_context();

/// Calls visit(snr) for n channel draws: M exponential gains of mean theta.
template <class Visitor>
void for_each_snr_sample(const ChannelParams& ch, double power, std::size_t n, std::uint64_t seed,
                         Visitor&& visit) {
  const double gain = snr_scale(ch, power) / ch.fading_scale;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < ch.num_antennas; ++j) sum += exponential(rng, ch.fading_scale);
    visit(gain * sum);
  }
}

std::vector<double> sample_snr_monte_carlo(const ChannelParams& ch, double power, std::size_t n,
                                           std::uint64_t seed);

// --- sweep tables ---------------------------------------------------------

/// Evenly spaced powers from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Number of entries strictly greater than every neighbour that exists.
std::size_t count_local_maxima(std::span<const double> values);

/// 12 significant digits, printf %.12g.
std::string format_sig12(double value);

inline constexpr std::string_view kSweepCsvHeader = "P_watts,metric,qos_value,F,utility,feasible";

void write_sweep_csv(std::ostream& out, std::span<const UtilityPoint> rows);

}  // namespace moe::wireless
