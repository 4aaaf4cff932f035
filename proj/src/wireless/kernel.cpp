// SPDX-License-Identifier: Apache-2.0
#include "moe/wireless/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "moe/core/errors.hpp"
#include "moe/wireless/quadrature.hpp"
#include "moe/wireless/special.hpp"

namespace moe::wireless {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void require_power(double power) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw DomainError("transmit power must be positive and finite, got " + std::to_string(power));
  }
}

bool on_grid(const std::vector<double>& grid, double power) {
  return std::any_of(grid.begin(), grid.end(), [power](double p) {
    return std::abs(p - power) <= 1e-12 * std::max(1.0, std::abs(p));
  });
}

}  // namespace

void ChannelParams::validate() const {
  require(num_antennas >= 1, "num_antennas must be >= 1");
  require(fading_scale > 0.0 && std::isfinite(fading_scale), "fading_scale must be positive");
  require(distance > 0.0 && std::isfinite(distance), "distance must be positive");
  require(path_loss_exponent > 0.0 && std::isfinite(path_loss_exponent), "path_loss_exponent must be positive");
  require(noise_power > 0.0 && std::isfinite(noise_power), "noise_power must be positive");
  require(bandwidth >= 0.0 && std::isfinite(bandwidth), "bandwidth must be nonnegative");
  require(outage_threshold >= 0.0 && std::isfinite(outage_threshold), "outage_threshold must be nonnegative");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string_view to_string(QosMetric metric) {
  switch (metric) {
    case QosMetric::OpComplement: return "OP-complement";
    case QosMetric::DataRate: return "DR";
    case QosMetric::Throughput: return "TP";
  }
  return "?";
}

QosMetric metric_from_string(std::string_view name) {
  for (QosMetric m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown QoS metric '" + std::string(name) + "'");
}

void MarketParams::validate() const {
  require(payment_coeff >= 0.0 && std::isfinite(payment_coeff), "payment_coeff must be nonnegative");
  require(cost_coeff >= 0.0 && std::isfinite(cost_coeff), "cost_coeff must be nonnegative");
  require(power_threshold > 0.0 && std::isfinite(power_threshold), "power_threshold must be positive");
  require(!power_grid.empty(), "power_grid must be nonempty");
  for (std::size_t i = 0; i < power_grid.size(); ++i) {
    require(power_grid[i] > 0.0 && std::isfinite(power_grid[i]), "power_grid entries must be positive");
    require(power_grid[i] <= power_threshold, "power_grid entry exceeds power_threshold");
    if (i > 0) require(power_grid[i] > power_grid[i - 1], "power_grid must be strictly increasing");
  }
  for (const QosBounds& b : bounds) {
    require(b.max > b.min, "qos_max must exceed qos_min");
  }
}

void WirelessContext::validate() const {
  channel.validate();
  market.validate();
  require(num_pairs >= 1 && pair_index >= 1 && pair_index <= num_pairs, "pair_index out of range");
}

double snr_scale(const ChannelParams& ch, double power) {
  return ch.fading_scale * power * std::pow(ch.distance, -ch.path_loss_exponent) / ch.noise_power;
}

double snr_pdf(double z, const ChannelParams& ch, double power) {
  require_power(power);
  if (!(z >= 0.0)) throw DomainError("snr_pdf: z must be nonnegative");
  const double scale = snr_scale(ch, power);
  const int m = ch.num_antennas;
  if (z == 0.0) return m == 1 ? 1.0 / scale : 0.0;
  const double log_pdf = (m - 1) * std::log(z) - z / scale - m * std::log(scale) - std::lgamma(m);
  return std::exp(log_pdf);
}

double outage_probability(const ChannelParams& ch, double power) {
  require_power(power);
  if (ch.outage_threshold == 0.0) return 0.0;
  return regularized_lower_gamma(ch.num_antennas, ch.outage_threshold / snr_scale(ch, power));
}

double data_rate(const ChannelParams& ch, double power) {
  require_power(power);
  if (ch.bandwidth == 0.0) return 0.0;
  const double scale = snr_scale(ch, power);
  const double m = ch.num_antennas;
  const double log_norm = std::lgamma(m);
  // Substituting z = scale * y turns the density into the Gamma(M, 1) kernel.
  auto integrand = [scale, m, log_norm](double y) {
    if (y <= 0.0) return 0.0;
    return std::log1p(scale * y) * std::exp((m - 1.0) * std::log(y) - y - log_norm);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_evaluations = 1'000'000;
  const QuadratureResult r = integrate_to_infinity(integrand, 0.0, opts);
  return ch.bandwidth * r.value / std::numbers::ln2;
}

double throughput(const ChannelParams& ch, double power) {
  return (1.0 - outage_probability(ch, power)) * data_rate(ch, power);
}

QosValue qos_value(const ChannelParams& ch, QosMetric metric, double power) {
  switch (metric) {
    case QosMetric::OpComplement: return {metric, 1.0 - outage_probability(ch, power)};
    case QosMetric::DataRate: return {metric, data_rate(ch, power)};
    case QosMetric::Throughput: return {metric, throughput(ch, power)};
  }
  throw DomainError("qos_value: bad metric");
}

double normalized_utility(const QosValue& q, const MarketParams& mp) {
  const QosBounds& b = mp.bounds_for(q.metric);
  if (!(b.max > b.min)) throw DomainError("normalized_utility: qos_max must exceed qos_min");
  return (q.value - b.min) / (b.max - b.min);
}

UtilityPoint evaluate_utility(const WirelessContext& ctx, QosMetric metric, double power) {
  require_power(power);
  if (power > ctx.market.power_threshold) {
    throw ConstraintError("power " + std::to_string(power) + " W exceeds threshold " +
                          std::to_string(ctx.market.power_threshold) + " W");
  }
  const QosValue q = qos_value(ctx.channel, metric, power);
  UtilityPoint pt;
  pt.power = power;
  pt.metric = metric;
  pt.qos = q.value;
  pt.normalized = normalized_utility(q, ctx.market);
  pt.utility = ctx.market.payment_coeff * pt.normalized - ctx.market.cost_coeff * power;
  pt.feasible = q.value >= ctx.market.bounds_for(metric).min;
  pt.outside_bounds = pt.normalized < 0.0 || pt.normalized > 1.0;
  return pt;
}

UtilityPoint nsp_utility(const WirelessContext& ctx, QosMetric metric, double power) {
  if (!on_grid(ctx.market.power_grid, power)) {
    throw ConstraintError("power " + std::to_string(power) + " W is not on the power grid");
  }
  return evaluate_utility(ctx, metric, power);
}

PowerOptimum brute_force_optimal_power(const WirelessContext& ctx, QosMetric metric) {
  PowerOptimum best;
  bool found = false;
  for (double p : ctx.market.power_grid) {
    if (p > ctx.market.power_threshold) continue;
    UtilityPoint pt = nsp_utility(ctx, metric, p);
    if (pt.feasible && (!found || pt.utility > best.utility)) {
      best.power = p;
      best.utility = pt.utility;
      found = true;
    }
    best.sweep.push_back(pt);
  }
  if (!found) {
    throw InfeasibleError("no grid power satisfies the constraints for metric " + std::string(to_string(metric)));
  }
  return best;
}

MarketParams with_default_bounds(const ChannelParams& ch, MarketParams market, std::array<bool, 3> explicit_bounds) {
  for (QosMetric m : kAllMetrics) {
    if (explicit_bounds[static_cast<std::size_t>(m)]) continue;
    QosBounds& b = market.bounds_for(m);
    b.min = 0.0;
    b.max = m == QosMetric::OpComplement ? 1.0 : qos_value(ch, m, market.power_threshold).value;
  }
  return market;
}

WirelessContext default_wireless_context() {
  WirelessContext ctx;
  ctx.channel.outage_threshold = db_to_linear(10.0);
  ctx.market = with_default_bounds(ctx.channel, ctx.market);
  return ctx;
}

std::vector<double> sample_snr_monte_carlo(const ChannelParams& ch, double power, std::size_t n, std::uint64_t seed) {
  ch.validate();
  require_power(power);
  if (n == 0) throw DomainError("sample_snr_monte_carlo: n must be >= 1");
  std::vector<double> out;
  out.reserve(n);
  for_each_snr_sample(ch, power, n, seed, [&out](double snr) { out.push_back(snr); });
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out;
  if (points == 0) return out;
  if (points == 1) return {lo};
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return out;
}

std::size_t count_local_maxima(std::span<const double> values) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool above_left = i == 0 || values[i] > values[i - 1];
    const bool above_right = i + 1 == values.size() || values[i] > values[i + 1];
    if (above_left && above_right && values.size() > 1) ++count;
  }
  return count;
}

std::string format_sig12(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const UtilityPoint> rows) {
  out << kSweepCsvHeader << '\n';
  for (const UtilityPoint& r : rows) {
    out << format_sig12(r.power) << ',' << to_string(r.metric) << ',' << format_sig12(r.qos) << ','
        << format_sig12(r.normalized) << ',' << format_sig12(r.utility) << ',' << (r.feasible ? "true" : "false")
        << '\n';
  }
}

}  // namespace moe::wireless
