#include "txseq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "txseq/random.hpp"

namespace txseq {

SyntheticProfile parse_profile(std::string_view name) {
  if (name == "sui" || name == "sui_like") return SyntheticProfile::Sui;
  if (name == "eth" || name == "eth_like") return SyntheticProfile::Eth;
  throw std::invalid_argument("unknown synthetic profile '" + std::string(name) + "'");
}

std::string_view to_string(SyntheticProfile profile) {
  return profile == SyntheticProfile::Sui ? "sui" : "eth";
}

SyntheticParams SyntheticParams::preset(SyntheticProfile profile) {
  SyntheticParams p;
  if (profile == SyntheticProfile::Eth) {
    p.exec_log_median = 11.3;
    p.exec_log_sigma = 0.9;
    p.exec_min = 21000;
    p.exec_max = 3000000;
  }
  return p;
}

namespace {

double normal(Rng& rng) {
  const double u1 = (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = rng.unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t poisson(Rng& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::size_t k = 0;
  double prod = rng.unit();
  while (prod > limit) {
    ++k;
    prod *= rng.unit();
  }
  return k;
}

class Zipf {
 public:
  Zipf(std::size_t n, double s) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cdf_[i] = acc;
    }
    for (double& c : cdf_) c /= acc;
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.unit();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

Time exec_time(Rng& rng, const SyntheticParams& p, double& z_out) {
  z_out = normal(rng);
  const double t = std::exp(p.exec_log_median + p.exec_log_sigma * z_out);
  return std::clamp<Time>(static_cast<Time>(std::llround(t)), p.exec_min, p.exec_max);
}

}  // namespace

std::vector<DatasetRecord> generate_synthetic(SyntheticProfile profile, std::size_t n,
                                              std::uint64_t seed) {
  return generate_synthetic(profile, n, seed, SyntheticParams::preset(profile));
}

std::vector<DatasetRecord> generate_synthetic(SyntheticProfile profile, std::size_t n,
                                              std::uint64_t seed, const SyntheticParams& p) {
  Rng rng(derive_seed(seed, {profile == SyntheticProfile::Sui ? 1u : 2u}));
  std::vector<DatasetRecord> out;
  out.reserve(n);
  const std::string prefix = profile == SyntheticProfile::Sui ? "sui-" : "eth-";

  if (profile == SyntheticProfile::Eth) {
    double base_fee = p.base_fee_start;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && i % p.txs_per_base_fee == 0) {
        base_fee *= std::exp(p.base_fee_step_sigma * normal(rng));
      }
      DatasetRecord r;
      r.id = prefix + std::to_string(i);
      double z = 0.0;
      r.exec_time = exec_time(rng, p, z);
      const double tip = std::exp(p.tip_log_median + p.tip_log_sigma * normal(rng));
      r.gas_price = base_fee * (1.0 + tip);
      r.base_fee = base_fee;
      out.push_back(std::move(r));
    }
    return out;
  }

  const Zipf zipf(p.global_objects, p.global_zipf);
  const Zipf hot(p.hot_set_size, p.hot_zipf);
  for (std::size_t i = 0; i < n; ++i) {
    DatasetRecord r;
    r.id = prefix + std::to_string(i);
    double z = 0.0;
    r.exec_time = exec_time(rng, p, z);
    const double lambda = std::exp(p.objects_log_lambda + p.objects_slope * z);
    const std::size_t k = std::min(p.objects_max, 1 + poisson(rng, lambda));
    const std::size_t hot_base = i / p.hot_shift_every;
    for (std::size_t j = 0; j < k; ++j) {
      const double u = rng.unit();
      std::string name;
      if (u < p.p_hot) {
        const std::size_t rank = p.hot_zipf > 0.0 ? hot.draw(rng) : rng.uniform(p.hot_set_size);
        name = "h" + std::to_string(hot_base + rank);
      } else if (u < p.p_hot + p.p_global) {
        name = "g" + std::to_string(zipf.draw(rng));
      } else {
        name = "p" + std::to_string(i) + "." + std::to_string(j);
      }
      if (std::find(r.writes.begin(), r.writes.end(), name) == r.writes.end()) {
        r.writes.push_back(std::move(name));
      }
    }
    r.gas_price = p.gas_reference;
    if (rng.bernoulli(p.p_premium)) {
      r.gas_price *= 1.0 + std::abs(p.premium_log_sigma * normal(rng));
    }
    r.gas_price = std::round(r.gas_price);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace txseq
