#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tapearm/stiffness.hpp"

namespace tapearm {
namespace {

struct Folded {
  double angle;
  double moment;
};

struct Params4 {
  double peak_moment;
  double peak_angle;
  double propagation_moment;
  double decay_angle;

  MomentBranch branch() const { return {peak_moment, peak_angle, propagation_moment, decay_angle}; }
};

double sse(const std::vector<Folded>& data, const Params4& p) {
  const auto b = p.branch();
  double total = 0.0;
  for (const auto& d : data) {
    const double r = b.magnitude(d.angle) - d.moment;
    total += r * r;
  }
  return total;
}

bool admissible(const Params4& p) {
  return p.peak_angle > 0 && p.decay_angle > 0 && std::isfinite(p.peak_moment) &&
         std::isfinite(p.propagation_moment);
}

// Linear least squares of M ~ plateau + amp * exp(-(theta - origin) / tau).
struct ExpFit {
  double plateau;
  double amp;
  double sse;
};

std::optional<ExpFit> fit_exponential(std::span<const Folded> post, double origin, double tau) {
  double s11 = 0, s1e = 0, see = 0, s1m = 0, sem = 0;
  for (const auto& d : post) {
    const double e = std::exp(-(d.angle - origin) / tau);
    s11 += 1.0;
    s1e += e;
    see += e * e;
    s1m += d.moment;
    sem += e * d.moment;
  }
  const double det = s11 * see - s1e * s1e;
  if (!(std::abs(det) > 1e-14 * s11 * see)) return std::nullopt;
  ExpFit f;
  f.plateau = (see * s1m - s1e * sem) / det;
  f.amp = (s11 * sem - s1e * s1m) / det;
  f.sse = 0.0;
  for (const auto& d : post) {
    const double r = f.plateau + f.amp * std::exp(-(d.angle - origin) / tau) - d.moment;
    f.sse += r * r;
  }
  return f;
}

// Best decay angle for the post-peak tail: log-spaced scan then golden section.
std::optional<std::pair<double, ExpFit>> fit_tail(std::span<const Folded> post) {
  const double origin = post.front().angle;
  const double span = post.back().angle - origin;
  if (!(span > 0)) return std::nullopt;
  auto cost = [&](double log_tau) {
    auto f = fit_exponential(post, origin, std::exp(log_tau));
    return f ? f->sse : std::numeric_limits<double>::infinity();
  };
  const double lo = std::log(span * 1e-3);
  const double hi = std::log(span * 1e2);
  constexpr int kScan = 160;
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double c = cost(lo + (hi - lo) * i / kScan);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  if (!std::isfinite(best_cost)) return std::nullopt;
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kScan;
  double b = lo + (hi - lo) * std::min(best + 1, kScan) / kScan;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 120 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = cost(d);
    }
  }
  const double tau = std::exp((a + b) / 2.0);
  auto f = fit_exponential(post, origin, tau);
  if (!f) return std::nullopt;
  // re-express amplitude relative to theta = 0
  f->amp *= std::exp(origin / tau);
  return std::make_pair(tau, *f);
}

// Levenberg-Marquardt polish on all four parameters of the piecewise model.
Params4 polish(const std::vector<Folded>& data, Params4 p) {
  double cost = sse(data, p);
  double lambda = 1e-3;
  const int n = static_cast<int>(data.size());
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd res(n);
    for (int i = 0; i < n; ++i) {
      const double th = data[static_cast<std::size_t>(i)].angle;
      if (th <= p.peak_angle) {
        jac.row(i) << th / p.peak_angle, -p.peak_moment * th / (p.peak_angle * p.peak_angle), 0.0, 0.0;
        res(i) = p.peak_moment * th / p.peak_angle - data[static_cast<std::size_t>(i)].moment;
      } else {
        const double drop = p.peak_moment - p.propagation_moment;
        const double e = std::exp(-(th - p.peak_angle) / p.decay_angle);
        jac.row(i) << e, drop * e / p.decay_angle, 1.0 - e,
            drop * e * (th - p.peak_angle) / (p.decay_angle * p.decay_angle);
        res(i) = p.propagation_moment + drop * e - data[static_cast<std::size_t>(i)].moment;
      }
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * res;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::Matrix4d a = jtj;
      for (int k = 0; k < 4; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-30);
      const Eigen::Vector4d step = a.ldlt().solve(-jtr);
      if (!step.allFinite()) {
        lambda *= 10;
        continue;
      }
      Params4 trial{p.peak_moment + step(0), p.peak_angle + step(1), p.propagation_moment + step(2),
                    p.decay_angle + step(3)};
      const double trial_cost = admissible(trial) ? sse(data, trial)
                                                  : std::numeric_limits<double>::infinity();
      if (trial_cost <= cost) {
        const bool converged =
            cost - trial_cost <= 1e-30 + 1e-15 * cost &&
            step.cwiseAbs().maxCoeff() <=
                1e-14 * std::max({std::abs(p.peak_moment), p.peak_angle, p.decay_angle, 1e-12});
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (converged || cost == 0.0) return p;
      } else {
        lambda *= 10;
      }
    }
    if (!improved) break;
  }
  return p;
}

}  // namespace

UnpinchedFit calibrate_unpinched(std::span<const MomentSample> samples) {
  if (samples.size() < 4) throw FitError("unpinched calibration needs at least 4 samples");
  std::vector<Folded> data;
  data.reserve(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.theta) || !std::isfinite(s.moment)) throw FitError("non-finite sample");
    data.push_back({std::abs(s.theta), s.theta < 0 ? -s.moment : s.moment});
  }
  std::stable_sort(data.begin(), data.end(),
                   [](const Folded& a, const Folded& b) { return a.angle < b.angle; });
  if (data.front().angle == data.back().angle) throw FitError("all samples share one angle");

  std::optional<Params4> best;
  double best_cost = std::numeric_limits<double>::infinity();
  const std::size_t n = data.size();
  for (std::size_t split = 1; split + 3 <= n; ++split) {
    // samples [0, split) on the ramp, [split, n) past the peak
    const double last_pre = data[split - 1].angle;
    const double first_post = data[split].angle;
    if (!(last_pre > 0) || first_post == last_pre) continue;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < split; ++i) {
      num += data[i].angle * data[i].moment;
      den += data[i].angle * data[i].angle;
    }
    const double slope = num / den;
    const auto tail = fit_tail(std::span<const Folded>(data).subspan(split));
    if (!tail) continue;
    const auto [tau, exp_fit] = *tail;
    // ramp meets the relaxation curve somewhere between the two regions
    auto gap = [&](double th) { return slope * th - exp_fit.plateau - exp_fit.amp * std::exp(-th / tau); };
    double lo = last_pre, hi = first_post;
    double peak = 0.5 * (lo + hi);
    if (gap(lo) <= 0 && gap(hi) >= 0) {
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (gap(mid) < 0 ? lo : hi) = mid;
      }
      peak = 0.5 * (lo + hi);
    }
    Params4 start{slope * peak, peak, exp_fit.plateau, tau};
    if (!admissible(start)) continue;
    const Params4 fitted = polish(data, start);
    const double c = sse(data, fitted);
    if (c < best_cost) {
      best_cost = c;
      best = fitted;
    }
  }
  if (!best) throw FitError("no split into ramp and post-peak samples could be fitted");

  UnpinchedFit out;
  out.model.branch = best->branch();
  const bool has_pre = std::any_of(data.begin(), data.end(), [&](const Folded& d) {
    return d.angle > 0 && d.angle <= best->peak_angle;
  });
  const bool has_post = std::any_of(data.begin(), data.end(),
                                    [&](const Folded& d) { return d.angle > best->peak_angle; });
  if (!has_pre || !has_post) throw FitError("data does not span both sides of a moment peak");
  try {
    out.model.validate();
  } catch (const std::invalid_argument& e) {
    throw FitError(std::string("fitted curve has no snap-through peak: ") + e.what());
  }
  out.residual_norm = std::sqrt(best_cost);
  return out;
}

}  // namespace tapearm
