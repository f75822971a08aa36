#include "tapearm/stiffness.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace tapearm {

FlattenedSection FlattenedSection::from_tape(const TapeProperties& tape) {
  tape.validate();
  FlattenedSection s;
  s.width = tape.transverse_radius * tape.subtended_angle;
  s.thickness = tape.thickness;
  s.elastic_modulus = tape.elastic_modulus;
  s.second_moment = s.width * tape.thickness * tape.thickness * tape.thickness / 12.0;
  return s;
}

double flattened_moment(const FlattenedSection& section, double curvature) {
  return section.flexural_rigidity() * curvature;
}

double PinchJointModel::stiffness() const {
  return tape_count * section.flexural_rigidity() / bend_length;
}

PinchJointModel make_pinch_model(const TapeProperties& tape, double bend_length) {
  if (!(bend_length > 0)) throw std::invalid_argument("bend length must be positive");
  return {FlattenedSection::from_tape(tape), bend_length, 2};
}

PinchJointModel calibrate_pinch_model(const TapeProperties& tape, double theta, double moment) {
  if (!(theta > 0 && moment > 0)) {
    throw std::invalid_argument("pinch calibration needs a positive angle and moment");
  }
  PinchJointModel m{FlattenedSection::from_tape(tape), 1.0, 2};
  // M = n E I theta / Lp
  m.bend_length = m.tape_count * m.section.flexural_rigidity() * theta / moment;
  return m;
}

double pinched_joint_moment(const PinchJointModel& model, double theta) {
  // curvature over the flattened region is theta / Lp
  return model.tape_count * flattened_moment(model.section, theta / model.bend_length);
}

void MomentBranch::validate() const {
  if (!(peak_angle > 0)) throw std::invalid_argument("peak angle must be positive");
  if (!(propagation_moment > 0 && propagation_moment < peak_moment)) {
    throw std::invalid_argument("need 0 < propagation moment < peak moment");
  }
  if (!(decay_angle > 0)) throw std::invalid_argument("decay angle must be positive");
}

double MomentBranch::magnitude(double abs_theta) const {
  if (abs_theta <= peak_angle) return peak_moment * (abs_theta / peak_angle);
  return propagation_moment +
         (peak_moment - propagation_moment) * std::exp(-(abs_theta - peak_angle) / decay_angle);
}

double unpinched_pair_moment(const UnpinchedPairModel& model, double theta) {
  const double m = model.branch.magnitude(std::abs(theta));
  return theta < 0 ? -m : m;
}

double single_tape_moment(const SingleTapeModel& model, double theta) {
  if (theta >= 0) return model.equal_sense.magnitude(theta);
  return -model.opposite_sense.magnitude(-theta);
}

namespace {

template <class Fn>
std::vector<MomentSample> sample_curve(Fn&& fn, double theta_min, double theta_max, int n) {
  if (n < 2) throw std::invalid_argument("moment curve needs at least two samples");
  std::vector<MomentSample> out;
  out.reserve(static_cast<std::size_t>(n));
  const double step = (theta_max - theta_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double theta = i == n - 1 ? theta_max : theta_min + i * step;
    out.push_back({theta, fn(theta)});
  }
  return out;
}

}  // namespace

std::vector<MomentSample> moment_angle_curve(const PinchJointModel& model, double theta_min,
                                             double theta_max, int n) {
  return sample_curve([&](double t) { return pinched_joint_moment(model, t); }, theta_min,
                      theta_max, n);
}

std::vector<MomentSample> moment_angle_curve(const UnpinchedPairModel& model, double theta_min,
                                             double theta_max, int n) {
  return sample_curve([&](double t) { return unpinched_pair_moment(model, t); }, theta_min,
                      theta_max, n);
}

double peak_ratio(const PinchJointModel& pinched, const UnpinchedPairModel& unpinched,
                  double theta_ref) {
  if (!(theta_ref > 0)) throw std::invalid_argument("reference angle must be positive");
  // the ramp-then-relax curve peaks exactly at peak_angle
  return pinched_joint_moment(pinched, theta_ref) / unpinched.peak_moment();
}

UnpinchedPairModel default_unpinched_model() {
  UnpinchedPairModel m;
  m.branch.peak_moment = kMeasuredUnpinchedPeak;
  m.branch.propagation_moment = 0.1 * kMeasuredUnpinchedPeak;
  return m;
}

PinchJointModel default_calibrated_pinch_model(const TapeProperties& tape) {
  return calibrate_pinch_model(tape, default_unpinched_model().peak_angle(), kMeasuredPinchedAtPeak);
}

std::string to_csv(std::span<const MomentSample> samples) {
  std::string out = "theta_rad,moment_Nm\n";
  for (const auto& s : samples) out += fmt::format("{:.17g},{:.17g}\n", s.theta, s.moment);
  return out;
}

std::vector<MomentSample> parse_moment_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty moment CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta_rad,moment_Nm") {
    throw std::invalid_argument("moment CSV header must be 'theta_rad,moment_Nm'");
  }
  std::vector<MomentSample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(fmt::format("moment CSV line {}: expected two fields", line_no));
    }
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      MomentSample s{std::stod(a, &used_a), std::stod(b, &used_b)};
      if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing text");
      out.push_back(s);
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("moment CSV line {}: malformed number", line_no));
    }
  }
  return out;
}

}  // namespace tapearm
