#pragma once

// Bending moments of back-to-back tapes with and without the pinch.
//
// The pinched region is a flat rectangular strip of width R0*alpha, so its
// moment is plain beam bending. The unpinched pair is phenomenological: a
// linear ramp up to a snap-through peak, then exponential relaxation to the
// fold propagation moment.

#include <span>
#include <string>
#include <vector>

#include "tapearm/model.hpp"

namespace tapearm {

struct FlattenedSection {
  double width = 0.0;
  double thickness = 0.0;
  double elastic_modulus = 0.0;
  double second_moment = 0.0;  // width * t^3 / 12

  static FlattenedSection from_tape(const TapeProperties& tape);
  double flexural_rigidity() const { return elastic_modulus * second_moment; }
};

/// M = E I kappa for the flattened strip.
double flattened_moment(const FlattenedSection& section, double curvature);

struct PinchJointModel {
  FlattenedSection section{};
  double bend_length = 0.01;  // extent of the flattened region along the tape
  int tape_count = 2;

  /// Rotational stiffness in N*m/rad.
  double stiffness() const;
};

PinchJointModel make_pinch_model(const TapeProperties& tape, double bend_length = 0.01);

/// Solves for the bend length so that the joint carries `moment` at `theta`.
PinchJointModel calibrate_pinch_model(const TapeProperties& tape, double theta, double moment);

double pinched_joint_moment(const PinchJointModel& model, double theta);

/// One side of a moment-angle curve (theta >= 0 branch).
struct MomentBranch {
  double peak_moment = 0.654;
  double peak_angle = deg_to_rad(10.0);
  double propagation_moment = 0.0654;
  double decay_angle = deg_to_rad(5.0);  // e-folding angle of the post-peak relaxation

  double pre_peak_stiffness() const { return peak_moment / peak_angle; }
  void validate() const;
  /// Moment magnitude at |theta|.
  double magnitude(double abs_theta) const;
};

/// Back-to-back pair, odd in theta.
struct UnpinchedPairModel {
  MomentBranch branch{};

  void validate() const { branch.validate(); }
  double peak_moment() const { return branch.peak_moment; }
  double peak_angle() const { return branch.peak_angle; }
};

double unpinched_pair_moment(const UnpinchedPairModel& model, double theta);

/// Single tape with independent equal-sense (theta > 0) and opposite-sense
/// (theta < 0) branches. The pair model is the symmetric special case.
struct SingleTapeModel {
  MomentBranch equal_sense{};
  MomentBranch opposite_sense{};
};

double single_tape_moment(const SingleTapeModel& model, double theta);

struct MomentSample {
  double theta = 0.0;
  double moment = 0.0;
};

std::vector<MomentSample> moment_angle_curve(const PinchJointModel& model, double theta_min,
                                             double theta_max, int n);
std::vector<MomentSample> moment_angle_curve(const UnpinchedPairModel& model, double theta_min,
                                             double theta_max, int n);

/// Pinched moment at theta_ref over the unpinched maximum.
double peak_ratio(const PinchJointModel& pinched, const UnpinchedPairModel& unpinched,
                  double theta_ref);

struct UnpinchedFit {
  UnpinchedPairModel model{};
  double residual_norm = 0.0;  // sqrt of the sum of squared torque residuals
};

/// Least-squares fit of the unpinched pair model. Samples at negative angles
/// are folded onto the positive branch. Throws FitError on degenerate data.
UnpinchedFit calibrate_unpinched(std::span<const MomentSample> samples);

/// Models anchored to the two measured moments: 0.654 N*m unpinched peak and
/// 0.055 N*m pinched at the same angle.
inline constexpr double kMeasuredUnpinchedPeak = 0.654;
inline constexpr double kMeasuredPinchedAtPeak = 0.055;

UnpinchedPairModel default_unpinched_model();
PinchJointModel default_calibrated_pinch_model(const TapeProperties& tape = {});

std::string to_csv(std::span<const MomentSample> samples);
std::vector<MomentSample> parse_moment_csv(const std::string& text);

}  // namespace tapearm
