// MIT License
//
// Copyright (c) 2026 the lioekf authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, distribute, sublicense, and/or sell copies of the
// Software, and to permit persons to whom the Software is furnished to do so,
// subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in all
// copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lioekf/preprocess.hpp"
#include "lioekf/state.hpp"

namespace lioekf {

/// Closed-form rigid trajectory with analytic derivatives. Every moving
/// variant starts with a stationary hold followed by a smoothstep velocity
/// ramp, so position stays twice continuously differentiable and the first
/// `hold` seconds provide a genuine static window for filter initialization.
class AnalyticTrajectory {
public:
    static AnalyticTrajectory Static(double duration);
    /// p(t) = v0 t + a t^2 / 2, level attitude. No ramp.
    static AnalyticTrajectory Line(const Eigen::Vector3d &v0, const Eigen::Vector3d &accel,
                                   double duration);
    /// Circle of the given radius at height z, heading along the tangent,
    /// steady angular speed `omega` after the ramp. `bob_amplitude` adds a
    /// vertical suspension-style bob of `bob_cycles` periods per radian of
    /// arc. Beyond realism, the bob matters for scan simulation: it sweeps
    /// the grazing-incidence ring radii on floor and ceiling so successive
    /// sweeps interleave their coverage. At constant height the leading arc
    /// of every ring falls just outside all previous coverage, and those
    /// one-sided nearest-neighbor matches drag registration backward.
    static AnalyticTrajectory Circle(double radius, double omega, double z, double duration,
                                     double hold = 1.5, double ramp = 2.0,
                                     double bob_amplitude = 0.0, double bob_cycles = 7.3);
    /// Planar figure-eight (x ~ sin, y ~ sin 2x phase) with a gentle height
    /// oscillation and an independent sinusoidal yaw sweep.
    static AnalyticTrajectory FigureEight(double ax, double ay, double az, double phase_rate,
                                          double yaw_amplitude, double yaw_rate, double z,
                                          double duration, double hold = 1.5, double ramp = 2.0);
    /// In-place yaw spin at `yaw_rate` after the ramp (deskew scenarios).
    static AnalyticTrajectory Spin(double yaw_rate, double z, double duration, double hold = 1.5,
                                   double ramp = 2.0);

    Eigen::Vector3d Position(double t) const;
    Eigen::Vector3d Velocity(double t) const;
    Eigen::Vector3d Acceleration(double t) const;
    Eigen::Matrix3d Rotation(double t) const;
    /// Body-frame angular rate matching d/dt Rotation = Rotation * [rate]_x.
    Eigen::Vector3d BodyRate(double t) const;
    double Duration() const { return duration_; }

private:
    enum class Kind { kStatic, kLine, kCircle, kFigureEight, kSpin };
    struct Phase {  // ramped motion phase: integral, rate, acceleration
        double f = 0.0;
        double df = 0.0;
        double ddf = 0.0;
    };
    Phase RampPhase(double t) const;
    /// Yaw angle and its first two derivatives.
    void YawState(double t, double *psi, double *dpsi) const;

    Kind kind_ = Kind::kStatic;
    double duration_ = 0.0;
    double hold_ = 0.0;
    double ramp_ = 0.0;
    Eigen::Vector3d line_v0_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d line_accel_ = Eigen::Vector3d::Zero();
    double radius_ = 0.0;
    double omega_ = 0.0;
    double z_ = 0.0;
    double bob_amp_ = 0.0, bob_k_ = 0.0;
    double ax_ = 0.0, ay_ = 0.0, az_ = 0.0;
    double phase_rate_ = 0.0;
    double yaw_amplitude_ = 0.0;
    double yaw_rate_ = 0.0;
};

/// Exact inertial measurement for the trajectory at time t: body rate from
/// the analytic orientation, specific force a = R^T (p_ddot - g) with
/// g = (0, 0, -gravity).
ImuSample IdealImu(const AnalyticTrajectory &traj, double t, double gravity = 9.81);

/// Corrupts ideal samples with white noise (scaled by the sample rate) and
/// first-order random-walk biases. Bit-reproducible for a fixed seed.
class NoisyImuGenerator {
public:
    NoisyImuGenerator(const ImuNoiseSpec &spec, uint64_t seed,
                      const Eigen::Vector3d &gyro_bias0 = Eigen::Vector3d::Zero(),
                      const Eigen::Vector3d &accel_bias0 = Eigen::Vector3d::Zero());

    /// dt is the sampling interval of the stream (seconds).
    ImuSample Corrupt(const ImuSample &ideal, double dt);

    const Eigen::Vector3d &GyroBias() const { return gyro_bias_; }
    const Eigen::Vector3d &AccelBias() const { return accel_bias_; }

private:
    ImuNoiseSpec spec_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    Eigen::Vector3d gyro_bias_;
    Eigen::Vector3d accel_bias_;
};

/// Infinite plane through `point` with unit `normal`.
struct Plane {
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

/// Axis-aligned box [min, max].
struct Box {
    Eigen::Vector3d min = Eigen::Vector3d::Zero();
    Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

/// A box shuttling back and forth along a line; it sits parked at its
/// t = `start` position until then (vehicles rarely move the moment a
/// recording begins):
/// center(t) = center + amplitude * sin(2*pi*max(t-start,0)/period + phase) * direction.
/// `shape` is the box footprint centered on the origin.
struct ShuttleBox {
    Box shape;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
    double amplitude = 0.0;
    double period = 1.0;
    double phase = 0.0;
    double start = 0.0;

    Eigen::Vector3d CenterAt(double t) const {
        const double te = std::max(t - start, 0.0);
        return center + amplitude * std::sin(2.0 * M_PI * te / period + phase) * direction;
    }
};

/// A box circulating a horizontal circle at constant angular rate (a patrol
/// vehicle doing laps); parked at its t = `start` position until then:
/// center(t) = center + radius * [cos a, sin a, 0], a = phase + omega*max(t-start,0).
/// Keep the footprint square: the box stays axis-aligned while it orbits.
struct OrbitBox {
    Box shape;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    double start = 0.0;

    Eigen::Vector3d CenterAt(double t) const {
        const double a = phase + omega * std::max(t - start, 0.0);
        return center + radius * Eigen::Vector3d(std::cos(a), std::sin(a), 0.0);
    }
};

struct SyntheticWorld {
    std::vector<Plane> planes;
    std::vector<Box> boxes;
    /// Moving obstacles, raycast at each beam's emission time.
    std::vector<ShuttleBox> shuttles;
    std::vector<OrbitBox> patrols;

    /// 26 x 26 x 6 m closed convex room (floor z=0): six planes, no interior
    /// occluders. Sized so that every surface stays within sensor range from
    /// every built-in trajectory pose. Both properties matter for unbiased
    /// nearest-neighbor association under motion: a range cutoff slicing
    /// through visible geometry creates a moving coverage frontier, and any
    /// interior occluder creates one-sided reveal strips behind it; either
    /// systematically drags point-to-point registration.
    static SyntheticWorld Room();

    /// Room() plus corner pillars and two free-standing crates, clear of all
    /// built-in trajectories. Occluders make nearest-neighbor matching
    /// harder (reveal strips, cross-surface matches), which is the point:
    /// use for stress scenarios, not for drift-accuracy baselines.
    static SyntheticWorld RoomCluttered();

    /// Room() plus a rack of five shelf slabs (0.45 m vertical spacing)
    /// against the +y wall. Closely spaced parallel surfaces are a trap for
    /// association gates tighter than the spacing: after a vertical
    /// transient, every slab point can lock onto the adjacent slab and the
    /// filter settles into a self-consistent offset. A gate wider than the
    /// spacing also sees the true slab and recovers.
    static SyntheticWorld RoomShelved();

    /// Room() plus two solid panels 0.6 m in front of the +y/-y walls. As
    /// the sensor moves, the wall strips hidden behind each panel are
    /// revealed gradually, and the revealed points' nearest mapped neighbor
    /// is the panel front ~0.7 m away — spurious pairings that only
    /// association gates wider than the standoff absorb.
    static SyntheticWorld RoomPaneled();

    /// 40 x 40 x 8 m closed convex hall, same six-plane construction as
    /// Room(). The longer sight lines stretch laser-grid spacing at the far
    /// walls (spacing ~ beam divergence step * range, over 1 m at 40 m),
    /// which starves tight association gates of matchable structure.
    static SyntheticWorld Hall();
};

/// Distance along the unit ray to the nearest surface, or +infinity.
/// `t` places the world's moving obstacles (shuttles) for this ray.
double RaycastWorld(const SyntheticWorld &world, const Eigen::Vector3d &origin,
                    const Eigen::Vector3d &dir, double t = 0.0);

/// Spinning-head beam table: `rings` elevation steps spread uniformly over
/// [vertical_min, vertical_max], `azimuth_steps` horizontal steps. All rings
/// of one azimuth column are emitted together; the column's time offset grows
/// linearly over the sweep period.
struct BeamPattern {
    int rings = 16;
    int azimuth_steps = 360;
    double vertical_min = -0.2618;  // -15 deg
    double vertical_max = 0.2618;   // +15 deg

    /// Unit directions in the sensor frame, azimuth-major. `azimuth_phase`
    /// rotates the whole azimuth grid (radians); a real spinning head never
    /// restarts at the exact same azimuth each sweep, and repeating an
    /// identical grid would let sampling artifacts correlate across sweeps.
    std::vector<Eigen::Vector3d> Directions(double azimuth_phase = 0.0) const;
};

/// One simulated sweep starting at `stamp` and lasting `period`. Each beam is
/// cast from the sensor pose at its own emission time (body pose from the
/// trajectory composed with `ext`), so a moving platform yields a skewed
/// scan. Points are returned in the sensor frame at emission time; beams that
/// miss everything or exceed r_max yield no point. Gaussian range noise with
/// std sigma_range is drawn per returned point. `azimuth_phase` is the spin
/// angle at sweep start (see BeamPattern::Directions). With probability
/// `outlier_fraction` a returned beam becomes a spurious return displaced
/// along the beam by 0.2..outlier_range_error meters (either sign).
LidarScan RaycastScan(const SyntheticWorld &world, const AnalyticTrajectory &traj, double stamp,
                      double period, const BeamPattern &pattern, double r_max, double sigma_range,
                      std::mt19937_64 &rng, const Extrinsics &ext = Extrinsics{},
                      double azimuth_phase = 0.0, double outlier_fraction = 0.0,
                      double outlier_range_error = 1.5);

/// Everything needed to synthesize one dataset.
struct Scenario {
    std::string name;
    AnalyticTrajectory traj = AnalyticTrajectory::Static(60.0);
    SyntheticWorld world = SyntheticWorld::Room();
    ImuNoiseSpec imu_noise;
    Eigen::Vector3d gyro_bias0 = Eigen::Vector3d::Zero();
    Eigen::Vector3d accel_bias0 = Eigen::Vector3d::Zero();
    double imu_rate = 100.0;   // Hz
    double lidar_rate = 10.0;  // Hz
    double first_scan = 1.2;   // seconds
    double sigma_range = 0.02;
    double r_max = 30.0;
    /// Fraction of returned beams replaced by spurious returns (multipath,
    /// veiling dust), displaced along the beam by up to outlier_range_error
    /// meters. Zero disables.
    double outlier_fraction = 0.0;
    double outlier_range_error = 1.5;
    BeamPattern pattern;
    Extrinsics extrinsics;
    /// Initial covariance diagonal written into the dataset config.
    Vector15d initial_sigma_diag = Vector15d::Zero();
};

/// Built-in scenarios: "static", "circle", "circle_slow", "figure8".
/// Throws std::invalid_argument for unknown names.
Scenario MakeScenario(const std::string &name);

/// Writes a complete dataset directory (imu.csv, scans/, calib.txt, config,
/// ground_truth.txt at scan stamps). Identical bytes for identical inputs.
void GenerateDataset(const Scenario &scenario, uint64_t seed, const std::string &out_dir);

}  // namespace lioekf
