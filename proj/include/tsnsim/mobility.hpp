//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/rng.hpp"
#include "tsnsim/time.hpp"

#include <memory>
#include <vector>

namespace tsnsim {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

/// Deterministic position/velocity source. Positions are evaluated on a
/// fixed update grid (default 1 ms) with linear interpolation in between,
/// which keeps channel reads cheap and continuous.
class Trajectory {
public:
    virtual ~Trajectory() = default;

    Vec3 position_at(SimTime t) const;
    Vec3 velocity_at(SimTime t) const;

    SimTime update_period() const { return update_period_; }

protected:
    explicit Trajectory(SimTime update_period = SimTime::from_ms(1))
        : update_period_(update_period) {}

    virtual Vec3 exact_position(double t_s) const = 0;
    virtual Vec3 exact_velocity(double t_s) const = 0;

private:
    SimTime update_period_;
};

class FixedTrajectory final : public Trajectory {
public:
    explicit FixedTrajectory(Vec3 p) : point_(p) {}

private:
    Vec3 exact_position(double) const override { return point_; }
    Vec3 exact_velocity(double) const override { return {}; }
    Vec3 point_;
};

class UniformLinearTrajectory final : public Trajectory {
public:
    UniformLinearTrajectory(Vec3 origin, Vec3 velocity, double hold_s = 0.0)
        : origin_(origin), velocity_(velocity), hold_s_(hold_s) {}

private:
    Vec3 exact_position(double t_s) const override;
    Vec3 exact_velocity(double t_s) const override;
    Vec3 origin_;
    Vec3 velocity_;
    double hold_s_; // stationary bootstrap window before motion starts
};

/// Counter-clockwise loop around the rectangle centered at `center`;
/// `start_frac` picks the starting point along the perimeter.
class RectanglePatrolTrajectory final : public Trajectory {
public:
    RectanglePatrolTrajectory(Vec3 center, double width_m, double height_m,
                              double speed_mps, double start_frac = 0.0,
                              double hold_s = 0.0);

    double perimeter() const { return perimeter_; }

private:
    Vec3 exact_position(double t_s) const override;
    Vec3 exact_velocity(double t_s) const override;
    Vec3 point_on_perimeter(double s, Vec3* tangent) const;

    Vec3 center_;
    double w_, h_, speed_, start_offset_, perimeter_, hold_s_;
};

/// Ping-pong along the segment a..b (transport robots).
class LinePatrolTrajectory final : public Trajectory {
public:
    LinePatrolTrajectory(Vec3 a, Vec3 b, double speed_mps, double start_frac = 0.0);

private:
    Vec3 exact_position(double t_s) const override;
    Vec3 exact_velocity(double t_s) const override;
    Vec3 a_, b_;
    double speed_, length_, start_offset_;
};

/// Rectangle patrol confined to a work cell with the leg speed redrawn from
/// [speed_lo, speed_hi] at the start of every side.
class FactoryPatrolTrajectory final : public Trajectory {
public:
    FactoryPatrolTrajectory(Vec3 cell_center, double cell_size_m, double speed_lo,
                            double speed_hi, std::uint64_t seed, const std::string& stream_id);

private:
    Vec3 exact_position(double t_s) const override;
    Vec3 exact_velocity(double t_s) const override;
    void extend_to(double t_s) const;

    struct Leg {
        double t_start, t_end;
        Vec3 from, to, vel;
    };

    Vec3 center_;
    double half_;
    double lo_, hi_;
    mutable RngStream rng_;
    mutable std::vector<Leg> legs_;
};

/// Scalar projection of the relative velocity onto the line of sight;
/// positive means receding. Zero by convention for coincident positions.
double relative_velocity_along_los(const Trajectory& ue, const Trajectory& gnb, SimTime t);

} // namespace tsnsim
