//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/mobility.hpp"

#include <cmath>

namespace tsnsim {

double Vec3::norm() const
{
    return std::sqrt(x * x + y * y + z * z);
}

Vec3 Trajectory::position_at(SimTime t) const
{
    const std::uint64_t period = update_period_.ps;
    const std::uint64_t lo = t.ps / period * period;
    if (lo == t.ps)
        return exact_position(static_cast<double>(lo) * 1e-12);
    const std::uint64_t hi = lo + period;
    const Vec3 a = exact_position(static_cast<double>(lo) * 1e-12);
    const Vec3 b = exact_position(static_cast<double>(hi) * 1e-12);
    const double f = static_cast<double>(t.ps - lo) / static_cast<double>(period);
    return a + (b - a) * f;
}

Vec3 Trajectory::velocity_at(SimTime t) const
{
    return exact_velocity(t.seconds());
}

Vec3 UniformLinearTrajectory::exact_position(double t_s) const
{
    const double moving = std::max(0.0, t_s - hold_s_);
    return origin_ + velocity_ * moving;
}

Vec3 UniformLinearTrajectory::exact_velocity(double t_s) const
{
    return t_s < hold_s_ ? Vec3{} : velocity_;
}

RectanglePatrolTrajectory::RectanglePatrolTrajectory(Vec3 center, double width_m,
                                                     double height_m, double speed_mps,
                                                     double start_frac, double hold_s)
    : center_(center), w_(width_m), h_(height_m), speed_(speed_mps),
      perimeter_(2.0 * (width_m + height_m)), hold_s_(hold_s)
{
    start_offset_ = start_frac * perimeter_;
}

Vec3 RectanglePatrolTrajectory::point_on_perimeter(double s, Vec3* tangent) const
{
    s = std::fmod(s, perimeter_);
    if (s < 0)
        s += perimeter_;
    const double x0 = center_.x - w_ / 2, y0 = center_.y - h_ / 2;
    Vec3 p{0, 0, center_.z};
    Vec3 dir;
    if (s < w_) {
        p.x = x0 + s;
        p.y = y0;
        dir = {1, 0, 0};
    }
    else if (s < w_ + h_) {
        p.x = x0 + w_;
        p.y = y0 + (s - w_);
        dir = {0, 1, 0};
    }
    else if (s < 2 * w_ + h_) {
        p.x = x0 + w_ - (s - w_ - h_);
        p.y = y0 + h_;
        dir = {-1, 0, 0};
    }
    else {
        p.x = x0;
        p.y = y0 + h_ - (s - 2 * w_ - h_);
        dir = {0, -1, 0};
    }
    if (tangent)
        *tangent = dir;
    return p;
}

Vec3 RectanglePatrolTrajectory::exact_position(double t_s) const
{
    const double moving = std::max(0.0, t_s - hold_s_);
    return point_on_perimeter(start_offset_ + speed_ * moving, nullptr);
}

Vec3 RectanglePatrolTrajectory::exact_velocity(double t_s) const
{
    if (t_s < hold_s_)
        return {};
    Vec3 dir;
    point_on_perimeter(start_offset_ + speed_ * (t_s - hold_s_), &dir);
    return dir * speed_;
}

LinePatrolTrajectory::LinePatrolTrajectory(Vec3 a, Vec3 b, double speed_mps,
                                           double start_frac)
    : a_(a), b_(b), speed_(speed_mps), length_((b - a).norm())
{
    start_offset_ = start_frac * 2.0 * length_;
}

Vec3 LinePatrolTrajectory::exact_position(double t_s) const
{
    double s = std::fmod(start_offset_ + speed_ * t_s, 2.0 * length_);
    if (s < 0)
        s += 2.0 * length_;
    const double along = s < length_ ? s : 2.0 * length_ - s;
    return a_ + (b_ - a_) * (along / length_);
}

Vec3 LinePatrolTrajectory::exact_velocity(double t_s) const
{
    double s = std::fmod(start_offset_ + speed_ * t_s, 2.0 * length_);
    if (s < 0)
        s += 2.0 * length_;
    const Vec3 unit = (b_ - a_) * (1.0 / length_);
    return unit * (s < length_ ? speed_ : -speed_);
}

FactoryPatrolTrajectory::FactoryPatrolTrajectory(Vec3 cell_center, double cell_size_m,
                                                 double speed_lo, double speed_hi,
                                                 std::uint64_t seed,
                                                 const std::string& stream_id)
    : center_(cell_center), half_(cell_size_m / 2), lo_(speed_lo), hi_(speed_hi),
      rng_(seed, stream_id)
{
}

void FactoryPatrolTrajectory::extend_to(double t_s) const
{
    // Corners of the cell, visited counter-clockwise; each side is one leg
    // with a freshly drawn speed.
    static constexpr int dx[] = {1, -1, -1, 1};
    static constexpr int dy[] = {1, 1, -1, -1};
    if (legs_.empty()) {
        Leg first;
        first.t_start = 0.0;
        first.from = {center_.x + half_ * dx[3], center_.y + half_ * dy[3], center_.z};
        first.to = {center_.x + half_ * dx[0], center_.y + half_ * dy[0], center_.z};
        const double v = rng_.uniform(lo_, hi_);
        first.t_end = (first.to - first.from).norm() / v;
        first.vel = (first.to - first.from) * (1.0 / (first.to - first.from).norm()) * v;
        legs_.push_back(first);
    }
    while (legs_.back().t_end < t_s) {
        const Leg& prev = legs_.back();
        const std::size_t corner = legs_.size() % 4;
        Leg next;
        next.t_start = prev.t_end;
        next.from = prev.to;
        next.to = {center_.x + half_ * dx[corner], center_.y + half_ * dy[corner], center_.z};
        const double v = rng_.uniform(lo_, hi_);
        const double len = (next.to - next.from).norm();
        next.t_end = next.t_start + len / v;
        next.vel = (next.to - next.from) * (v / len);
        legs_.push_back(next);
    }
}

Vec3 FactoryPatrolTrajectory::exact_position(double t_s) const
{
    extend_to(t_s);
    // Queries are monotone in simulated time apart from interpolation
    // lookahead, so scanning from the back finds the leg quickly.
    for (auto it = legs_.rbegin(); it != legs_.rend(); ++it) {
        if (t_s >= it->t_start) {
            const double dt = std::min(t_s, it->t_end) - it->t_start;
            return it->from + it->vel * dt;
        }
    }
    return legs_.front().from;
}

Vec3 FactoryPatrolTrajectory::exact_velocity(double t_s) const
{
    extend_to(t_s);
    for (auto it = legs_.rbegin(); it != legs_.rend(); ++it)
        if (t_s >= it->t_start)
            return it->vel;
    return {};
}

double relative_velocity_along_los(const Trajectory& ue, const Trajectory& gnb, SimTime t)
{
    const Vec3 los = ue.position_at(t) - gnb.position_at(t);
    const double dist = los.norm();
    if (dist == 0.0)
        return 0.0;
    const Vec3 vrel = ue.velocity_at(t) - gnb.velocity_at(t);
    return vrel.dot(los) / dist;
}

} // namespace tsnsim
