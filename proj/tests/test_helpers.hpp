#pragma once

#include <vector>

#include "coplan/environment.hpp"
#include "coplan/team.hpp"

namespace coplan::testing {

/// Single-integrator robot: A = B = I_2, Q = 0.01 I_2, state == workspace
/// position. `with_prop` attaches a full-state sensor with R = 0.01 I_2.
inline RobotModel integrator_robot(bool with_prop, double body_radius = 0.1, double u_max = 0.5) {
    RobotModel r;
    r.A = Matrix::Identity(2, 2);
    r.B = Matrix::Identity(2, 2);
    r.Q = 0.01 * Matrix::Identity(2, 2);
    if (with_prop) {
        r.C_prop = Matrix::Identity(2, 2);
        r.R_prop = 0.01 * Matrix::Identity(2, 2);
    }
    r.body_radius = body_radius;
    r.workspace_proj = {0, 1};
    r.u_max = u_max;
    return r;
}

inline ExteroPair relative_position_pair(int i, int j, double r_ext) {
    ExteroPair p;
    p.i = i;
    p.j = j;
    p.C_ext.resize(2, 4);
    p.C_ext << Matrix::Identity(2, 2), -Matrix::Identity(2, 2);
    p.R_ext = 0.01 * Matrix::Identity(2, 2);
    p.r_ext = r_ext;
    return p;
}

/// Two-robot team with the odd-index-only sensing convention: robot 0 has
/// proprioception, robot 1 does not, one relative-position pair.
inline TeamModel two_robot_team(double r_ext = 1.5) {
    return TeamModel::compose({integrator_robot(true), integrator_robot(false)},
                              {relative_position_pair(0, 1, r_ext)});
}

inline ProbabilityBudget default_budget() {
    return ProbabilityBudget{0.85, 0.05, 0.05, 0.05};
}

/// Open 10x10 workspace, robots starting near the bottom, goals near by.
/// Solvable in a handful of iterations.
inline Environment trivial_env() {
    Environment env;
    env.name = "trivial";
    env.bounds.lo = Vector::Zero(2);
    env.bounds.hi = 10.0 * Vector::Ones(2);
    env.budget = default_budget();

    RobotSpec a;
    a.model = integrator_robot(true);
    a.start = GaussianBelief((Vector(2) << 4.0, 4.0).finished(), 0.0001 * Matrix::Identity(2, 2));
    a.goal = {(Vector(2) << 4.8, 4.0).finished(), 0.5};
    RobotSpec b;
    b.model = integrator_robot(true);
    b.start = GaussianBelief((Vector(2) << 6.0, 4.0).finished(), 0.0001 * Matrix::Identity(2, 2));
    b.goal = {(Vector(2) << 6.8, 4.0).finished(), 0.5};
    env.robots = {a, b};
    env.pairs = {relative_position_pair(0, 1, 2.0)};
    return env;
}

} // namespace coplan::testing
