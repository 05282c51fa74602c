#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypstruct/shapes.hpp"
#include "hypstruct/triangulation.hpp"

namespace hyp {

// Three angles per tet in slot order (edge 01/23, 02/13, 03/12).
using AnglePoint = Eigen::VectorXd;
using TangentVector = Eigen::VectorXd;

struct AnglePolytope {
    int n = 0;
    // tet rows first, then one row per edge class; entries count corners
    Eigen::MatrixXd E;
    Eigen::VectorXd b;
    // orthonormal basis of the solutions of E w = 0
    Eigen::MatrixXd N;
    int rank = 0;
    int dimension() const { return static_cast<int>(N.cols()); }
};

AnglePolytope polytope(const Triangulation& t);
double equality_residual(const AnglePolytope& pol, const AnglePoint& p);
double min_slack(const AnglePoint& p);
bool is_interior(const AnglePolytope& pol, const AnglePoint& p, double tol = 1e-9);

// Maximises the smallest angle by linear programming. Throws Infeasible.
AnglePoint feasible_point(const AnglePolytope& pol);

double volume(const AnglePoint& p);
struct Gradient {
    Eigen::VectorXd g;  // -log(2 sin a_i)
    bool bounded = true;
};
Gradient gradient(const AnglePoint& p);

TangentVector leading_trailing(int ntets, const NormalCurve& curve);

// z = (sin gamma / sin beta) e^{i alpha}. Throws DegenerateShape.
ShapeAssignment shapes_from_angles(const AnglePoint& p);

enum class MaxStatus { InteriorMax, BoundaryMax };
const char* to_string(MaxStatus s);

struct MaxReport {
    MaxStatus status = MaxStatus::InteriorMax;
    double volume = 0;
    int iterations = 0;
    double grad_norm = 0;
    // tets with an angle near 0, with the slot holding the angle near pi
    std::vector<std::pair<int, int>> flat;
    std::optional<ShapeAssignment> shapes;
};

struct MaxResult {
    AnglePoint point;
    MaxReport report;
};

MaxResult maximize(const AnglePoint& p0, const AnglePolytope& pol, double tol = 1e-10);

// Random interior point: p0 moved along the tangent space, staying inside.
AnglePoint random_interior(const AnglePolytope& pol, const AnglePoint& p0, unsigned long seed);

// Best of several maximize runs (p0 plus random starts); deterministic.
MaxResult maximize_multistart(const AnglePolytope& pol, const AnglePoint& p0, int starts, unsigned long seed,
                              double tol = 1e-10);

}  // namespace hyp
