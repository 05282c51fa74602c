#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hypstruct/common.hpp"
#include "hypstruct/triangulation.hpp"

namespace hyp {

struct ShapeAssignment {
    std::vector<cplx> z;
    // log z and log(1 - z), continued along the solve
    std::vector<cplx> logz;
    std::vector<cplx> log1mz;

    // principal branches
    static ShapeAssignment from_shapes(const std::vector<cplx>& z);
    int size() const { return static_cast<int>(z.size()); }
    cplx z_prime(int i) const { return 1.0 / (1.0 - z[i]); }
    cplx z_double_prime(int i) const { return (z[i] - 1.0) / z[i]; }
    // Companion invariant on tet edge e.
    cplx edge_invariant(int tet, int e) const;
    cplx edge_log(int tet, int e) const;
};

enum class Orientation { Positive, Flat, Negative };
Orientation classify(cplx z);
const char* to_string(Orientation o);

enum class RowKind { Edge, Completeness, Filling };

// sum_i A_i log z_i + B_i log(1 - z_i) = target * pi i
struct EquationRow {
    RowKind kind = RowKind::Edge;
    int index = 0;  // edge class or cusp
    int curve = 0;  // completeness: 0 meridian, 1 longitude
    std::vector<int> A, B;
    long target = 0;
};

struct EquationSystem {
    int n = 0;
    std::vector<EquationRow> rows;
    // rows handed to Newton; the rest are checked at the end
    std::vector<int> square;
};

// log H(curve) = A.log z + B.log(1-z) + C pi i
struct LogForm {
    std::vector<int> A, B;
    long C = 0;
};
LogForm curve_form(int n, const NormalCurve& curve);

cplx log_holonomy(const NormalCurve& curve, const ShapeAssignment& s);
cplx holonomy_H(const NormalCurve& curve, const ShapeAssignment& s);

// Shipped curves where present, homology basis elsewhere.
std::vector<PeripheralCurves> peripheral_curves(const Triangulation& t);

EquationSystem edge_rows(const Triangulation& t);
EquationSystem complete_system(const Triangulation& t);
using Slope = std::optional<std::pair<long, long>>;
EquationSystem filling_system(const Triangulation& t, const std::vector<Slope>& slopes);

Eigen::VectorXcd residual(const EquationSystem& sys, const ShapeAssignment& s);
Eigen::MatrixXcd jacobian(const EquationSystem& sys, const ShapeAssignment& s);

struct SolveOptions {
    double tol = 1e-12;
    int max_iter = 100;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0;
    std::vector<Orientation> classes;
    bool geometric = false;
    double volume = 0;
};

struct Solution {
    ShapeAssignment shapes;
    SolveReport report;
};

Solution newton_solve(const EquationSystem& sys, const ShapeAssignment& start, const SolveOptions& opt = {});
ShapeAssignment default_start(int n);

}  // namespace hyp
