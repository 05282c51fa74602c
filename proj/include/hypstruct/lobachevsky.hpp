#pragma once

#include <vector>

#include "hypstruct/common.hpp"

namespace hyp {

struct ShapeAssignment;

struct AngleTriple {
    double alpha = 0, beta = 0, gamma = 0;

    bool sums_to_pi(double tol = 1e-12) const;
    // some angle is 0 or pi (mod pi)
    bool degenerate(double tol = 1e-12) const;
};

// Lobachevsky function, -int_0^theta log|2 sin u| du
double lob(double theta);

double tet_volume(const AngleTriple& a);
// Signed: negative when Im z < 0, zero when flat.
double tet_volume_z(cplx z);
AngleTriple angles_of_shape(cplx z);

double total_volume(const ShapeAssignment& s);
double total_volume(const std::vector<cplx>& z);

inline const double kVTet = 1.0149416064096536;
inline const double kVOct = 3.6638623767088760;

}  // namespace hyp
