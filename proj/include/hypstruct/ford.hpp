#pragma once

#include <string>
#include <vector>

#include "hypstruct/common.hpp"

namespace hyp {

struct Moebius {
    cplx a{1}, b{0}, c{0}, d{1};

    // det scaled to 1 and sign fixed so the first nonzero entry has arg in [0, pi)
    static Moebius normalized(cplx a, cplx b, cplx c, cplx d);
    Moebius operator*(const Moebius& o) const;
    Moebius inverse() const;
    cplx apply(cplx z) const;
    // action on upper half space, (z, t) -> (z', t')
    std::pair<cplx, double> apply(cplx z, double t) const;
    bool same(const Moebius& o, double tol = 1e-10) const;  // up to sign
};

struct Generator {
    std::string name;
    Moebius m;
};

struct CuspLattice {
    cplx t1{1}, t2{0, 1};
};

// Closed parallelogram origin + s e1 + t e2, 0 <= s, t <= 1.
struct Window {
    cplx origin{0}, e1{1}, e2{0, 1};
    bool contains(cplx z, double tol = 1e-9) const;
    cplx at(double s, double t) const { return origin + s * e1 + t * e2; }
};

struct IsometricSphere {
    cplx center;
    double radius = 0;
    std::string word;
    Moebius matrix;
    bool apex_covered = false;
};

// Center a/c, radius 1/|c|. Throws FixesInfinity when c = 0.
IsometricSphere isometric_sphere(const Moebius& g);

std::vector<IsometricSphere> enumerate(const std::vector<Generator>& gens, const CuspLattice& lattice, int max_len,
                                       const Window& window);

// Spheres on the upper envelope at some grid sample of the window.
std::vector<IsometricSphere> visible(const std::vector<IsometricSphere>& spheres, const CuspLattice& lattice,
                                     const Window& window, int grid);

struct DualEdge {
    cplx center;
    int multiplicity = 1;
    bool covered = false;
};
std::vector<DualEdge> dual_edges(const std::vector<IsometricSphere>& visible);

std::string ford_svg(const std::vector<IsometricSphere>& visible, const CuspLattice& lattice, const Window& window);

struct FordPreset {
    std::vector<Generator> gens;
    CuspLattice lattice;
    Window window;
};
FordPreset figure8_preset();
FordPreset load_generators(const std::string& path);

}  // namespace hyp
