#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyp {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HYP_ERROR(Name)                                                   \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    };

HYP_ERROR(ParseError)
HYP_ERROR(ValidationError)
HYP_ERROR(CuspNotTorus)
HYP_ERROR(NotHyperbolic)
HYP_ERROR(BadSlope)
HYP_ERROR(NoConvergence)
HYP_ERROR(SingularJacobian)
HYP_ERROR(DegenerateApproach)
HYP_ERROR(DegenerateShape)
HYP_ERROR(Infeasible)
HYP_ERROR(NotInterior)
HYP_ERROR(FixesInfinity)

#undef HYP_ERROR

}  // namespace hyp
