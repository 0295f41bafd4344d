#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "lcrw/point.hpp"

namespace lcrw {

// Parameter combinations the predictions exclude (boundary cases where the
// asymptotics change branch, recurrent regimes for Green quantities).
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace theory {

// growth exponent of the scenery functional:  (alpha+1)/(2 alpha) v 1 in one
// dimension, (1/alpha) v 1 in higher dimension
double s_exponent(int d2, double alpha);

// on-diagonal return exponent of the layered walk: (d1/2) s(d2,alpha) + d2/2
double ondiag_exponent(int d1, int d2, double alpha);

// d1 * s(d2,alpha) + d2
double spectral_dimension(int d1, int d2, double alpha);

// moderate-deviation exponent r(d1,d2,alpha,delta); requires d2 >= 3,
// alpha < d2/2, delta in [0, d2/(4 alpha)).  The boundary
// delta* = (1/(2 alpha)) v (1/2) belongs to the flat branch.
double moddev_exponent(int d1, int d2, double alpha, double delta);

// log-log decay exponent (negative) of g(0, n e_1); refuses recurrent
// parameter combinations
double green_exponent(int d1, int d2, double alpha);

// spectral dimension of the constant-speed time change
double csrw_spectral_dimension(int d1, int d2, double alpha);

// |x1-y1|^{1/s(d2,alpha)} + |x2-y2|  on Z^{1+d2} (Euclidean second block)
double intrinsic_distance(int d2, double alpha, const Point& x, const Point& y);

struct Constants {
    double ondiag_const;        // (4 pi)^{-(d2+1)/2} E[z]^{-1/2}
    double green_const_paper;   // (1/4) Gamma((d2-1)/2) E[z]^{(d2-2)/2}
    double green_const_derived; // Gaussian time-integral value; differs from
                                // the one above by pi^{-(d2+1)/2} (flagged,
                                // not resolved; only the derived value is an
                                // acceptance target)
};
// requires a finite mean (alpha > 1 under the Pareto law); mean_z overridable
Constants constants(int d1, int d2, double alpha, std::optional<double> mean_z = std::nullopt);

// display-only stretched-exponential rates (no acceptance target attached)
double ldp_rate_exponent(int d2, double alpha);

}  // namespace theory
}  // namespace lcrw
