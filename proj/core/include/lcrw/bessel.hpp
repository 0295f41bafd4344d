#pragma once

#include <cstdint>

namespace lcrw::bessel {

// log of the scaled modified Bessel function of integer order,
//   log( e^{-z} I_n(z) ),  z >= 0.
//
// The scaled quantity is the primitive everywhere so no intermediate value
// can overflow; callers exponentiate sums of logs.  Relative accuracy of
// exp(log_ive) is ~1e-13 over z in [0, 2e12] and all orders (validated
// against a high-precision oracle in the test suite).
//
// Regimes:
//   z <= 30                power series in log form
//   z > 30, 4n^2 <= z      Hankel large-argument expansion
//   n >= 28 otherwise      uniform large-order expansion (Olver), terms u_0..u_8
//   remaining gap          backward ratio recurrence normalized by I_0
double log_ive(std::int64_t n, double z);

// e^{-z} I_n(z); underflows to 0 when the log is below ~-708
double ive(std::int64_t n, double z);

}  // namespace lcrw::bessel
