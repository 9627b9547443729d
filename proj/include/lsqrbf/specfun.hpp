#ifndef LSQRBF_SPECFUN_HPP
#define LSQRBF_SPECFUN_HPP

#include <array>

namespace lsqrbf {

/// Nonnegative real order of a modified Bessel function.
class BesselOrder
{
public:
   /// Throws std::domain_error for negative or non-finite orders.
   explicit BesselOrder(double nu);

   double value() const { return nu_; }

private:
   double nu_;
};

/** @brief Modified Bessel function of the second kind K_nu(z).

    Temme's series is used for z <= 2 and Steed's continued fraction for
    z > 2, both at the reduced order mu = nu - round(nu), followed by
    upward recurrence in the order. Underflows to 0 for very large z.
    Throws std::domain_error for z <= 0 and std::overflow_error when the
    result is not representable. */
double bessel_k(BesselOrder nu, double z);

/// dK_nu/dz = -(K_{nu-1}(z) + K_{nu+1}(z)) / 2.
double bessel_k_dz(BesselOrder nu, double z);

/** Returns {K_{nu-2}(z), K_{nu-1}(z), K_nu(z)} from a single reduced-order
    evaluation. Negative orders are folded with K_{-a} = K_a. Requires
    nu >= 0. */
std::array<double, 3> bessel_k_ladder(BesselOrder nu, double z);

} // namespace lsqrbf

#endif
