#include "lsqrbf/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lsqrbf {

namespace {

constexpr double kEps = 1.0e-16;
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(x) about 0: 1/Gamma(x) = sum_k a[k] x^k.
constexpr double kRecipGamma[] = {
   0.0,
   1.0,
   0.57721566490153286061,
   -0.65587807152025388108,
   -0.042002635034095235529,
   0.1665386113822914895,
   -0.042197734555544336748,
   -0.0096219715278769735621,
   0.0072189432466630995424,
   -0.0011651675918590651121,
   -0.00021524167411495097282,
   0.00012805028238811618615,
   -0.000020134854780788238656,
   -1.2504934821426706573e-6,
   1.1330272319816958824e-6,
   -2.0563384169776071035e-7,
   6.1160951044814158179e-9,
   5.0020076444692229301e-9,
   -1.1812745704870201446e-9,
   1.0434267116911005105e-10,
   7.782263439905071254e-12,
   -3.6968056186422057082e-12,
   5.100370287454475979e-13,
   -2.0583260535665067832e-14,
   -5.3481225394230179824e-15,
   1.2267786282382607902e-15,
   -1.1812593016974587695e-16,
   1.1866922547516003326e-18,
   1.4123806553180317816e-18,
   -2.2987456844353702066e-19,
   1.7144063219273374334e-20,
};
constexpr int kRecipGammaTerms = sizeof(kRecipGamma) / sizeof(double);

struct TemmeGammas
{
   double gam1;   // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
   double gam2;   // (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
   double gampl;  // 1/Gamma(1+mu)
   double gammi;  // 1/Gamma(1-mu)
};

// Valid for |mu| <= 1/2. 1/Gamma(1+mu) = sum_j a[j+1] mu^j, so the even and
// odd parts give gam2 and gam1 without cancellation near mu = 0.
TemmeGammas temme_gammas(double mu)
{
   const double mu2 = mu * mu;
   double even = 0.0;
   double odd = 0.0;
   for (int j = kRecipGammaTerms - 2; j >= 0; --j)
   {
      const double a = kRecipGamma[j + 1];
      if (j % 2 == 0) { even = even * mu2 + a; }
      else { odd = odd * mu2 + a; }
   }
   // odd holds sum over odd j of a[j+1] mu^(j-1)
   TemmeGammas g{};
   g.gam1 = -odd;
   g.gam2 = even;
   g.gampl = even + mu * odd;
   g.gammi = even - mu * odd;
   return g;
}

struct KPair
{
   double k_mu;
   double k_mu1;
};

// K_mu and K_{mu+1} for |mu| <= 1/2, z > 0.
KPair bessel_k_reduced(double mu, double z)
{
   constexpr double pi = std::numbers::pi;
   const double xi = 1.0 / z;
   if (z <= 2.0)
   {
      const double x2 = 0.5 * z;
      const double pimu = pi * mu;
      const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
      double d = -std::log(x2);
      double e = mu * d;
      const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
      const TemmeGammas g = temme_gammas(mu);
      double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
      double sum = ff;
      e = std::exp(e);
      double p = 0.5 * e / g.gampl;
      double q = 0.5 / (e * g.gammi);
      double c = 1.0;
      d = x2 * x2;
      double sum1 = p;
      int i = 1;
      for (; i <= kMaxIter; ++i)
      {
         const double di = static_cast<double>(i);
         ff = (di * ff + p + q) / (di * di - mu * mu);
         c *= d / di;
         p /= (di - mu);
         q /= (di + mu);
         const double del = c * ff;
         sum += del;
         const double del1 = c * (p - di * ff);
         sum1 += del1;
         if (std::abs(del) < std::abs(sum) * kEps) { break; }
      }
      if (i > kMaxIter) { throw std::runtime_error("bessel_k: series failed to converge"); }
      return {sum, sum1 * 2.0 * xi};
   }

   double b = 2.0 * (1.0 + z);
   double d = 1.0 / b;
   double h = d;
   double delh = d;
   double q1 = 0.0;
   double q2 = 1.0;
   const double a1 = 0.25 - mu * mu;
   double q = a1;
   double c = a1;
   double a = -a1;
   double s = 1.0 + q * delh;
   int i = 2;
   for (; i <= kMaxIter; ++i)
   {
      const double di = static_cast<double>(i);
      a -= 2.0 * (di - 1.0);
      c = -a * c / di;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) { break; }
   }
   if (i > kMaxIter) { throw std::runtime_error("bessel_k: continued fraction failed to converge"); }
   h = a1 * h;
   const double k_mu = std::sqrt(pi / (2.0 * z)) * std::exp(-z) / s;
   const double k_mu1 = k_mu * (mu + z + 0.5 - h) * xi;
   return {k_mu, k_mu1};
}

void check_argument(double z)
{
   if (!(z > 0.0) || !std::isfinite(z))
   {
      throw std::domain_error("bessel_k: argument must be positive and finite, got " +
                              std::to_string(z));
   }
}

void check_finite(double value, double nu, double z)
{
   if (!std::isfinite(value))
   {
      throw std::overflow_error("bessel_k: K_" + std::to_string(nu) + "(" + std::to_string(z) +
                                ") overflows double precision");
   }
}

} // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu)
{
   if (!(nu >= 0.0) || !std::isfinite(nu))
   {
      throw std::domain_error("BesselOrder: order must be a finite nonnegative number");
   }
}

std::array<double, 3> bessel_k_ladder(BesselOrder order, double z)
{
   check_argument(z);
   const double nu = order.value();
   const double n = std::round(nu);
   const double mu = nu - n;
   const int top = static_cast<int>(n);

   // vals[j - lo] holds K_{mu + j} for j in [lo, hi]
   const int lo = std::min(top - 2, 0);
   const int hi = std::max(top, 1);
   double vals[16];
   double* kv = vals - lo;  // kv[j] = K_{mu+j}
   std::array<double, 3> out{};
   if (hi - lo + 1 <= 16)
   {
      const KPair pair = bessel_k_reduced(mu, z);
      kv[0] = pair.k_mu;
      kv[1] = pair.k_mu1;
      for (int j = 1; j < hi; ++j)
      {
         kv[j + 1] = kv[j - 1] + (2.0 * (mu + j) / z) * kv[j];
      }
      for (int j = 0; j > lo; --j)
      {
         kv[j - 1] = kv[j + 1] - (2.0 * (mu + j) / z) * kv[j];
      }
      out = {kv[top - 2], kv[top - 1], kv[top]};
   }
   else
   {
      // high orders: walk the recurrence without storing
      const KPair pair = bessel_k_reduced(mu, z);
      double km = pair.k_mu;
      double kc = pair.k_mu1;
      double prev = 0.0;
      for (int j = 1; j < top; ++j)
      {
         const double kn = km + (2.0 * (mu + j) / z) * kc;
         prev = km;
         km = kc;
         kc = kn;
      }
      out = {prev, km, kc};
   }
   check_finite(out[2], nu, z);
   return out;
}

double bessel_k(BesselOrder nu, double z)
{
   return bessel_k_ladder(nu, z)[2];
}

double bessel_k_dz(BesselOrder order, double z)
{
   const auto k = bessel_k_ladder(order, z);
   const double nu = order.value();
   const double k_next = k[1] + (2.0 * nu / z) * k[2];
   check_finite(k_next, nu + 1.0, z);
   return -0.5 * (k[1] + k_next);
}

} // namespace lsqrbf
