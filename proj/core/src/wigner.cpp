#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "vls/atomprops.hpp"

namespace vls::atomprops {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt factorial(int n) {
  BigInt r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// triad (a,b,c) in twice-units: integer sum and triangle inequalities
bool triad_ok(int a2, int b2, int c2) {
  if ((a2 + b2 + c2) % 2 != 0) return false;
  return c2 >= std::abs(a2 - b2) && c2 <= a2 + b2;
}

// Delta(a,b,c) = (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!
BigRat triangle_delta(int a2, int b2, int c2) {
  return BigRat(factorial((a2 + b2 - c2) / 2) * factorial((a2 - b2 + c2) / 2) *
                    factorial((-a2 + b2 + c2) / 2),
                factorial((a2 + b2 + c2) / 2 + 1));
}

}  // namespace

HalfInt HalfInt::from(double x) {
  double t = 2.0 * x;
  double r = std::round(t);
  if (std::abs(t - r) > 1e-9 || r < 0) {
    throw std::invalid_argument("angular momentum must be a non-negative half-integer");
  }
  return HalfInt(static_cast<int>(r));
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt j4, HalfInt j5, HalfInt j6) {
  const int a = j1.twice, b = j2.twice, c = j3.twice;
  const int d = j4.twice, e = j5.twice, f = j6.twice;
  for (int t : {a, b, c, d, e, f}) {
    if (t < 0) throw std::invalid_argument("negative angular momentum");
  }
  if (!triad_ok(a, b, c) || !triad_ok(a, e, f) ||
      !triad_ok(d, b, f) || !triad_ok(d, e, c)) {
    return 0.0;
  }

  // Racah sum; all quantities below are exact rationals.
  const int s1 = (a + b + c) / 2, s2 = (a + e + f) / 2;
  const int s3 = (d + b + f) / 2, s4 = (d + e + c) / 2;
  const int t1 = (a + b + d + e) / 2, t2 = (b + c + e + f) / 2,
            t3 = (c + a + f + d) / 2;

  const int tlo = std::max({s1, s2, s3, s4});
  const int thi = std::min({t1, t2, t3});

  BigRat sum = 0;
  for (int t = tlo; t <= thi; ++t) {
    BigInt den = factorial(t - s1) * factorial(t - s2) * factorial(t - s3) *
                 factorial(t - s4) * factorial(t1 - t) * factorial(t2 - t) *
                 factorial(t3 - t);
    BigRat term(factorial(t + 1), den);
    if (t % 2 != 0) term = -term;
    sum += term;
  }

  const BigRat delta = triangle_delta(a, b, c) * triangle_delta(a, e, f) *
                       triangle_delta(d, b, f) * triangle_delta(d, e, c);
  return std::sqrt(delta.convert_to<double>()) * sum.convert_to<double>();
}

double wigner6j(double j1, double j2, double j3,
                double j4, double j5, double j6) {
  return wigner6j(HalfInt::from(j1), HalfInt::from(j2), HalfInt::from(j3),
                  HalfInt::from(j4), HalfInt::from(j5), HalfInt::from(j6));
}

}  // namespace vls::atomprops
