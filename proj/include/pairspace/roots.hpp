#pragma once

#include "pairspace/types.hpp"

#include <cmath>
#include <limits>

namespace pairspace {

template <typename Scalar>
struct RootResult {
  Scalar root = Scalar(0);
  Scalar bracket_lo = Scalar(0);  // first sign-change bracket found by expansion
  Scalar bracket_hi = Scalar(0);
  Scalar residual = Scalar(0);    // f(root)
  Scalar scale = Scalar(0);       // magnitude of f's terms at the root
  int iterations = 0;
  bool converged = false;
};

/// Unique positive root of a strictly increasing f on (0, inf) with
/// f(0+) < 0 < f(inf).
///
/// The bracket is grown geometrically from `guess` until the sign changes,
/// then Newton steps are taken from inside the bracket, falling back to
/// bisection whenever a step would leave it. Iterates to machine precision;
/// `converged` reports |f(root)| <= tol * scale(root).
template <typename Scalar, typename F, typename DF, typename ScaleF>
RootResult<Scalar> increasing_root(const F& f, const DF& df, const ScaleF& scale, Scalar guess = Scalar(1),
                                   double tol = 1e-12) {
  using std::abs;
  if (!(guess > Scalar(0))) throw DomainError("root search needs a positive starting point");
  RootResult<Scalar> out;
  Scalar lo = guess;
  Scalar hi = guess;
  Scalar flo = f(lo);
  Scalar fhi = flo;
  for (int k = 0; flo > Scalar(0); ++k) {
    if (k > 2000) throw Error("root bracket expansion failed toward zero");
    hi = lo;
    fhi = flo;
    lo /= Scalar(2);
    flo = f(lo);
  }
  for (int k = 0; fhi < Scalar(0); ++k) {
    if (k > 2000) throw Error("root bracket expansion failed toward infinity");
    lo = hi;
    flo = fhi;
    hi *= Scalar(2);
    fhi = f(hi);
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;

  Scalar x;
  Scalar fx;
  if (flo == Scalar(0)) {
    x = lo;
    fx = flo;
  } else if (fhi == Scalar(0)) {
    x = hi;
    fx = fhi;
  } else {
    x = (lo + hi) / Scalar(2);
    fx = f(x);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int it = 0; it < 400 && fx != Scalar(0); ++it) {
      out.iterations = it + 1;
      if (fx < Scalar(0)) lo = x;
      else hi = x;
      const Scalar d = df(x);
      Scalar next = d > Scalar(0) ? x - fx / d : (lo + hi) / Scalar(2);
      if (!(next > lo && next < hi)) next = (lo + hi) / Scalar(2);
      const Scalar step = abs(next - x);
      x = next;
      fx = f(x);
      if (step <= Scalar(2) * eps * x || hi - lo <= Scalar(2) * eps * x) break;
    }
  }
  out.root = x;
  out.residual = fx;
  out.scale = scale(x);
  out.converged = abs(fx) <= Scalar(tol) * out.scale;
  return out;
}

}  // namespace pairspace
