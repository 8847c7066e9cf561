#pragma once

// The perturbed odd power map
//
//   f(t) = lambda |t|^{r-1} t + |t|^{p-1} t,     0 < r < p, lambda > 0,
//
// its monotone inverse, and the antiderivative Fbar(tau) = int_0^tau f^{-1}.
// Fbar has two equivalent closed forms in terms of z = f^{-1}(tau):
//
//   Fbar = lambda r/(r+1) |z|^{r+1} + p/(p+1) |z|^{p+1}              (primary)
//   Fbar = p/(p+1) z tau - (p-r)/(p+1) * lambda/(r+1) |z|^{r+1}      (alternate)
//
// Their agreement is a strong self-check and both are exercised in tests.

#include <algorithm>
#include <cmath>
#include <limits>

#include "hamsys/errors.hpp"

namespace hamsys {

class PerturbedPower {
  public:
    PerturbedPower(double lambda, double r, double p)
        : lambda_(lambda), r_(r), p_(p) {
        if (!(lambda > 0.0)) throw DomainError("PerturbedPower: lambda must be > 0");
        if (!(0.0 < r && r < p)) throw DomainError("PerturbedPower: need 0 < r < p");
    }

    double lambda() const { return lambda_; }
    double r() const { return r_; }
    double p() const { return p_; }

    double f(double t) const {
        if (t == 0.0) return 0.0;
        const double a = std::fabs(t);
        return std::copysign(lambda_ * std::pow(a, r_) + std::pow(a, p_), t);
    }

    double f_prime(double t) const {
        const double a = std::fabs(t);
        if (a == 0.0) return r_ < 1.0 ? std::numeric_limits<double>::infinity() : (r_ == 1.0 ? lambda_ : 0.0);
        return lambda_ * r_ * std::pow(a, r_ - 1.0) + p_ * std::pow(a, p_ - 1.0);
    }

    /// Monotone inverse, solved by bracketed Newton with bisection fallback.
    /// Bracket: 0 < f^{-1}(tau) < min(tau^{1/p}, (tau/lambda)^{1/r}) for tau > 0.
    double f_inv(double tau) const {
        if (tau == 0.0) return 0.0;
        const double a = std::fabs(tau);
        double hi = std::min(std::pow(a, 1.0 / p_), std::pow(a / lambda_, 1.0 / r_));
        double lo = 0.0;
        double t = hi;
        // g(t) = f(t) - a, increasing, g(lo) < 0 <= g(hi).
        for (int it = 0; it < 200; ++it) {
            const double g = lambda_ * std::pow(t, r_) + std::pow(t, p_) - a;
            if (g == 0.0) break;
            (g > 0.0 ? hi : lo) = t;
            const double gp = lambda_ * r_ * std::pow(t, r_ - 1.0) + p_ * std::pow(t, p_ - 1.0);
            double tn = t - g / gp;
            if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);  // bisect when Newton escapes
            if (std::fabs(tn - t) <= 1e-16 * t) { t = tn; break; }
            t = tn;
        }
        return std::copysign(t, tau);
    }

    /// Fbar(tau) = int_0^tau f^{-1}(x) dx, via the primary closed form. Even.
    double Fbar(double tau) const {
        const double z = std::fabs(f_inv(tau));
        return lambda_ * r_ / (r_ + 1.0) * std::pow(z, r_ + 1.0) +
               p_ / (p_ + 1.0) * std::pow(z, p_ + 1.0);
    }

    /// Alternate closed form for Fbar (independent arrangement, for checks).
    double Fbar_alt(double tau) const {
        const double z = f_inv(tau);
        return p_ / (p_ + 1.0) * z * tau -
               (p_ - r_) / (p_ + 1.0) * lambda_ / (r_ + 1.0) *
                   std::pow(std::fabs(z), r_ + 1.0);
    }

    /// Crossover between the lambda-dominated and power-dominated branches:
    /// T* = 2 lambda^{p/(p-r)} = f(lambda^{1/(p-r)}).
    double crossover() const { return 2.0 * std::pow(lambda_, p_ / (p_ - r_)); }

    /// (t^{(p+1)/p} - f^{-1}(t) t) / t^{(r+1)/p} for t > 0, computed in a
    /// cancellation-free arrangement; the limit for t -> infinity is lambda/p.
    double asymptotic_ratio(double t) const {
        if (!(t > 0.0)) throw DomainError("asymptotic_ratio: t must be > 0");
        const double z = f_inv(t);
        // t^{1/p} = z (1 + lambda z^{r-p})^{1/p}, so
        // t^{1/p} - z = z expm1(log1p(lambda z^{r-p}) / p).
        const double u = lambda_ * std::pow(z, r_ - p_);
        const double diff = z * std::expm1(std::log1p(u) / p_);
        return t * diff / std::pow(t, (r_ + 1.0) / p_);
    }

  private:
    double lambda_, r_, p_;
};

} // namespace hamsys
