#pragma once
//
// Special functions used by the risk model and the likelihood fitter:
// log-Gamma, digamma, trigamma, log-Beta and the regularized incomplete
// Beta function. Everything is double precision, stateless and throws
// std::domain_error outside the stated domain.
//

namespace scenario_sizer::specfun {

/// ln Gamma(z) for z > 0.
double log_gamma(double z);

/// Psi(z) = Gamma'(z) / Gamma(z) for z > 0.
double digamma(double z);

/// Psi'(z) for z > 0. Strictly positive and decreasing.
double trigamma(double z);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// I_x(a, b), the regularized incomplete Beta function, for x in [0, 1].
double reg_inc_beta(double x, double a, double b);

}  // namespace scenario_sizer::specfun
