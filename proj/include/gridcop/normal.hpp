#pragma once

namespace gridcop {

double norm_pdf(double x);
double norm_cdf(double x);

// Inverse of norm_cdf on (0,1). Newton iteration polished to full double
// precision; throws DomainError outside (0,1).
double norm_quantile(double p);

// P(X <= x, Y <= y) for standard bivariate normal with correlation rho,
// |rho| < 1. Absolute error below 1e-13. Throws DomainError on |rho| >= 1.
double bivariate_normal_cdf(double x, double y, double rho);

}  // namespace gridcop
