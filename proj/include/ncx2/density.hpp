#pragma once

#include "ncx2/params.hpp"

namespace ncx2 {

/// Natural log of the density at a point; log_f == -inf encodes density 0.
struct LogDensityValue {
    double log_f;
    double at_x;
};

/// ln f_{k,lambda}(x) for x >= 0.
///
/// Evaluated as a log-sum-exp over the Poisson mixture of central chi-squared
/// densities, so lambda of order 1e4 and beyond stays finite. lambda == 0 uses
/// the central closed form. At x == 0 the result depends on k only:
/// -inf for k > 2, -lambda/2 - ln 2 for k == 2, and DivergenceError for k < 2.
///
/// Throws DomainError for negative or non-finite x.
LogDensityValue log_pdf(const Params& p, double x);

/// exp(log_pdf); 0 where the log-density is -inf.
double pdf(const Params& p, double x);

/// d/dx ln f_{k,lambda}(x) for x > 0, by term-wise differentiation of the
/// mixture: (k/2 - 1 + E[J]) / x - 1/2, where J is the mixture index under the
/// posterior weights at x.
double dlogpdf_dx(const Params& p, double x);

/// Reference ln f from a plain forward sum of the first `terms` mixture terms
/// in extended precision. Slow and simple; meant for cross-checking log_pdf.
/// The caller picks `terms`; lambda/2 + 10*sqrt(lambda/2 + 1) + 20 is enough
/// for moderate x.
double log_pdf_mixture_oracle(const Params& p, double x, int terms);

}  // namespace ncx2
