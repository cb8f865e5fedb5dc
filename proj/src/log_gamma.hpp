#pragma once

#include <cmath>

namespace ncx2::detail {

// std::lgamma writes the global signgam on glibc; the reentrant variant does not.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

}  // namespace ncx2::detail
