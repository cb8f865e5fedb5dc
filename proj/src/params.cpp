#include "ncx2/params.hpp"

#include <cmath>
#include <string>

#include "ncx2/errors.hpp"

namespace ncx2 {

Params::Params(double k, double lambda) : k_(k), lambda_(lambda) {
    if (!std::isfinite(k) || !(k > 0.0))
        throw DomainError("degrees of freedom must be finite and > 0, got " + std::to_string(k));
    if (!std::isfinite(lambda) || !(lambda >= 0.0))
        throw DomainError("non-centrality must be finite and >= 0, got " + std::to_string(lambda));
}

}  // namespace ncx2
