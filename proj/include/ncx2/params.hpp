#pragma once

namespace ncx2 {

/// Degrees of freedom k > 0 and non-centrality lambda >= 0, both finite.
/// Construction validates; a Params value is always usable.
class Params {
public:
    Params(double k, double lambda);

    double k() const noexcept { return k_; }
    double lambda() const noexcept { return lambda_; }

    /// (k - 2) / 2, the Bessel order of the density.
    double order() const noexcept { return 0.5 * (k_ - 2.0); }

    friend bool operator==(const Params&, const Params&) = default;

private:
    double k_;
    double lambda_;
};

}  // namespace ncx2
