#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conftri {

using cplx = std::complex<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ambient dimension n of R^n; the sphere is S^{n-1} and rho = (n-1)/2.
class Dimension {
public:
    explicit Dimension(int n) : n_(n) {
        if (n < 3) throw Error("Dimension: n must be >= 3, got " + std::to_string(n));
    }

    int n() const { return n_; }
    double rho() const { return 0.5 * (n_ - 1); }
    /// Dimension of the sphere itself.
    int sphere_dim() const { return n_ - 1; }

    bool operator==(const Dimension&) const = default;

private:
    int n_;
};

}  // namespace conftri
