#ifndef FDRCLASS_SUBBOTIN_HPP
#define FDRCLASS_SUBBOTIN_HPP

namespace fdrclass {

/// Tail exponent of the zeta-Subbotin density
///
///     d(x) = exp(-|x|^zeta / zeta) / L,   L = 2 Gamma(1/zeta) zeta^(1/zeta - 1).
///
/// zeta = 1 is the Laplace law and zeta = 2 the standard Gaussian.
class SubbotinShape {
public:
    /// Throws DomainError when zeta < 1 or is not finite.
    explicit SubbotinShape(double zeta);

    double zeta() const noexcept { return zeta_; }
    double log_normalizer() const noexcept { return log_normalizer_; }
    double normalizer() const noexcept;

    bool is_laplace() const noexcept { return zeta_ == 1.0; }
    bool is_gaussian() const noexcept { return zeta_ == 2.0; }

    friend bool operator==(const SubbotinShape&, const SubbotinShape&) = default;

private:
    double zeta_;
    double log_normalizer_;
};

double density(const SubbotinShape& shape, double x);
double log_density(const SubbotinShape& shape, double x);

/// Upper tail D(u) = P(X >= u). Closed forms are used for zeta in {1, 2}.
double upper_tail(const SubbotinShape& shape, double u);

/// log D(u), accurate far beyond the underflow point of upper_tail.
double log_upper_tail(const SubbotinShape& shape, double u);

/// Upper tail through the regularized incomplete gamma route only,
/// D(u) = Q(1/zeta, u^zeta / zeta) / 2 for u >= 0, whatever zeta is.
double upper_tail_general(const SubbotinShape& shape, double u);

/// Inverse of the upper tail: returns u with D(u) = p, for p in (0, 1).
double quantile(const SubbotinShape& shape, double p);

/// Inverse of the upper tail given log p, for log p < log(1/2).
/// Usable for p far below the smallest positive double.
double quantile_log(const SubbotinShape& shape, double log_p);

/// Quantile through the incomplete gamma route only.
double quantile_general(const SubbotinShape& shape, double p);

} // namespace fdrclass

#endif // FDRCLASS_SUBBOTIN_HPP
