#ifndef STORVAL_MARGINAL_HPP
#define STORVAL_MARGINAL_HPP

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace storval {

// Parametric supply marginals on [0, 1] (supply normalized to nameplate).

struct UniformMarginal {
    double lower = 0.0;
    double upper = 1.0;
};

struct BetaMarginal {
    double alpha = 1.0;
    double beta = 1.0;
};

// Normal(mean, sigma) conditioned on [0, 1].
struct TruncatedNormalMarginal {
    double mean = 0.5;
    double sigma = 0.2;
};

// Continuous CDF given by linear interpolation between knots. Knots must be
// strictly increasing in [0, 1], start at F = 0 and end at F = 1.
struct PiecewiseLinearMarginal {
    std::vector<double> knots;
    std::vector<double> cdf_values;
};

class Marginal {
public:
    using Family = std::variant<UniformMarginal, BetaMarginal, TruncatedNormalMarginal,
                                PiecewiseLinearMarginal>;

    // Throws InvalidArgument when the parameters do not describe a
    // distribution supported on [0, 1].
    explicit Marginal(Family family);

    static Marginal uniform(double lower = 0.0, double upper = 1.0);
    static Marginal beta(double alpha, double beta);
    static Marginal truncated_normal(double mean, double sigma);
    static Marginal piecewise_linear(std::vector<double> knots, std::vector<double> cdf_values);

    // P{xi <= x}; 0 below the support, 1 at and above 1.
    double cdf(double x) const;

    double sample(std::mt19937_64& rng) const;

    const Family& family() const { return family_; }
    std::string name() const;

private:
    Family family_;
    double normal_lo_mass_ = 0.0;  // truncated normal: Phi((0-mu)/sigma)
    double normal_mass_ = 1.0;     // truncated normal: Phi((1-mu)/sigma) - Phi((0-mu)/sigma)
};

}  // namespace storval

#endif  // STORVAL_MARGINAL_HPP
