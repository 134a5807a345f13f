#include "storval/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "storval/errors.hpp"
#include "storval/random.hpp"

namespace storval {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

bool finite(double v) { return std::isfinite(v); }

void validate(const UniformMarginal& m) {
    if (!finite(m.lower) || !finite(m.upper) || m.lower < 0.0 || m.upper > 1.0 ||
        !(m.lower < m.upper))
        throw InvalidArgument("uniform marginal needs 0 <= a < b <= 1");
}

void validate(const BetaMarginal& m) {
    if (!finite(m.alpha) || !finite(m.beta) || m.alpha <= 0.0 || m.beta <= 0.0)
        throw InvalidArgument("beta marginal needs alpha > 0 and beta > 0");
}

void validate(const TruncatedNormalMarginal& m) {
    if (!finite(m.mean) || !finite(m.sigma) || m.sigma <= 0.0)
        throw InvalidArgument("truncated-normal marginal needs a finite mean and sigma > 0");
}

void validate(const PiecewiseLinearMarginal& m) {
    const auto& xs = m.knots;
    const auto& fs = m.cdf_values;
    if (xs.size() < 2 || xs.size() != fs.size())
        throw InvalidArgument("piecewise-linear CDF needs >= 2 knots with matching values");
    if (xs.front() < 0.0 || xs.back() > 1.0)
        throw InvalidArgument("piecewise-linear CDF knots must lie in [0, 1]");
    if (fs.front() != 0.0 || fs.back() != 1.0)
        throw InvalidArgument("piecewise-linear CDF must start at 0 and end at 1");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw InvalidArgument("piecewise-linear knots must increase");
        if (!(fs[i] >= fs[i - 1])) throw InvalidArgument("piecewise-linear CDF must not decrease");
    }
}

double piecewise_cdf(const PiecewiseLinearMarginal& m, double x) {
    const auto& xs = m.knots;
    const auto& fs = m.cdf_values;
    if (x < xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return fs[i - 1] + t * (fs[i] - fs[i - 1]);
}

// Inverse transform; flat segments are skipped because u in [0,1) lands in a
// segment with positive mass almost surely.
double piecewise_sample(const PiecewiseLinearMarginal& m, double u) {
    const auto& xs = m.knots;
    const auto& fs = m.cdf_values;
    const auto it = std::upper_bound(fs.begin(), fs.end(), u);
    if (it == fs.end()) return xs.back();
    const std::size_t i = static_cast<std::size_t>(it - fs.begin());
    if (i == 0) return xs.front();
    const double t = (u - fs[i - 1]) / (fs[i] - fs[i - 1]);
    return xs[i - 1] + t * (xs[i] - xs[i - 1]);
}

}  // namespace

Marginal::Marginal(Family family) : family_(std::move(family)) {
    std::visit([](const auto& m) { validate(m); }, family_);
    if (const auto* tn = std::get_if<TruncatedNormalMarginal>(&family_)) {
        normal_lo_mass_ = normal_cdf((0.0 - tn->mean) / tn->sigma);
        normal_mass_ = normal_cdf((1.0 - tn->mean) / tn->sigma) - normal_lo_mass_;
        if (!(normal_mass_ > 1e-4))
            throw InvalidArgument("truncated-normal marginal puts less than 1e-4 mass on [0, 1]");
    }
}

Marginal Marginal::uniform(double lower, double upper) {
    return Marginal(UniformMarginal{lower, upper});
}

Marginal Marginal::beta(double alpha, double beta) { return Marginal(BetaMarginal{alpha, beta}); }

Marginal Marginal::truncated_normal(double mean, double sigma) {
    return Marginal(TruncatedNormalMarginal{mean, sigma});
}

Marginal Marginal::piecewise_linear(std::vector<double> knots, std::vector<double> cdf_values) {
    return Marginal(PiecewiseLinearMarginal{std::move(knots), std::move(cdf_values)});
}

double Marginal::cdf(double x) const {
    if (std::isnan(x)) throw InvalidArgument("cdf evaluated at NaN");
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    struct Visitor {
        const Marginal& self;
        double x;
        double operator()(const UniformMarginal& m) const {
            if (x < m.lower) return 0.0;
            if (x >= m.upper) return 1.0;
            return (x - m.lower) / (m.upper - m.lower);
        }
        double operator()(const BetaMarginal& m) const {
            return boost::math::ibeta(m.alpha, m.beta, x);
        }
        double operator()(const TruncatedNormalMarginal& m) const {
            const double v = (normal_cdf((x - m.mean) / m.sigma) - self.normal_lo_mass_) /
                             self.normal_mass_;
            return std::clamp(v, 0.0, 1.0);
        }
        double operator()(const PiecewiseLinearMarginal& m) const { return piecewise_cdf(m, x); }
    };
    return std::visit(Visitor{*this, x}, family_);
}

double Marginal::sample(std::mt19937_64& rng) const {
    struct Visitor {
        std::mt19937_64& rng;
        double operator()(const UniformMarginal& m) const {
            return m.lower + (m.upper - m.lower) * uniform01(rng);
        }
        double operator()(const BetaMarginal& m) const {
            std::gamma_distribution<double> ga(m.alpha, 1.0);
            std::gamma_distribution<double> gb(m.beta, 1.0);
            const double a = ga(rng);
            const double b = gb(rng);
            const double s = a + b;
            return s > 0.0 ? std::clamp(a / s, 0.0, 1.0) : 0.5;
        }
        double operator()(const TruncatedNormalMarginal& m) const {
            std::normal_distribution<double> nd(m.mean, m.sigma);
            for (;;) {
                const double v = nd(rng);
                if (v >= 0.0 && v <= 1.0) return v;
            }
        }
        double operator()(const PiecewiseLinearMarginal& m) const {
            return piecewise_sample(m, uniform01(rng));
        }
    };
    return std::visit(Visitor{rng}, family_);
}

std::string Marginal::name() const {
    struct Visitor {
        std::string operator()(const UniformMarginal&) const { return "uniform"; }
        std::string operator()(const BetaMarginal&) const { return "beta"; }
        std::string operator()(const TruncatedNormalMarginal&) const { return "truncated-normal"; }
        std::string operator()(const PiecewiseLinearMarginal&) const { return "piecewise-linear"; }
    };
    return std::visit(Visitor{}, family_);
}

}  // namespace storval
