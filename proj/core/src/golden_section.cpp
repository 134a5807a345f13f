#include "storval/golden_section.hpp"

#include <array>
#include <cmath>

#include "storval/errors.hpp"

namespace storval {

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lower,
                                            double upper, double tol, TieBreak ties) {
    if (!(tol > 0.0)) throw InvalidArgument("golden-section tolerance must be > 0");
    if (!(lower <= upper)) throw InvalidArgument("golden-section bracket is inverted");

    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    GoldenSectionResult out;
    auto eval = [&](double x) {
        ++out.evaluations;
        return f(x);
    };
    // On equal values, shrink toward the preferred end.
    auto keep_left = [&](double fc, double fd) {
        return ties == TieBreak::lower ? fc >= fd : fc > fd;
    };

    double a = lower;
    double b = upper;
    if (b - a > tol) {
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = eval(c);
        double fd = eval(d);
        while (b - a > tol) {
            if (keep_left(fc, fd)) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d);
            }
        }
    }

    const std::array<double, 3> xs{a, 0.5 * (a + b), b};
    std::array<double, 3> fs{};
    for (std::size_t i = 0; i < 3; ++i) fs[i] = eval(xs[i]);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        const bool better = ties == TieBreak::lower ? fs[i] > fs[best] : fs[i] >= fs[best];
        if (better) best = i;
    }
    out.argmax = xs[best];
    out.value = fs[best];
    out.lower = a;
    out.upper = b;
    return out;
}

}  // namespace storval
