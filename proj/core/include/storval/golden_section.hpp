#ifndef STORVAL_GOLDEN_SECTION_HPP
#define STORVAL_GOLDEN_SECTION_HPP

#include <cstddef>
#include <functional>

namespace storval {

// Which end wins when objective values tie.
enum class TieBreak { lower, upper };

struct GoldenSectionResult {
    double argmax = 0.0;
    double value = 0.0;
    double lower = 0.0;  // final bracket
    double upper = 0.0;
    std::size_t evaluations = 0;

    double bracket_width() const { return upper - lower; }
};

// Maximizes a unimodal f on [lower, upper] until the bracket is no wider
// than tol. The reported point is the best of {lower, midpoint, upper} of the
// final bracket; ties go to the lower end by default, so on a plateau the
// left edge of the optimal set is returned.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lower,
                                            double upper, double tol,
                                            TieBreak ties = TieBreak::lower);

}  // namespace storval

#endif  // STORVAL_GOLDEN_SECTION_HPP
