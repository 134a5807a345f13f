#include "storval/errors.hpp"

namespace storval {

TraceFormatError::TraceFormatError(std::size_t row, const std::string& what)
    : InvalidArgument("trace row " + std::to_string(row) + ": " + what), row_(row) {}

}  // namespace storval
