#ifndef STORVAL_TRACE_CSV_HPP
#define STORVAL_TRACE_CSV_HPP

#include <filesystem>
#include <istream>
#include <ostream>

#include "storval/wind_process.hpp"

namespace storval {

// Trace CSV: header `t0,t1,...,t{N-1}`, then one sample path of N decimals
// in [0, 1] per line (LF endings). A malformed row throws TraceFormatError
// carrying its 1-based line number.
TraceMatrix read_trace_csv(std::istream& in);
TraceMatrix read_trace_csv(const std::filesystem::path& file);

void write_trace_csv(std::ostream& out, const TraceMatrix& traces);

}  // namespace storval

#endif  // STORVAL_TRACE_CSV_HPP
