#pragma once

namespace fopid {

/// Selects the OpenMP kernel or the single-threaded path. Both produce
/// bit-identical results; the serial path exists for testing and benchmarks.
enum class Execution { Serial, Parallel };

}  // namespace fopid
