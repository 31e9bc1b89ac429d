#pragma once

namespace eitats {

/// Selects between the OpenMP kernels and the serial reference path.
/// Both produce bit-identical results; the serial path exists for testing
/// and benchmarking.
enum class Execution { Serial, Parallel };

} // namespace eitats
