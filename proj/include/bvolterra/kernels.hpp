#pragma once

namespace bvolterra {

/// Selects the serial reference or the OpenMP path of a data-parallel kernel.
enum class Execution { serial, parallel };

/// Threads an OpenMP region would use; 1 when built without OpenMP.
int parallel_threads();

}  // namespace bvolterra
