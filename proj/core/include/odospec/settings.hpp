#pragma once

namespace odospec {

/// Precision knobs threaded through every pipeline.
struct Settings {
    long prec = 48;   ///< working series precision (coefficient count for exact data)
    long depth = 12;  ///< kept pseudo-differential depth below the top power
    long tau = 16;    ///< confident-zero threshold: a series counts as zero only
                      ///< when it is known to vanish through z^tau
};

}  // namespace odospec
