#ifndef MBRX_SERIES_HPP
#define MBRX_SERIES_HPP

#include <vector>

namespace mbrx {

// Reaction-probability estimators on a common time grid.
//   P:    integrated probability density over the product region (wave runs)
//   W:    fraction of trajectories currently in the product region
//   Wbar: fraction of trajectories that have ever been in the product region
// P is empty for purely classical runs; W/Wbar are empty when no trajectories
// were propagated.
struct ProbabilitySeries {
    std::vector<double> t;
    std::vector<double> P;
    std::vector<double> W;
    std::vector<double> Wbar;
};

}  // namespace mbrx

#endif
