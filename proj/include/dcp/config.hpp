#pragma once

#include "dcp/error.hpp"
#include "dcp/rootfind.hpp"
#include "dcp/scores.hpp"

namespace dcp {

// Full run configuration. Defaults target 90% nominal coverage with the
// standard margins: zeta 1.645, kappa 2, and the root-finder constants.
struct Config {
    double alpha = 0.1;   // nominal miscoverage
    double zeta = 1.645;  // one-sided confidence margin multiplier
    double kappa = 2.0;   // undercoverage penalty growth factor
    RootFindConfig root;
    ScoreSpec score;
    bool online = false;
    int window_len = 0;  // 0: window capacity equals the calibration size

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::BadInput, "alpha must lie in (0,1)");
        if (zeta < 0.0) raise(Errc::BadInput, "zeta must be nonnegative");
        if (kappa < 0.0) raise(Errc::BadInput, "kappa must be nonnegative");
        if (!(score.band_alpha > 0.0 && score.band_alpha < 1.0))
            raise(Errc::BadInput, "band_alpha must lie in (0,1)");
        if (score.k < 1) raise(Errc::BadInput, "k must be positive");
        if (!(score.sigma_floor > 0.0) || !(score.width_floor > 0.0))
            raise(Errc::BadInput, "floors must be positive");
        if (!(root.h0 > 0.0)) raise(Errc::BadInput, "h0 must be positive");
        if (!(root.gamma > 1.0)) raise(Errc::BadInput, "gamma must exceed 1");
        if (root.depth < 1) raise(Errc::BadInput, "depth must be >= 1");
        if (!(root.tol > 0.0)) raise(Errc::BadInput, "tol must be positive");
        if (window_len < 0) raise(Errc::BadInput, "window_len must be nonnegative");
    }
};

}  // namespace dcp
