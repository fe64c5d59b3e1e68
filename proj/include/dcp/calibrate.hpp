#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "dcp/error.hpp"

namespace dcp {

// Rank of the conformal threshold: the ceil((N+1)(1-alpha))-th smallest score.
// Computed as (N+1) - floor((N+1)*alpha), which is the same integer but avoids
// the upward rounding of (N+1)*(1-alpha) at exact-integer boundaries.
inline std::size_t threshold_rank(std::size_t n, double alpha) {
    const double na = static_cast<double>(n + 1) * alpha;
    const auto fl = static_cast<std::size_t>(std::floor(na));
    return n + 1 - fl;
}

// Conformal threshold q-hat over a calibration score collection. At least
// 100(1-alpha)% of the scores are <= the returned value.
inline double threshold(std::span<const double> scores, double alpha) {
    const std::size_t n = scores.size();
    if (n == 0) raise(Errc::EmptySet, "threshold of an empty score collection");
    if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::BadInput, "alpha must lie in (0,1)");
    const std::size_t r = threshold_rank(n, alpha);
    if (r > n) {
        raise(Errc::InsufficientCalibration,
              "need ceil((N+1)(1-alpha)) <= N calibration scores");
    }
    std::vector<double> work(scores.begin(), scores.end());
    auto nth = work.begin() + static_cast<std::ptrdiff_t>(r - 1);
    std::nth_element(work.begin(), nth, work.end());
    return *nth;
}

inline double threshold(const std::vector<double>& scores, double alpha) {
    return threshold(std::span<const double>(scores), alpha);
}

// Fixed-capacity FIFO of the most recent calibration scores plus the threshold
// for its current contents. Single-writer: the online loop is sequential since
// each q-hat depends on the previously revealed target.
class CalibrationWindow {
  public:
    CalibrationWindow(std::span<const double> initial_scores, double alpha)
        : scores_(initial_scores.begin(), initial_scores.end()),
          capacity_(initial_scores.size()),
          alpha_(alpha) {
        for (double s : scores_) {
            if (!std::isfinite(s)) raise(Errc::NonFinite, "calibration score is not finite");
        }
        recompute();
    }

    // Drop the oldest score, append the new one, refresh q-hat.
    void update(double new_score) {
        if (!std::isfinite(new_score)) raise(Errc::NonFinite, "window update with non-finite score");
        scores_.pop_front();
        scores_.push_back(new_score);
        recompute();
    }

    double qhat() const { return qhat_; }
    double alpha() const { return alpha_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return scores_.size(); }
    const std::deque<double>& scores() const { return scores_; }

  private:
    void recompute() {
        std::vector<double> snapshot(scores_.begin(), scores_.end());
        qhat_ = dcp::threshold(std::span<const double>(snapshot), alpha_);
    }

    std::deque<double> scores_;
    std::size_t capacity_;
    double alpha_;
    double qhat_ = 0.0;
};

inline CalibrationWindow window_init(std::span<const double> initial_scores, double alpha) {
    return CalibrationWindow(initial_scores, alpha);
}

inline CalibrationWindow window_init(const std::vector<double>& initial_scores, double alpha) {
    return CalibrationWindow(std::span<const double>(initial_scores), alpha);
}

inline void window_update(CalibrationWindow& w, double new_score) { w.update(new_score); }

}  // namespace dcp
