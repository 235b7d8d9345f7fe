#pragma once

#include <chrono>
#include <map>
#include <string>

namespace sublev {

/// Wall-clock seconds per pipeline stage.
using StageTimings = std::map<std::string, double>;

/// Accumulates elapsed seconds into timings[stage] on destruction.
/// A null timings map makes the timer a no-op.
class StageTimer {
public:
    StageTimer(StageTimings* timings, std::string stage)
        : timings_(timings),
          stage_(std::move(stage)),
          start_(std::chrono::steady_clock::now()) {}

    ~StageTimer() {
        if (!timings_) return;
        const auto end = std::chrono::steady_clock::now();
        (*timings_)[stage_] +=
            std::chrono::duration<double>(end - start_).count();
    }

    StageTimer(const StageTimer&) = delete;
    StageTimer& operator=(const StageTimer&) = delete;

private:
    StageTimings* timings_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace sublev
