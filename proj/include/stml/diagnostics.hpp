#pragma once

#include <mutex>
#include <string>
#include <vector>

namespace stml {

struct Diagnostic {
    std::string source;
    std::string message;
};

/// Thread-safe sink for non-fatal warnings (neutrality, clamping, grid snapping).
/// Functions accept a nullable pointer; passing nullptr discards warnings.
class Diagnostics {
public:
    void warn(std::string source, std::string message) {
        std::lock_guard lock(mutex_);
        entries_.push_back({std::move(source), std::move(message)});
    }

    std::vector<Diagnostic> entries() const {
        std::lock_guard lock(mutex_);
        return entries_;
    }

    bool empty() const {
        std::lock_guard lock(mutex_);
        return entries_.empty();
    }

private:
    mutable std::mutex mutex_;
    std::vector<Diagnostic> entries_;
};

inline void warn(Diagnostics* diag, std::string source, std::string message) {
    if (diag) diag->warn(std::move(source), std::move(message));
}

}  // namespace stml
