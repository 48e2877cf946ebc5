// Acceptance runner: one line per criterion, nonzero exit on any failure.
#include <cstdio>

#include "bgrt/acceptance.hpp"

int main() {
    const auto results = bgrt::run_acceptance();
    bool failed = false;
    for (const auto& r : results) {
        std::printf("[%2d] %-32s %-4s (%6.2fs)  %s\n", r.id, r.name.c_str(),
                    bgrt::to_string(r.status), r.seconds, r.detail.c_str());
        if (r.status == bgrt::CriterionStatus::fail) failed = true;
    }
    return failed ? 1 : 0;
}
