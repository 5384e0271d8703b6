#pragma once

#include <mutex>

namespace dtbc::detail {

// The FFTW planner is not reentrant; every plan creation and destruction takes this lock.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace dtbc::detail
