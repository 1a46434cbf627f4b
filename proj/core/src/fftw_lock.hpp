#pragma once

#include <mutex>

namespace flexscat::detail {

// FFTW planning is not thread-safe; every plan create/destroy goes through this.
std::mutex& fftw_planner_mutex();

}  // namespace flexscat::detail
