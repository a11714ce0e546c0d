#pragma once

#include <cstddef>
#include <functional>

namespace gwk {

// 0 selects hardware concurrency
void set_thread_count(int n);
int thread_count();

// calls fn(i) for i in [0, n) on the worker threads; fn must only write slot i
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gwk
