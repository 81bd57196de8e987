#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace nearkit::cli {

template <class T>
std::vector<T> run_indexed(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i] = fn(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          slots[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace nearkit::cli
