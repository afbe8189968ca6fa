#pragma once

#include <exception>
#include <mutex>

namespace mdfit::detail {

// Exceptions must not escape an OpenMP region; park the first one and
// rethrow after the loop.
class ExceptionSlot {
  public:
    template <class F>
    void run(F&& body) noexcept
    {
        try {
            body();
        } catch (...) {
            std::lock_guard lock(mu_);
            if (!first_) { first_ = std::current_exception(); }
        }
    }

    void rethrow() const
    {
        if (first_) { std::rethrow_exception(first_); }
    }

  private:
    std::mutex mu_;
    std::exception_ptr first_;
};

} // namespace mdfit::detail
