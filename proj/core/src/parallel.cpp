#include "parsvm/parallel.hpp"

#include "parsvm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <string>

namespace parsvm {

std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n, std::size_t chunks, std::size_t chunk) noexcept {
    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;
    const std::size_t begin = chunk * base + std::min(chunk, extra);
    const std::size_t end = begin + base + (chunk < extra ? 1 : 0);
    return {begin, end};
}

std::size_t default_thread_count() noexcept {
    return std::max<std::size_t>(2, std::thread::hardware_concurrency());
}

thread_team::thread_team(std::size_t threads) {
    const std::size_t helpers = threads > 1 ? threads - 1 : 0;
    workers_.reserve(helpers);
    for (std::size_t w = 0; w < helpers; ++w) {
        workers_.emplace_back([this, w] { worker_loop(w + 1); });
    }
}

thread_team::~thread_team() {
    {
        std::lock_guard lock{ mutex_ };
        stop_ = true;
    }
    start_cv_.notify_all();
    for (auto &t : workers_) {
        t.join();
    }
}

void thread_team::run(std::size_t n, const chunk_fn &fn) {
    if (workers_.empty()) {
        fn(0, 0, n);
        return;
    }
    {
        std::lock_guard lock{ mutex_ };
        task_ = &fn;
        task_n_ = n;
        pending_ = workers_.size();
        error_ = nullptr;
        ++generation_;
    }
    start_cv_.notify_all();

    std::exception_ptr local_error;
    try {
        const auto [begin, end] = chunk_bounds(n, size(), 0);
        fn(0, begin, end);
    } catch (...) {
        local_error = std::current_exception();
    }

    std::unique_lock lock{ mutex_ };
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
    if (local_error) {
        std::rethrow_exception(local_error);
    }
    if (error_) {
        std::rethrow_exception(error_);
    }
}

void thread_team::worker_loop(std::size_t index) {
    std::size_t seen = 0;
    for (;;) {
        const chunk_fn *task = nullptr;
        std::size_t n = 0;
        {
            std::unique_lock lock{ mutex_ };
            start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) {
                return;
            }
            seen = generation_;
            task = task_;
            n = task_n_;
        }
        std::exception_ptr err;
        try {
            const auto [begin, end] = chunk_bounds(n, size(), index);
            (*task)(index, begin, end);
        } catch (...) {
            err = std::current_exception();
        }
        bool last = false;
        {
            std::lock_guard lock{ mutex_ };
            if (err && !error_) {
                error_ = err;
            }
            last = --pending_ == 0;
        }
        if (last) {
            done_cv_.notify_one();
        }
    }
}

executor::executor(std::size_t threads) {
    if (threads > 1) {
        team_ = std::make_shared<thread_team>(threads);
    }
}

void executor::for_chunks(std::size_t n, const chunk_fn &fn) const {
    if (team_) {
        team_->run(n, fn);
    } else {
        fn(0, 0, n);
    }
}

}  // namespace parsvm

namespace parsvm {

std::string_view to_string(schedule s) noexcept {
    return s == schedule::static_round_robin ? "static" : "dynamic";
}

schedule parse_schedule(std::string_view name) {
    if (name == "static") {
        return schedule::static_round_robin;
    }
    if (name == "dynamic") {
        return schedule::dynamic_queue;
    }
    throw precondition_error{ "unknown schedule '" + std::string(name) + "'" };
}

void run_jobs(std::size_t count, const pool_config &cfg, const std::function<void(std::size_t job)> &job) {
    if (cfg.workers == 0) {
        throw precondition_error{ "worker count must be positive" };
    }
    std::atomic<std::size_t> next{ 0 };
    std::atomic<bool> abort{ false };
    std::mutex error_mutex;
    std::size_t failed_job = count;
    std::exception_ptr failure;

    const auto execute = [&](std::size_t j) {
        try {
            job(j);
        } catch (...) {
            abort = true;
            std::lock_guard lock{ error_mutex };
            if (j < failed_job) {
                failed_job = j;
                failure = std::current_exception();
            }
        }
    };
    const auto worker = [&](std::size_t w) {
        if (cfg.policy == schedule::static_round_robin) {
            for (std::size_t j = w; j < count && !abort; j += cfg.workers) {
                execute(j);
            }
        } else {
            for (std::size_t j = next++; j < count && !abort; j = next++) {
                execute(j);
            }
        }
    };

    const std::size_t threads = std::min(cfg.workers, std::max<std::size_t>(count, 1));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back(worker, w);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace parsvm
