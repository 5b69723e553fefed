#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

namespace parsvm {

/// Callback over a contiguous index range [begin, end) handled as chunk `chunk`.
using chunk_fn = std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>;

/**
 * Fork-join team of persistent threads.
 *
 * `run` splits [0, n) into size() contiguous chunks of near-equal length, executes chunk 0 on the
 * calling thread and the rest on the team, and returns once every chunk is done. Chunk boundaries
 * depend only on n and size(). An exception thrown by any chunk is rethrown by `run`.
 */
class thread_team {
  public:
    explicit thread_team(std::size_t threads);
    ~thread_team();

    thread_team(const thread_team &) = delete;
    thread_team &operator=(const thread_team &) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return workers_.size() + 1; }

    void run(std::size_t n, const chunk_fn &fn);

  private:
    void worker_loop(std::size_t index);

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const chunk_fn *task_ = nullptr;
    std::size_t task_n_ = 0;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

/// Bounds of chunk `chunk` when [0, n) is split into `chunks` parts.
[[nodiscard]] std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n, std::size_t chunks,
                                                               std::size_t chunk) noexcept;

/// Default team size: hardware concurrency, at least 2 so the parallel path is always a real split.
[[nodiscard]] std::size_t default_thread_count() noexcept;

/**
 * Execution context for per-sample maps and reductions.
 *
 * A default-constructed executor runs everything on the calling thread as a single chunk. A parallel
 * executor owns its team and must be driven by one thread at a time.
 */
class executor {
  public:
    executor() = default;
    explicit executor(std::size_t threads);

    [[nodiscard]] bool is_parallel() const noexcept { return team_ != nullptr; }
    [[nodiscard]] std::size_t concurrency() const noexcept { return team_ ? team_->size() : 1; }

    void for_chunks(std::size_t n, const chunk_fn &fn) const;

    template <typename Fn>
    void for_each_index(std::size_t n, Fn &&fn) const {
        for_chunks(n, [&fn](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }

  private:
    std::shared_ptr<thread_team> team_;
};

enum class schedule { static_round_robin, dynamic_queue };

[[nodiscard]] std::string_view to_string(schedule s) noexcept;
/// Accepts "static" and "dynamic".
[[nodiscard]] schedule parse_schedule(std::string_view name);

struct pool_config {
    std::size_t workers = 1;
    schedule policy = schedule::dynamic_queue;
};

/**
 * Runs job(0) ... job(count - 1) on `cfg.workers` threads.
 *
 * Static scheduling hands job j to worker j % workers; dynamic scheduling lets idle workers pull
 * the next job index. Once a job throws, no further jobs are started; the exception of the lowest
 * failed job index is rethrown after all workers have stopped.
 */
void run_jobs(std::size_t count, const pool_config &cfg, const std::function<void(std::size_t job)> &job);

}  // namespace parsvm
