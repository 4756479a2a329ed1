#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ddbench {

// Fixed-size pool running indexed task batches.  parallel_for blocks until
// every index is done; the first exception thrown by a task is rethrown on
// the calling thread.  A pool of size 1 runs everything inline.
//
// Correctness note for callers: tasks must write only to per-index state.
// The pool makes no ordering promises, so any cross-index reduction has to
// happen after parallel_for returns (and in a fixed order if the result is
// supposed to be reproducible across pool sizes).
class WorkerPool {
  public:
    explicit WorkerPool(int workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return workers_; }

    void parallel_for(int count, const std::function<void(int)>& fn);

    // 0 or negative means "use the hardware thread count".
    static int resolve(int requested);

  private:
    void worker_loop();
    void run_tasks();

    int workers_;
    std::vector<std::thread> threads_;

    std::mutex mu_;
    std::condition_variable work_cv_;
    std::condition_variable done_cv_;
    const std::function<void(int)>* job_ = nullptr;
    int job_count_ = 0;
    int next_index_ = 0;
    int active_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr first_error_;
};

}  // namespace ddbench
