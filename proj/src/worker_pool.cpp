#include "ddbench/worker_pool.hpp"

#include <algorithm>

namespace ddbench {

int WorkerPool::resolve(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

WorkerPool::WorkerPool(int workers) : workers_(std::max(workers, 1)) {
    threads_.reserve(workers_ > 1 ? workers_ : 0);
    for (int t = 1; t < workers_; ++t) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard<std::mutex> lk(mu_);
        stop_ = true;
    }
    work_cv_.notify_all();
    for (auto& th : threads_) th.join();
}

void WorkerPool::run_tasks() {
    for (;;) {
        int idx;
        {
            std::lock_guard<std::mutex> lk(mu_);
            if (next_index_ >= job_count_ || first_error_) break;
            idx = next_index_++;
        }
        try {
            (*job_)(idx);
        } catch (...) {
            std::lock_guard<std::mutex> lk(mu_);
            if (!first_error_) first_error_ = std::current_exception();
            break;
        }
    }
}

void WorkerPool::worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
        {
            std::unique_lock<std::mutex> lk(mu_);
            work_cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            ++active_;
        }
        run_tasks();
        {
            std::lock_guard<std::mutex> lk(mu_);
            if (--active_ == 0) done_cv_.notify_all();
        }
    }
}

void WorkerPool::parallel_for(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (workers_ == 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    {
        std::lock_guard<std::mutex> lk(mu_);
        job_ = &fn;
        job_count_ = count;
        next_index_ = 0;
        first_error_ = nullptr;
        ++generation_;
    }
    work_cv_.notify_all();
    run_tasks();  // the caller participates
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [&] {
        return active_ == 0 && (next_index_ >= job_count_ || first_error_ != nullptr);
    });
    job_ = nullptr;
    if (first_error_) {
        auto err = first_error_;
        first_error_ = nullptr;
        std::rethrow_exception(err);
    }
}

}  // namespace ddbench
