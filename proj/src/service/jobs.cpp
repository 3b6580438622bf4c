#include "curricula/service/jobs.hpp"

#include "curricula/error.hpp"

namespace curricula::service {

std::string_view to_string(JobStatus status) noexcept {
  switch (status) {
    case JobStatus::queued: return "queued";
    case JobStatus::running: return "running";
    case JobStatus::done: return "done";
    case JobStatus::failed: return "failed";
  }
  return "unknown";
}

nlohmann::json job_to_json(const JobInfo& job) {
  return {{"id", job.id},
          {"kind", job.kind},
          {"status", std::string(to_string(job.status))},
          {"result", job.result},
          {"error", job.error}};
}

JobRunner::JobRunner(std::size_t workers) {
  if (workers == 0) workers = 1;
  for (std::size_t i = 0; i < workers; ++i) workers_.emplace_back([this] { run(); });
}

JobRunner::~JobRunner() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (auto& t : workers_) t.join();
}

std::string JobRunner::submit(std::string kind, std::function<nlohmann::json()> work) {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "job-" + std::to_string(++counter_);
    jobs_[id] = JobInfo{id, std::move(kind), JobStatus::queued, nullptr, nullptr};
    queue_.emplace_back(id, std::move(work));
  }
  changed_.notify_all();
  return id;
}

JobInfo JobRunner::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, id);
  return it->second;
}

JobInfo JobRunner::wait(const std::string& id) const {
  std::unique_lock lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, id);
  changed_.wait(lock, [&] { return it->second.status == JobStatus::done || it->second.status == JobStatus::failed; });
  return it->second;
}

void JobRunner::run() {
  while (true) {
    std::pair<std::string, std::function<nlohmann::json()>> item;
    {
      std::unique_lock lock(mutex_);
      changed_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      item = std::move(queue_.front());
      queue_.pop_front();
      jobs_[item.first].status = JobStatus::running;
    }
    nlohmann::json result, error;
    bool ok = true;
    try {
      result = item.second();
    } catch (const Error& e) {
      ok = false;
      error = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    } catch (const std::exception& e) {
      ok = false;
      error = {{"code", "Internal"}, {"message", e.what()}};
    }
    {
      std::lock_guard lock(mutex_);
      auto& job = jobs_[item.first];
      job.status = ok ? JobStatus::done : JobStatus::failed;
      job.result = std::move(result);
      job.error = std::move(error);
    }
    changed_.notify_all();
  }
}

}  // namespace curricula::service
