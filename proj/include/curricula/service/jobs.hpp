#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace curricula::service {

enum class JobStatus { queued, running, done, failed };

std::string_view to_string(JobStatus status) noexcept;

struct JobInfo {
  std::string id;
  std::string kind;
  JobStatus status = JobStatus::queued;
  nlohmann::json result;
  /// {"code", "message"} when failed.
  nlohmann::json error;
};

nlohmann::json job_to_json(const JobInfo& job);

/// Fixed-size worker pool running long recommendation jobs. Job ids are
/// "job-N" in submission order.
class JobRunner {
 public:
  explicit JobRunner(std::size_t workers);
  ~JobRunner();

  JobRunner(const JobRunner&) = delete;
  JobRunner& operator=(const JobRunner&) = delete;

  std::string submit(std::string kind, std::function<nlohmann::json()> work);
  /// Throws UnknownJob.
  JobInfo get(const std::string& id) const;
  /// Blocks until the job leaves the queue and finishes.
  JobInfo wait(const std::string& id) const;

 private:
  void run();

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::deque<std::pair<std::string, std::function<nlohmann::json()>>> queue_;
  std::map<std::string, JobInfo> jobs_;
  long counter_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace curricula::service
