#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "curricula/error.hpp"
#include "curricula/service/config.hpp"
#include "curricula/service/jobs.hpp"
#include "curricula/service/recommendations.hpp"
#include "curricula/service/workspace.hpp"

// Last: <resolv.h>, pulled in by httplib, defines a `_res` macro that breaks Eigen.
#include <httplib.h>

namespace curricula::service {

/// HTTP status for a module error code.
int http_status(ErrorCode code) noexcept;

/// Periodically rejects expired suggestions. tick() sweeps once at the
/// workspace clock; the background thread calls it every `interval`.
class Sweeper {
 public:
  Sweeper(Workspace& workspace, std::chrono::milliseconds interval);
  ~Sweeper();

  std::vector<std::string> tick();
  void start();
  void stop();
  std::size_t ticks() const noexcept { return ticks_; }

 private:
  Workspace& workspace_;
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::thread thread_;
  std::atomic<std::size_t> ticks_{0};
};

/// JSON API over a workspace. Requests run concurrently; mutations funnel
/// through Workspace::execute; recommendation work goes to the job pool.
class ApiServer {
 public:
  ApiServer(const AppConfig& config, Workspace& workspace, std::shared_ptr<Recommendations> recommendations);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves on a background thread until stop().
  void start();
  /// Serves on the calling thread until stop().
  void listen();
  void stop();

  JobRunner& jobs() noexcept { return jobs_; }

 private:
  void routes();
  std::string authenticate(const httplib::Request& req) const;

  AppConfig config_;
  Workspace& workspace_;
  std::shared_ptr<Recommendations> recommendations_;
  std::map<std::string, std::string> contributor_by_token_;
  JobRunner jobs_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace curricula::service
