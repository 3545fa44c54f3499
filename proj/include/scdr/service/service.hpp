#pragma once

// HTTP facade under /api/v1: model registry, scenario CRUD and an
// asynchronous job queue for solves, sweeps and rolls.

#include <cstddef>
#include <memory>
#include <ostream>
#include <string>

namespace httplib {
class Server;
}

namespace scdr::service {

struct ServiceOptions {
  std::string model_dir;   // models at the top level, scenarios/ and results/ below
  int workers = 1;         // job worker threads
  std::size_t queue_cap = 16;  // queued (not yet running) jobs before 503
  int sweep_workers = 1;   // OpenMP threads inside one sweep job
};

enum class JobState { Queued, Running, Done, Error };

const char* to_string(JobState state);

class Service {
 public:
  /// Loads every readable model and scenario in `model_dir`; unreadable
  /// files are skipped with a line on `log`.
  explicit Service(ServiceOptions options, std::ostream* log = nullptr);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void mount(httplib::Server& server);

  /// Stops the workers after their current job. Queued jobs are dropped.
  void shutdown();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Serves until SIGINT or SIGTERM. Returns a process exit code.
int serve(const ServiceOptions& options, const std::string& host, int port, std::ostream& log);

}  // namespace scdr::service
