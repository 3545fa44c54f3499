#include "scdr/service/service.hpp"

#include <csignal>
#include <pthread.h>

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <shared_mutex>
#include <thread>

#include <httplib.h>

#include "io/json_util.hpp"
#include "scdr/io/documents.hpp"
#include "scdr/runner/runner.hpp"

namespace scdr::service {

namespace fs = std::filesystem;
using io::Json;

const char* to_string(JobState state) {
  switch (state) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Error: return "error";
  }
  return "?";
}

namespace {

const std::string kApi = "/api/v1";
const char* kJsonType = "application/json";

// Errors raised inside handlers and turned into a status code and body.
struct HttpError {
  int status;
  std::string message;
  Json extra = Json::object();
};

bool valid_id(const std::string& id) {
  static const std::regex re("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, re);
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw HttpError{400, std::string("malformed body: ") + e.what()};
  }
}

std::vector<double> axis_values(const Json& v, const std::string& where) {
  if (v.is_string()) return runner::axis_from_spec(v.get<std::string>());
  if (!v.is_array() || v.empty()) throw DataError(where + ": expected \"start:stop:count\" or a list of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(io::detail::as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

struct Job {
  std::string id;
  std::string kind;
  std::string model_id;
  std::string scenario_id;
  std::string submitted_at;
  std::shared_ptr<const NetworkModel> model;
  io::ScenarioDocument scenario;

  // Kind-specific options, decoded at submission.
  runner::SweepKind sweep_kind = runner::SweepKind::Characterization;
  std::vector<double> axis1, axis2;
  int window = 0, steps = 0;

  JobState state = JobState::Queued;
  double progress = 0.0;
  std::string diagnostic;
  bool cancel_requested = false;
  std::shared_ptr<const std::string> result;  // set once, when done
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  std::ostream* log = nullptr;
  fs::path models_dir, scenarios_dir, results_dir;

  // Registry: readers share, writers take the lock exclusively.
  std::shared_mutex registry;
  std::map<std::string, std::shared_ptr<const NetworkModel>> models;
  std::map<std::string, std::shared_ptr<const io::ScenarioDocument>> scenarios;

  std::mutex jobs_mutex;
  std::condition_variable jobs_cv;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::deque<std::shared_ptr<Job>> queue;
  bool stopping = false;
  std::vector<std::thread> workers;
  std::mt19937_64 ids{std::random_device{}()};

  void note(const std::string& line) {
    if (log) *log << line << std::endl;
  }

  void load_directory() {
    fs::create_directories(scenarios_dir);
    fs::create_directories(results_dir);
    for (const auto& e : fs::directory_iterator(models_dir)) {
      if (!e.is_regular_file() || e.path().extension() != ".json") continue;
      const std::string id = e.path().stem().string();
      if (!valid_id(id)) continue;
      try {
        models[id] = std::make_shared<const NetworkModel>(io::load_model(e.path().string()));
      } catch (const std::exception& err) {
        note("skipping model " + e.path().string() + ": " + err.what());
      }
    }
    for (const auto& e : fs::directory_iterator(scenarios_dir)) {
      if (!e.is_regular_file() || e.path().extension() != ".json") continue;
      const std::string id = e.path().stem().string();
      if (!valid_id(id)) continue;
      try {
        scenarios[id] = std::make_shared<const io::ScenarioDocument>(io::load_scenario(e.path().string()));
      } catch (const std::exception& err) {
        note("skipping scenario " + e.path().string() + ": " + err.what());
      }
    }
  }

  // ---- jobs

  Json job_json(const Job& j) const {
    Json o;
    o["id"] = j.id;
    o["kind"] = j.kind;
    o["state"] = to_string(j.state);
    o["model_id"] = j.model_id;
    o["scenario_id"] = j.scenario_id;
    o["submitted_at"] = j.submitted_at;
    o["progress"] = j.progress;
    o["result"] = j.result ? Json(kApi + "/jobs/" + j.id + "/result") : Json(nullptr);
    o["diagnostic"] = j.diagnostic;
    return o;
  }

  std::string execute(Job& job) {
    const NetworkModel& model = *job.model;
    const auto& doc = job.scenario;
    if (job.kind == "solve") {
      auto r = runner::run(model, doc.scenario, doc.config, doc.solve);
      Json out;
      out["status"] = milp::to_string(r.solution.status);
      out["objective"] = io::detail::number_json(r.schedule.objective);
      out["kpis"] = io::kpis_to_json(r.kpis);
      out["schedule"] = io::schedule_to_json(r.schedule);
      out["diagnostic"] = r.solution.diagnostic;
      return out.dump();
    }
    if (job.kind == "sweep") {
      runner::SweepOptions so;
      so.solve = doc.solve;
      so.workers = options.sweep_workers;
      so.progress = [this, &job](size_t done, size_t total) {
        std::lock_guard lock(jobs_mutex);
        job.progress = static_cast<double>(done) / static_cast<double>(total);
      };
      auto grid = runner::sweep(model, doc.scenario, job.sweep_kind, job.axis1, job.axis2, doc.config, so);
      return io::grid_to_json(grid).dump();
    }
    auto r = runner::roll(model, doc.scenario, job.window, job.steps, doc.config, doc.solve);
    runner::StitchReport stitch;
    if (r.complete) stitch = runner::check_stitched(model, doc.scenario, doc.config, r);
    return io::roll_to_json(r, stitch).dump();
  }

  void worker_loop() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(jobs_mutex);
        jobs_cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (stopping) return;
        job = queue.front();
        queue.pop_front();
        job->state = JobState::Running;
      }
      std::shared_ptr<const std::string> body;
      std::string diagnostic;
      try {
        body = std::make_shared<const std::string>(execute(*job));
        io::write_file_atomic((results_dir / (job->id + ".json")).string(), *body + "\n");
      } catch (const std::exception& e) {
        body.reset();
        diagnostic = e.what();
      }
      std::lock_guard lock(jobs_mutex);
      if (job->cancel_requested) {
        job->state = JobState::Error;
        job->diagnostic = "canceled";
      } else if (body) {
        job->state = JobState::Done;
        job->progress = 1.0;
        job->result = std::move(body);
      } else {
        job->state = JobState::Error;
        job->diagnostic = diagnostic;
      }
    }
  }

  std::shared_ptr<Job> make_job(const Json& body) {
    if (!body.is_object()) throw HttpError{400, "expected a job object"};
    auto job = std::make_shared<Job>();
    try {
      io::detail::Reader r(body, "job");
      job->kind = r.string("kind");
      if (job->kind != "solve" && job->kind != "sweep" && job->kind != "roll")
        throw HttpError{400, "unknown job kind '" + job->kind + "' (expected solve, sweep or roll)"};
      job->model_id = r.string("model_id");
      job->scenario_id = r.string("scenario_id", "");
      Json options = Json::object();
      if (auto* o = r.find("options"); o && !o->is_null()) options = *o;
      r.finish();

      io::detail::Reader o(options, "job.options");
      if (job->kind == "sweep") {
        job->sweep_kind = runner::sweep_kind_from_string(o.string("sweep", "characterization"));
        job->axis1 = axis_values(o.get("axis1"), o.at("axis1"));
        job->axis2 = axis_values(o.get("axis2"), o.at("axis2"));
      } else if (job->kind == "roll") {
        job->window = o.integer("window");
        job->steps = o.integer("steps");
      }
      o.finish();
    } catch (const DataError& e) {
      throw HttpError{400, e.what()};
    }

    std::shared_lock lock(registry);
    auto m = models.find(job->model_id);
    if (m == models.end()) throw HttpError{404, "unknown model '" + job->model_id + "'"};
    job->model = m->second;
    if (!job->scenario_id.empty()) {
      auto s = scenarios.find(job->scenario_id);
      if (s == scenarios.end()) throw HttpError{404, "unknown scenario '" + job->scenario_id + "'"};
      job->scenario = *s->second;
    }
    return job;
  }

  // ---- handlers

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler h) {
    return [h](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const HttpError& e) {
        Json body = e.extra;
        body["error"] = e.message;
        res.status = e.status;
        res.set_content(body.dump(), kJsonType);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(Json{{"error", e.what()}}.dump(), kJsonType);
      }
    };
  }

  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), kJsonType);
  }

  static std::string id_param(const httplib::Request& req) {
    std::string id = req.matches[1];
    if (!valid_id(id)) throw HttpError{400, "bad id '" + id + "'"};
    return id;
  }

  static HttpError unprocessable(const std::exception& e, const ValidationReport* report) {
    HttpError err{422, e.what()};
    err.extra["errors"] = report ? Json(report->errors) : Json::array({e.what()});
    err.extra["warnings"] = report ? Json(report->warnings) : Json::array();
    return err;
  }

  void mount(httplib::Server& s) {
    s.Get(kApi + "/health", guarded([](const auto&, auto& res) { reply(res, 200, {{"status", "ok"}}); }));

    s.Get(kApi + "/models", guarded([this](const auto&, auto& res) {
      Json list = Json::array();
      std::shared_lock lock(registry);
      for (const auto& [id, m] : models)
        list.push_back({{"id", id},
                        {"periods", m->periods()},
                        {"materials", m->materials.size()},
                        {"nodes", m->nodes.size()},
                        {"arcs", m->arcs.size()}});
      reply(res, 200, list);
    }));

    s.Get(kApi + R"(/models/([^/]+))", guarded([this](const auto& req, auto& res) {
      std::string id = id_param(req);
      std::shared_ptr<const NetworkModel> m;
      {
        std::shared_lock lock(registry);
        auto it = models.find(id);
        if (it == models.end()) throw HttpError{404, "unknown model '" + id + "'"};
        m = it->second;
      }
      reply(res, 200, io::model_to_json(*m));
    }));

    s.Post(kApi + "/models", guarded([this](const auto& req, auto& res) {
      Json doc = parse_body(req);
      std::string id = req.has_param("id") ? req.get_param_value("id") : "";
      if (!id.empty() && !valid_id(id)) throw HttpError{400, "bad id '" + id + "'"};
      NetworkModel m;
      ValidationReport report;
      try {
        m = io::model_from_json(doc, "model", &report);
      } catch (const io::ValidationFailed& e) {
        throw unprocessable(e, &e.report);
      } catch (const DataError& e) {
        throw unprocessable(e, nullptr);
      }
      std::unique_lock lock(registry);
      if (id.empty()) {
        for (int k = 1; id.empty(); ++k)
          if (!models.count("model-" + std::to_string(k))) id = "model-" + std::to_string(k);
      } else if (models.count(id)) {
        throw HttpError{409, "model '" + id + "' already exists"};
      }
      io::save_model(m, (models_dir / (id + ".json")).string());
      models[id] = std::make_shared<const NetworkModel>(std::move(m));
      reply(res, 201, {{"id", id}, {"warnings", report.warnings}});
    }));

    s.Get(kApi + "/scenarios", guarded([this](const auto&, auto& res) {
      Json list = Json::array();
      std::shared_lock lock(registry);
      for (const auto& [id, d] : scenarios) list.push_back({{"id", id}, {"label", d->scenario.label}});
      reply(res, 200, list);
    }));

    s.Get(kApi + R"(/scenarios/([^/]+))", guarded([this](const auto& req, auto& res) {
      std::string id = id_param(req);
      std::shared_ptr<const io::ScenarioDocument> d;
      {
        std::shared_lock lock(registry);
        auto it = scenarios.find(id);
        if (it == scenarios.end()) throw HttpError{404, "unknown scenario '" + id + "'"};
        d = it->second;
      }
      reply(res, 200, io::scenario_to_json(*d));
    }));

    auto store_scenario = [this](const httplib::Request& req, httplib::Response& res, bool replace) {
      std::string id = id_param(req);
      Json body = parse_body(req);
      io::ScenarioDocument d;
      try {
        d = io::scenario_from_json(body, "scenario");
      } catch (const DataError& e) {
        throw unprocessable(e, nullptr);
      }
      std::unique_lock lock(registry);
      bool exists = scenarios.count(id) > 0;
      if (exists && !replace) throw HttpError{409, "scenario '" + id + "' already exists"};
      io::save_scenario(d, (scenarios_dir / (id + ".json")).string());
      scenarios[id] = std::make_shared<const io::ScenarioDocument>(std::move(d));
      reply(res, exists ? 200 : 201, {{"id", id}});
    };
    s.Post(kApi + R"(/scenarios/([^/]+))",
           guarded([store_scenario](const auto& req, auto& res) { store_scenario(req, res, false); }));
    s.Put(kApi + R"(/scenarios/([^/]+))",
          guarded([store_scenario](const auto& req, auto& res) { store_scenario(req, res, true); }));

    s.Delete(kApi + R"(/scenarios/([^/]+))", guarded([this](const auto& req, auto& res) {
      std::string id = id_param(req);
      std::unique_lock lock(registry);
      if (!scenarios.erase(id)) throw HttpError{404, "unknown scenario '" + id + "'"};
      fs::remove(scenarios_dir / (id + ".json"));
      res.status = 204;
    }));

    s.Get(kApi + "/jobs", guarded([this](const auto&, auto& res) {
      Json list = Json::array();
      std::lock_guard lock(jobs_mutex);
      for (const auto& [id, j] : jobs) list.push_back(job_json(*j));
      reply(res, 200, list);
    }));

    s.Post(kApi + "/jobs", guarded([this](const auto& req, auto& res) {
      auto job = make_job(parse_body(req));
      std::lock_guard lock(jobs_mutex);
      if (stopping) throw HttpError{503, "service is shutting down"};
      if (queue.size() >= options.queue_cap)
        throw HttpError{503, "job queue is full (" + std::to_string(options.queue_cap) + " queued)"};
      char buf[24];
      do {
        std::snprintf(buf, sizeof buf, "job-%016llx", static_cast<unsigned long long>(ids()));
      } while (jobs.count(buf));
      job->id = buf;
      job->submitted_at = utc_now();
      jobs[job->id] = job;
      queue.push_back(job);
      jobs_cv.notify_one();
      reply(res, 202, {{"job_id", job->id}});
    }));

    s.Get(kApi + R"(/jobs/([^/]+))", guarded([this](const auto& req, auto& res) {
      std::string id = req.matches[1];
      std::lock_guard lock(jobs_mutex);
      auto it = jobs.find(id);
      if (it == jobs.end()) throw HttpError{404, "unknown job '" + id + "'"};
      reply(res, 200, job_json(*it->second));
    }));

    s.Get(kApi + R"(/jobs/([^/]+)/result)", guarded([this](const auto& req, auto& res) {
      std::string id = req.matches[1];
      std::shared_ptr<const std::string> body;
      {
        std::lock_guard lock(jobs_mutex);
        auto it = jobs.find(id);
        if (it == jobs.end()) throw HttpError{404, "unknown job '" + id + "'"};
        if (it->second->state != JobState::Done)
          throw HttpError{409, std::string("job is ") + to_string(it->second->state) + ", no result"};
        body = it->second->result;
      }
      res.status = 200;
      res.set_content(*body, kJsonType);
    }));

    s.Delete(kApi + R"(/jobs/([^/]+))", guarded([this](const auto& req, auto& res) {
      std::string id = req.matches[1];
      std::lock_guard lock(jobs_mutex);
      auto it = jobs.find(id);
      if (it == jobs.end()) throw HttpError{404, "unknown job '" + id + "'"};
      Job& j = *it->second;
      if (j.state == JobState::Queued) {
        std::erase(queue, it->second);
        j.state = JobState::Error;
        j.diagnostic = "canceled";
        reply(res, 200, job_json(j));
      } else if (j.state == JobState::Running) {
        // The solver has no interrupt; the result is discarded on completion.
        j.cancel_requested = true;
        reply(res, 202, job_json(j));
      } else {
        throw HttpError{409, std::string("job is already ") + to_string(j.state)};
      }
    }));
  }
};

Service::Service(ServiceOptions options, std::ostream* log) : impl_(std::make_unique<Impl>()) {
  if (options.workers < 1) throw DataError("--workers must be at least 1");
  if (options.queue_cap < 1) throw DataError("--queue-cap must be at least 1");
  impl_->options = std::move(options);
  impl_->log = log;
  impl_->models_dir = impl_->options.model_dir;
  if (!fs::is_directory(impl_->models_dir))
    throw DataError(impl_->options.model_dir + ": model directory does not exist");
  impl_->scenarios_dir = impl_->models_dir / "scenarios";
  impl_->results_dir = impl_->models_dir / "results";
  impl_->load_directory();
  for (int i = 0; i < impl_->options.workers; ++i) impl_->workers.emplace_back([this] { impl_->worker_loop(); });
}

Service::~Service() { shutdown(); }

void Service::shutdown() {
  {
    std::lock_guard lock(impl_->jobs_mutex);
    impl_->stopping = true;
  }
  impl_->jobs_cv.notify_all();
  for (auto& t : impl_->workers)
    if (t.joinable()) t.join();
  impl_->workers.clear();
}

void Service::mount(httplib::Server& server) { impl_->mount(server); }

int serve(const ServiceOptions& options, const std::string& host, int port, std::ostream& log) {
  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(options, &log);
  httplib::Server server;
  service.mount(server);
  if (!server.bind_to_port(host, port)) {
    log << "cannot listen on " << host << ":" << port << std::endl;
    return 2;
  }
  log << "listening on " << host << ":" << port << std::endl;
  std::thread listener([&] { server.listen_after_bind(); });
  int sig = 0;
  sigwait(&set, &sig);
  log << "stopping" << std::endl;
  server.stop();
  listener.join();
  service.shutdown();
  return 0;
}

}  // namespace scdr::service
