#include "curricula/service/server.hpp"

#include "curricula/service/serialize.hpp"

namespace curricula::service {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::UnknownSkill:
    case ErrorCode::UnknownTopic:
    case ErrorCode::UnknownGoal:
    case ErrorCode::UnknownPackage:
    case ErrorCode::UnknownComponent:
    case ErrorCode::UnknownChild:
    case ErrorCode::UnknownEdge:
    case ErrorCode::UnknownParent:
    case ErrorCode::UnknownSuggestion:
    case ErrorCode::UnknownJob:
    case ErrorCode::UnknownResource:
    case ErrorCode::UnknownLabel:
      return 404;
    case ErrorCode::DuplicateSkillTitle:
    case ErrorCode::DuplicateTopicTitle:
    case ErrorCode::DuplicateOpenSuggestion:
    case ErrorCode::AlreadyVoted:
    case ErrorCode::SuggestionClosed:
    case ErrorCode::InsufficientPoints:
    case ErrorCode::StaleEdit:
      return 409;
    case ErrorCode::EmptyTaxonomy:
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::ProviderEmpty:
      return 503;
    case ErrorCode::CorruptLog:
      return 500;
    default:
      return 400;
  }
}

Sweeper::Sweeper(Workspace& workspace, std::chrono::milliseconds interval)
    : workspace_(workspace), interval_(interval) {}

Sweeper::~Sweeper() { stop(); }

std::vector<std::string> Sweeper::tick() {
  ++ticks_;
  return workspace_.sweep();
}

void Sweeper::start() {
  if (thread_.joinable()) return;
  {
    std::lock_guard lock(mutex_);
    stopping_ = false;
  }
  thread_ = std::thread([this] {
    std::unique_lock lock(mutex_);
    while (!wake_.wait_for(lock, interval_, [&] { return stopping_; })) {
      lock.unlock();
      try {
        tick();
      } catch (const std::exception&) {
        // A failed sweep is retried on the next tick.
      }
      lock.lock();
    }
  });
}

void Sweeper::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (thread_.joinable()) thread_.join();
}

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, const Error& e) {
  send(res, http_status(e.code()),
       {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.detail().empty() ? e.what() : e.detail()}}}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e);
  } catch (const json::exception& e) {
    send_error(res, Error(ErrorCode::BadRequest, e.what()));
  } catch (const std::exception& e) {
    send(res, 500, {{"error", {{"code", "Internal"}, {"message", e.what()}}}});
  }
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadRequest, std::string("body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "body must be a JSON object");
  return j;
}

ErrorCode unknown_code(core::ComponentKind kind) {
  switch (kind) {
    case core::ComponentKind::goal: return ErrorCode::UnknownGoal;
    case core::ComponentKind::skill: return ErrorCode::UnknownSkill;
    case core::ComponentKind::topic: return ErrorCode::UnknownTopic;
    case core::ComponentKind::package: return ErrorCode::UnknownPackage;
  }
  return ErrorCode::UnknownComponent;
}

}  // namespace

ApiServer::ApiServer(const AppConfig& config, Workspace& workspace, std::shared_ptr<Recommendations> recommendations)
    : config_(config), workspace_(workspace), recommendations_(std::move(recommendations)), jobs_(config.workers) {
  for (const auto& [who, token] : config_.tokens) contributor_by_token_[token] = who;
  routes();
}

ApiServer::~ApiServer() { stop(); }

std::string ApiServer::authenticate(const httplib::Request& req) const {
  const auto header = req.get_header_value("Authorization");
  const std::string prefix = "Bearer ";
  if (header.rfind(prefix, 0) != 0) throw Error(ErrorCode::Unauthorized, "missing bearer token");
  auto it = contributor_by_token_.find(header.substr(prefix.size()));
  if (it == contributor_by_token_.end()) throw Error(ErrorCode::Unauthorized, "unknown bearer token");
  return it->second;
}

void ApiServer::routes() {
  using httplib::Request;
  using httplib::Response;
  auto& s = server_;

  s.Get("/health", [this](const Request&, Response& res) {
    guarded(res, [&] { send(res, 200, {{"status", "ok"}, {"events", workspace_.events().size()}}); });
  });

  s.Get("/config", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      send(res, 200, redacted(config_));
    });
  });

  auto create = [this](const char* command) {
    return [this, command](const Request& req, Response& res) {
      guarded(res, [&] {
        const auto actor = authenticate(req);
        send(res, 201, workspace_.execute(actor, command, body_of(req)));
      });
    };
  };
  s.Post("/goals", create(commands::add_goal));
  s.Post("/skills", create(commands::add_skill));
  s.Post("/topics", create(commands::add_topic));
  s.Post("/packages", create(commands::add_package));

  s.Get("/goals/recommend-skills", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      if (!req.has_param("title")) throw Error(ErrorCode::BadRequest, "missing title parameter");
      send(res, 200, recommendations_->skills_for_goal(req.get_param_value("title")));
    });
  });

  s.Get("/skills/autocomplete", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const auto local = workspace_.read([](const State& st) {
        std::vector<std::string> titles;
        for (const auto& [_, skill] : st.store.skills()) titles.push_back(skill.title);
        return titles;
      });
      send(res, 200, {{"suggestions", recommendations_->autocomplete(req.get_param_value("prefix"), local)}});
    });
  });

  auto page = [this](core::ComponentKind kind) {
    return [this, kind](const Request& req, Response& res) {
      guarded(res, [&] {
        authenticate(req);
        const std::string id = req.matches[1];
        const auto view = workspace_.read([&](const State& st) {
          if (st.store.kind_of(id) != kind) throw Error(unknown_code(kind), id);
          return st.crowd.get_page(st.store, id);
        });
        send(res, 200, view);
      });
    };
  };
  s.Get(R"(/goals/([^/]+))", page(core::ComponentKind::goal));
  s.Get(R"(/skills/([^/]+))", page(core::ComponentKind::skill));
  s.Get(R"(/topics/([^/]+))", page(core::ComponentKind::topic));
  s.Get(R"(/packages/([^/]+))", page(core::ComponentKind::package));

  s.Post(R"(/skills/([^/]+)/topic-recommendations)", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const std::string id = req.matches[1];
      auto [title, existing] = workspace_.read([&](const State& st) {
        const auto* skill = st.store.skill(id);
        if (skill == nullptr) throw Error(ErrorCode::UnknownSkill, id);
        std::vector<std::string> topics;
        for (const auto& e : skill->topics) topics.push_back(st.store.title_of(e.child_id));
        return std::make_pair(skill->title, topics);
      });
      auto rec = recommendations_;
      const auto job = jobs_.submit("topic-recommendations", [rec, title = title, existing = existing] {
        return rec->topics_for_skill(title, existing);
      });
      send(res, 202, {{"job_id", job}, {"status", "queued"}});
    });
  });

  s.Post(R"(/topics/([^/]+)/resource-recommendations)", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const std::string id = req.matches[1];
      auto [title, all] = workspace_.read([&](const State& st) {
        const auto* topic = st.store.topic(id);
        if (topic == nullptr) throw Error(ErrorCode::UnknownTopic, id);
        std::vector<std::string> titles;
        for (const auto& [_, t] : st.store.topics()) titles.push_back(t.title);
        return std::make_pair(topic->title, titles);
      });
      auto rec = recommendations_;
      const auto job = jobs_.submit("resource-recommendations", [rec, title = title, all = all] {
        return rec->resources_for_topic(title, all);
      });
      send(res, 202, {{"job_id", job}, {"status", "queued"}});
    });
  });

  s.Post("/packages/topic-recommendations", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const json body = body_of(req);
      if (!body.contains("texts") || !body["texts"].is_array())
        throw Error(ErrorCode::BadRequest, "'texts' must be an array of strings");
      const auto texts = body["texts"].get<std::vector<std::string>>();
      const auto top_n = body.value("top_n", std::size_t{5});
      auto topics = workspace_.read([](const State& st) {
        std::map<std::string, std::string> out;
        for (const auto& [id, t] : st.store.topics()) out[id] = t.title;
        return out;
      });
      auto rec = recommendations_;
      const auto job = jobs_.submit("package-topics", [rec, texts, topics = std::move(topics), top_n] {
        return rec->topics_for_package(texts, topics, top_n);
      });
      send(res, 202, {{"job_id", job}, {"status", "queued"}});
    });
  });

  s.Post("/resources/import", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const json body = body_of(req);
      if (!body.contains("url") || !body["url"].is_string()) throw Error(ErrorCode::BadRequest, "missing 'url'");
      send(res, 200, recommendations_->import_url(body["url"].get<std::string>()));
    });
  });

  s.Get(R"(/jobs/([^/]+))", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      send(res, 200, job_to_json(jobs_.get(req.matches[1])));
    });
  });

  s.Post(R"(/edges/([^/]+)/([^/]+)/vote)", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      const auto actor = authenticate(req);
      json payload = body_of(req);
      payload["parent_id"] = std::string(req.matches[1]);
      payload["child_id"] = std::string(req.matches[2]);
      send(res, 200, workspace_.execute(actor, commands::vote_edge, payload));
    });
  });

  s.Post("/suggestions", create(commands::submit_suggestion));

  s.Get("/suggestions", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      if (!req.has_param("parent")) throw Error(ErrorCode::BadRequest, "missing parent parameter");
      const auto parent = req.get_param_value("parent");
      const auto list = workspace_.read([&](const State& st) {
        if (!st.store.kind_of(parent)) throw Error(ErrorCode::UnknownParent, parent);
        json out = json::array();
        for (const auto* sug : st.crowd.suggestions_for(parent)) out.push_back(*sug);
        return out;
      });
      send(res, 200, {{"parent_id", parent}, {"suggestions", list}});
    });
  });

  s.Get(R"(/suggestions/([^/]+))", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const std::string id = req.matches[1];
      send(res, 200, workspace_.read([&](const State& st) { return json(st.crowd.suggestion(id)); }));
    });
  });

  s.Post(R"(/suggestions/([^/]+)/vote)", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      const auto actor = authenticate(req);
      json payload = body_of(req);
      payload["suggestion_id"] = std::string(req.matches[1]);
      send(res, 200, workspace_.execute(actor, commands::vote_suggestion, payload));
    });
  });

  s.Post(R"(/profiles/([^/]+)/adopt/([^/]+))", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      const auto actor = authenticate(req);
      if (actor != req.matches[1].str()) throw Error(ErrorCode::Unauthorized, "token does not belong to " + req.matches[1].str());
      send(res, 200, workspace_.execute(actor, commands::adopt, {{"component_id", req.matches[2].str()}}));
    });
  });

  s.Get(R"(/profiles/([^/]+)/points)", [this](const Request& req, Response& res) {
    guarded(res, [&] {
      authenticate(req);
      const std::string user = req.matches[1];
      const auto balances = workspace_.read([&](const State& st) {
        json out = json::array();
        for (const auto& [key, value] : st.crowd.ledger().balances())
          if (key.first == user) out.push_back({{"context", key.second}, {"balance", value}});
        return out;
      });
      send(res, 200, {{"contributor", user}, {"balances", balances}});
    });
  });
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return server_.bind_to_any_port(host);
  if (!server_.bind_to_port(host, port)) throw Error(ErrorCode::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::start() {
  thread_ = std::thread([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
}

void ApiServer::listen() { server_.listen_after_bind(); }

void ApiServer::stop() {
  server_.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace curricula::service
