#pragma once

// End-to-end API scenario over a real socket. Every expectation is recorded
// so both the unit tests and the acceptance runner can report on it.

#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "curricula/esco/matcher.hpp"
#include "curricula/service/server.hpp"
#include "manual_clock.hpp"
#include "oracles.hpp"

namespace scenario {

using nlohmann::json;
namespace svc = curricula::service;

struct Expectation {
  std::string step;
  bool ok = false;
  std::string detail;
};

struct Result {
  std::vector<Expectation> expectations;
  std::size_t successful_mutations = 0;
  svc::State live;
  std::vector<svc::Event> events;
  bool replay_matches = false;
  bool reopen_matches = false;

  bool all_ok() const {
    for (const auto& e : expectations)
      if (!e.ok) return false;
    return replay_matches && reopen_matches && events.size() == successful_mutations;
  }
  std::string first_failure() const {
    for (const auto& e : expectations)
      if (!e.ok) return e.step + ": " + e.detail;
    if (!replay_matches) return "replayed state differs from live state";
    if (!reopen_matches) return "reopened workspace differs from live state";
    if (events.size() != successful_mutations)
      return "events " + std::to_string(events.size()) + " != mutations " + std::to_string(successful_mutations);
    return "";
  }
};

inline std::string fixtures() { return CURRICULA_FIXTURES; }

inline svc::AppConfig scenario_config(const std::filesystem::path& data_dir) {
  const std::string f = fixtures();
  const std::string text =
      "review.min_points = 10\n"
      "review.period_hours = 168\n"
      "review.accept_ratio = 0.75\n"
      "lda.iterations = 60\n"
      "lda.seed = 7\n"
      "topics.k_min = 2\n"
      "topics.k_max = 3\n"
      "provider.mode = fixture\n"
      "provider.fixture_dir = " + f + "/content/basic\n"
      "esco.occupations = " + f + "/esco/occupations.csv\n"
      "esco.skills = " + f + "/esco/skills.csv\n"
      "esco.relations = " + f + "/esco/relations.csv\n"
      "store.data_dir = " + data_dir.string() + "\n"
      "store.snapshot_every = 7\n"
      "server.workers = 2\n"
      "auth.tokens.alice = tok-alice\n"
      "auth.tokens.bob = tok-bob\n"
      "auth.tokens.carol = tok-carol\n"
      "auth.tokens.v1 = tok-v1\nauth.tokens.v2 = tok-v2\nauth.tokens.v3 = tok-v3\n"
      "auth.tokens.v4 = tok-v4\nauth.tokens.v5 = tok-v5\nauth.tokens.v6 = tok-v6\n"
      "auth.tokens.v7 = tok-v7\nauth.tokens.v8 = tok-v8\nauth.tokens.v9 = tok-v9\n";
  return svc::parse_config(text);
}

class Runner {
 public:
  Runner(httplib::Client& client, Result& result) : client_(client), result_(result) {}

  struct Reply {
    int status = 0;
    json body;
  };

  Reply call(const std::string& method, const std::string& path, const std::string& who, const json* body = nullptr,
             const std::string& raw = "") {
    httplib::Headers headers;
    if (!who.empty()) headers.emplace("Authorization", "Bearer tok-" + who);
    httplib::Result r{nullptr, httplib::Error::Unknown};
    const std::string payload = body ? body->dump() : raw;
    if (method == "GET")
      r = client_.Get(path, headers);
    else
      r = client_.Post(path, headers, payload, "application/json");
    Reply out;
    if (!r) return out;
    out.status = r->status;
    out.body = json::parse(r->body, nullptr, false);
    if (method == "POST" && out.status >= 200 && out.status < 300 && !path.ends_with("recommendations") &&
        path != "/resources/import")
      ++result_.successful_mutations;
    return out;
  }

  Reply get(const std::string& path, const std::string& who = "alice") { return call("GET", path, who); }
  Reply post(const std::string& path, const json& body, const std::string& who = "alice") {
    return call("POST", path, who, &body);
  }

  void expect(const std::string& step, bool ok, const std::string& detail = "") {
    result_.expectations.push_back({step, ok, ok ? "" : detail});
  }
  void expect_status(const std::string& step, const Reply& r, int status, const std::string& code = "") {
    bool ok = r.status == status;
    if (ok && !code.empty()) ok = r.body.is_object() && r.body.contains("error") && r.body["error"]["code"] == code;
    expect(step, ok, "got " + std::to_string(r.status) + " " + (r.body.is_discarded() ? "<non-json>" : r.body.dump()));
  }

 private:
  httplib::Client& client_;
  Result& result_;
};

/// Waits for a job to finish (bounded), returning its final JSON.
inline json await_job(Runner& run, const std::string& id) {
  for (int i = 0; i < 6000; ++i) {
    auto r = run.get("/jobs/" + id);
    if (r.body.is_object() && (r.body["status"] == "done" || r.body["status"] == "failed")) return r.body;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return json::object();
}

inline Result run(const std::filesystem::path& data_dir) {
  std::filesystem::remove_all(data_dir);
  Result result;
  testing_support::ManualClock clock;
  const auto config = scenario_config(data_dir);
  {
    svc::Workspace workspace(config.data_dir, config.review, config.snapshot_every, clock.fn());
    auto taxonomy = svc::load_configured_taxonomy(config);
    auto recs = std::make_shared<svc::Recommendations>(config, svc::make_provider(config, clock.fn()), taxonomy);
    svc::ApiServer server(config, workspace, recs);
    svc::Sweeper sweeper(workspace, std::chrono::hours(1));
    const int port = server.bind("127.0.0.1", 0);
    server.start();
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(std::chrono::seconds(60));
    Runner r(client, result);

    // Health and auth.
    r.expect_status("health needs no token", r.call("GET", "/health", ""), 200);
    r.expect_status("config without token", r.call("GET", "/config", ""), 401, "Unauthorized");
    r.expect_status("config with a wrong token", r.call("GET", "/config", "mallory"), 401, "Unauthorized");
    auto cfg = r.get("/config");
    r.expect("config is redacted", cfg.status == 200 && cfg.body["auth"]["tokens"]["alice"] == "***");

    // Creation.
    auto t1 = r.post("/topics", {{"title", "Machine learning"}});
    r.expect_status("create topic", t1, 201);
    r.expect("topic id", t1.body.value("id", "") == "topic-1", t1.body.dump());
    r.expect_status("create second topic", r.post("/topics", {{"title", "Python programming"}}), 201);
    r.expect_status("create third topic", r.post("/topics", {{"title", "Loops"}}, "bob"), 201);
    r.expect_status("duplicate topic title", r.post("/topics", {{"title", "  machine LEARNING "}}), 409,
                    "DuplicateTopicTitle");
    r.expect_status("empty topic title", r.post("/topics", {{"title", "   "}}), 400, "EmptyTitle");
    r.expect_status("body is not JSON", r.call("POST", "/topics", "alice", nullptr, "{nope"), 400, "BadRequest");
    r.expect_status("title of the wrong type", r.post("/topics", {{"title", 5}}), 400, "BadRequest");

    auto s1 = r.post("/skills", {{"title", "Python programming"}, {"topics", {"topic-1", "topic-2"}}});
    r.expect_status("create skill with topics", s1, 201);
    r.expect_status("create skill", r.post("/skills", {{"title", "Statistics"}}), 201);
    r.expect_status("create skill with taxonomy uri",
                    r.post("/skills", {{"title", "SQL"}, {"taxonomy_uri", "http://data.europa.eu/esco/skill/sql"}}),
                    201);
    r.expect_status("skill with unknown topic", r.post("/skills", {{"title", "Rust"}, {"topics", {"topic-99"}}}), 404,
                    "UnknownTopic");
    r.expect_status("skill with repeated topic",
                    r.post("/skills", {{"title", "Go"}, {"topics", {"topic-1", "topic-1"}}}), 400,
                    "DuplicateTopicInList");

    auto g1 = r.post("/goals", {{"title", "Data Scientist"},
                                {"context", {{"city", "Hannover"}}},
                                {"skills", {"skill-1", "skill-2", "skill-3"}}});
    r.expect_status("goal with three known skills", g1, 201);
    r.expect("goal id and skills",
             g1.body.value("id", "") == "goal-1" && g1.body["skills"].size() == 3 &&
                 g1.body["context"]["industry"] == "General" && g1.body["context"]["city"] == "Hannover",
             g1.body.dump());
    r.expect_status("goal with unknown skill", r.post("/goals", {{"title", "X"}, {"skills", {"skill-9"}}}), 404,
                    "UnknownSkill");

    auto pkg = r.post("/packages", {{"title", "Regression basics"},
                                    {"topics", {"topic-1"}},
                                    {"resources",
                                     {{{"origin", {{"kind", "url_import"}, {"url", "https://video.example.org/v001"}}},
                                       {"title", "Linear regression in ten minutes"},
                                       {"format_type", "video"},
                                       {"estimated_minutes", 11}}}}},
                       "carol");
    r.expect_status("create package", pkg, 201);
    r.expect_status("package without resources",
                    r.post("/packages", {{"title", "Empty"}, {"topics", {"topic-1"}}, {"resources", json::array()}}),
                    400, "EmptyResourceList");
    r.expect_status("package with bad url",
                    r.post("/packages", {{"title", "Bad"},
                                         {"topics", {"topic-1"}},
                                         {"resources", {{{"origin", {{"kind", "url_import"}, {"url", "ftp:x"}}},
                                                         {"title", "x"}}}}}),
                    400, "InvalidResource");

    // Reads.
    auto page = r.get("/skills/skill-1");
    r.expect("skill page lists its topics",
             page.status == 200 && page.body["children"].size() == 2 && page.body["parents"] == json::array({"goal-1"}),
             page.body.dump());
    r.expect_status("unknown skill page", r.get("/skills/skill-404"), 404, "UnknownSkill");
    r.expect_status("topic id on the skill route", r.get("/skills/topic-1"), 404, "UnknownSkill");
    auto topic_page = r.get("/topics/topic-1");
    r.expect("topic page lists its package", topic_page.status == 200 && topic_page.body["children"].size() == 1,
             topic_page.body.dump());
    r.expect_status("goal page", r.get("/goals/goal-1"), 200);
    r.expect_status("package page", r.get("/packages/package-1"), 200);

    auto rec = r.get("/goals/recommend-skills?title=Data%20Scientist");
    const auto direct = curricula::esco::recommend_skills("Data Scientist", *taxonomy);
    std::vector<std::string> direct_labels;
    for (const auto& s : direct.skills) direct_labels.push_back(s.label);
    std::vector<std::string> served_labels;
    if (rec.body.is_object() && rec.body["skills"].is_array())
      for (const auto& s : rec.body["skills"]) served_labels.push_back(s.value("label", ""));
    r.expect("recommend skills resolves the brute-force occupation",
             rec.status == 200 && rec.body["match"]["occupation_uri"] ==
                                      oracle::best_occupation("data scientist", *taxonomy),
             rec.body.dump());
    r.expect("recommend skills lists the linked skills", !served_labels.empty() && served_labels == direct_labels,
             rec.body.dump());
    r.expect_status("recommend skills needs a title", r.get("/goals/recommend-skills"), 400, "BadRequest");
    auto ac = r.get("/skills/autocomplete?prefix=pyth");
    r.expect("autocomplete puts local skills first",
             ac.status == 200 && !ac.body["suggestions"].empty() && ac.body["suggestions"][0] == "Python programming",
             ac.body.dump());

    auto imported = r.post("/resources/import", {{"url", "https://video.example.org/v002"}});
    r.expect("url import fills minutes",
             imported.status == 200 && imported.body["resource"]["estimated_minutes"] == 1 &&
                 imported.body["resource"]["title"] == "Python loops",
             imported.body.dump());
    r.expect_status("url import of an unknown url", r.post("/resources/import", {{"url", "https://nowhere.example"}}),
                    404, "UnknownResource");

    // Importance votes and points.
    auto v = r.post("/edges/skill-1/topic-1/vote", {{"direction", "up"}}, "bob");
    r.expect("edge vote tally", v.status == 200 && v.body["tally"]["ups"] == 1, v.body.dump());
    r.expect_status("edge vote bad direction", r.post("/edges/skill-1/topic-1/vote", {{"direction", "sideways"}}, "bob"),
                    400, "BadRequest");
    r.expect_status("vote on a missing edge", r.post("/edges/skill-1/topic-3/vote", {{"direction", "up"}}, "bob"), 404,
                    "UnknownEdge");
    r.expect_status("material vote", r.post("/edges/topic-1/package-1/vote", {{"direction", "up"}}, "bob"), 200);
    auto pts = r.get("/profiles/alice/points");
    r.expect("alice earned a point in topic-1",
             pts.status == 200 && pts.body["balances"] == json::array({json{{"context", "topic-1"}, {"balance", 1}}}),
             pts.body.dump());

    // Adoption.
    auto ad = r.post("/profiles/bob/adopt/skill-1", json::object(), "bob");
    r.expect("adoption credits the definer", ad.status == 200 && ad.body["changes"].size() == 1, ad.body.dump());
    auto ad2 = r.post("/profiles/bob/adopt/skill-1", json::object(), "bob");
    r.expect("adoption is idempotent", ad2.status == 200 && ad2.body["changes"].empty(), ad2.body.dump());
    r.expect_status("adopting for someone else", r.post("/profiles/bob/adopt/skill-1", json::object(), "carol"), 401,
                    "Unauthorized");
    r.expect_status("self adoption", r.post("/profiles/alice/adopt/skill-1", json::object(), "alice"), 400,
                    "SelfAdoption");

    // Suggestion accepted by ten unit votes at 80%.
    const json add_loops = {{"parent_id", "skill-1"}, {"edit", {{"kind", "add"}, {"child_id", "topic-3"}}}};
    auto sg = r.post("/suggestions", add_loops, "bob");
    r.expect("suggestion opens", sg.status == 201 && sg.body["status"] == "Open" && sg.body["id"] == "suggestion-1",
             sg.body.dump());
    r.expect_status("duplicate open suggestion", r.post("/suggestions", add_loops, "carol"), 409,
                    "DuplicateOpenSuggestion");
    r.expect_status("suggestion on a package", r.post("/suggestions", {{"parent_id", "package-1"},
                                                                        {"edit", {{"kind", "add"}, {"child_id", "x"}}}}),
                    404, "UnknownParent");
    r.expect_status("suggestion with a bad edit kind",
                    r.post("/suggestions", {{"parent_id", "skill-1"}, {"edit", {{"kind", "swap"}}}}), 400, "BadRequest");
    r.expect_status("self vote", r.post("/suggestions/suggestion-1/vote", {{"direction", "up"}}, "bob"), 400,
                    "SelfVote");
    json last;
    const std::vector<std::pair<std::string, std::string>> ballots = {
        {"v1", "up"}, {"v2", "up"}, {"v3", "up"}, {"v4", "up"}, {"v5", "up"},
        {"v6", "up"}, {"v7", "up"}, {"v8", "up"}, {"v9", "down"}, {"carol", "down"}};
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      auto reply = r.post("/suggestions/suggestion-1/vote", {{"direction", ballots[i].second}, {"spend_points", 0}},
                          ballots[i].first);
      r.expect("vote " + std::to_string(i + 1), reply.status == 200, reply.body.dump());
      if (i == 0) {
        auto again = r.post("/suggestions/suggestion-1/vote", {{"direction", "up"}}, "v1");
        r.expect_status("second vote by the same voter", again, 409, "AlreadyVoted");
      }
      if (i < 9) r.expect("still open after vote " + std::to_string(i + 1), reply.body["status"] == "Open");
      last = reply.body;
    }
    r.expect("tenth vote at 80% accepts", last["status"] == "Accepted" && last["total_weight"] == 10, last.dump());
    auto after = r.get("/skills/skill-1");
    r.expect("accepted edit applied",
             after.body["children"].size() == 3 && after.body["children"][2]["id"] == "topic-3", after.body.dump());
    r.expect_status("vote on a closed suggestion", r.post("/suggestions/suggestion-1/vote", {{"direction", "up"}}, "alice"),
                    409, "SuggestionClosed");

    // Suggestion rejected at 70%.
    auto sg2 = r.post("/suggestions", {{"parent_id", "skill-2"}, {"edit", {{"kind", "add"}, {"child_id", "topic-3"}}}},
                      "bob");
    r.expect_status("second suggestion", sg2, 201);
    for (int i = 1; i <= 9; ++i) {
      const std::string who = "v" + std::to_string(i);
      r.post("/suggestions/suggestion-2/vote", {{"direction", i <= 7 ? "up" : "down"}}, who);
    }
    auto rej = r.post("/suggestions/suggestion-2/vote", {{"direction", "down"}}, "carol");
    r.expect("tenth vote at 70% rejects", rej.body["status"] == "Rejected" && rej.body["reason"] == "ratio",
             rej.body.dump());

    // Points are spendable only up to the balance.
    auto sg3 = r.post("/suggestions", {{"parent_id", "skill-1"}, {"edit", {{"kind", "delete"}, {"child_id", "topic-2"}}}},
                      "carol");
    r.expect_status("third suggestion", sg3, 201);
    r.expect_status("overspend", r.post("/suggestions/suggestion-3/vote", {{"direction", "up"}, {"spend_points", 5}}, "bob"),
                    409, "InsufficientPoints");
    r.expect_status("negative spend", r.post("/suggestions/suggestion-3/vote", {{"direction", "up"}, {"spend_points", -1}}, "bob"),
                    400, "InvalidPayload");
    r.expect_status("vote for a missing suggestion", r.post("/suggestions/suggestion-77/vote", {{"direction", "up"}}, "bob"),
                    404, "UnknownSuggestion");
    r.expect_status("partial vote", r.post("/suggestions/suggestion-3/vote", {{"direction", "up"}}, "bob"), 200);
    auto list = r.get("/suggestions?parent=skill-1");
    r.expect("suggestions by parent", list.status == 200 && list.body["suggestions"].size() == 2, list.body.dump());
    auto open_page = r.get("/skills/skill-1");
    r.expect("page lists open suggestions", open_page.body["open_suggestions"] == json::array({"suggestion-3"}),
             open_page.body.dump());

    // Sweeper on the injected clock.
    clock.advance(std::chrono::hours(24 * 7));
    r.expect("nothing expires at the deadline", sweeper.tick().empty());
    clock.advance(std::chrono::seconds(1));
    const auto swept = sweeper.tick();
    r.expect("expired after the deadline", swept == std::vector<std::string>{"suggestion-3"});
    if (!swept.empty()) ++result.successful_mutations;
    auto expired = r.get("/suggestions/suggestion-3");
    r.expect("expired status", expired.body["status"] == "Rejected" && expired.body["reason"] == "expired",
             expired.body.dump());
    r.expect("second sweep is a no-op", sweeper.tick().empty());

    // Jobs.
    auto job = r.post("/topics/topic-1/resource-recommendations", json::object());
    r.expect("resource job accepted", job.status == 202, job.body.dump());
    auto finished = await_job(r, job.body.value("job_id", ""));
    r.expect("resource job completes",
             finished.value("status", "") == "done" && finished["result"]["resources"].is_array() &&
                 !finished["result"]["resources"].empty(),
             finished.dump());
    auto tjob = r.post("/skills/skill-1/topic-recommendations", json::object());
    r.expect("topic job accepted", tjob.status == 202, tjob.body.dump());
    auto tfinished = await_job(r, tjob.body.value("job_id", ""));
    r.expect("topic job finishes with a candidate list or a provider code",
             tfinished.value("status", "") == "done" ? tfinished["result"]["candidates"].is_array()
                                                     : tfinished["error"]["code"].is_string(),
             tfinished.dump());
    auto pjob = r.post("/packages/topic-recommendations", {{"texts", {"gradient descent on regression weights"}}});
    auto pfinished = await_job(r, pjob.body.value("job_id", ""));
    r.expect("package topic job ranks store topics",
             pfinished.value("status", "") == "done" && !pfinished["result"]["topics"].empty() &&
                 pfinished["result"]["topics"][0]["topic_id"].is_string(),
             pfinished.dump());
    r.expect_status("unknown job", r.get("/jobs/job-999"), 404, "UnknownJob");
    r.expect_status("job for an unknown skill", r.post("/skills/skill-9/topic-recommendations", json::object()), 404,
                    "UnknownSkill");

    server.stop();
    result.live = workspace.state();
    result.events = workspace.events();
  }

  const auto replayed = svc::replay(result.events, config.review);
  result.replay_matches = replayed == result.live;
  svc::Workspace reopened(config.data_dir, config.review, config.snapshot_every, clock.fn());
  result.reopen_matches = reopened.state() == result.live && reopened.events() == result.events;
  return result;
}

}  // namespace scenario
