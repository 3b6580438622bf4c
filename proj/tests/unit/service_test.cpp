#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "api_scenario.hpp"
#include "curricula/error.hpp"
#include "curricula/service/config.hpp"
#include "curricula/service/event_log.hpp"
#include "curricula/service/serialize.hpp"
#include "curricula/service/workspace.hpp"
#include "manual_clock.hpp"

using namespace curricula;
using namespace curricula::service;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("curricula_service_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config defaults and typed values") {
  const AppConfig d = parse_config("");
  CHECK(d.review.min_points == 10);
  CHECK(d.review.review_period == std::chrono::hours(168));
  CHECK(d.review.accept_ratio == 0.75);
  CHECK_FALSE(d.lda.alpha.has_value());
  CHECK(d.lda.beta == 0.01);
  CHECK(d.lda.iterations == 1000);
  CHECK(d.coherence.window == 110);
  CHECK(d.quality == recommender::QualityModel::defaults());
  CHECK(d.relevance_threshold == 0.3);
  CHECK(d.sweep_interval == std::chrono::seconds(60));

  const AppConfig c = parse_config(
      "# comment\n\n"
      "review.min_points = 12\n"
      "review.period_hours = 24\n"
      "review.accept_ratio = 0.6\n"
      "lda.alpha = 0.5\n"
      "lda.beta = 0.1\n"
      "lda.iterations = 20\n"
      "lda.seed = 99\n"
      "coherence.window = 50\n"
      "quality.threshold = 0.4\n"
      "quality.weights.like_ratio = 3.5\n"
      "relevance.threshold = 0.2\n"
      "provider.mode = live\n"
      "provider.fixture_dir = content\n"
      "auth.tokens.alice = secret\n",
      "/base");
  CHECK(c.review.min_points == 12);
  CHECK(c.review.review_period == std::chrono::hours(24));
  CHECK(c.review.accept_ratio == 0.6);
  CHECK(c.lda.alpha == 0.5);
  CHECK(c.lda.beta == 0.1);
  CHECK(c.lda.iterations == 20);
  CHECK(c.lda.seed == 99);
  CHECK(c.coherence.window == 50);
  CHECK(c.quality.threshold == 0.4);
  CHECK(c.quality.weights.at("like_ratio") == 3.5);
  CHECK(c.quality.weights.at("log_views") == recommender::QualityModel::defaults().weights.at("log_views"));
  CHECK(c.relevance_threshold == 0.2);
  CHECK(c.provider_mode == ProviderMode::live);
  CHECK(c.fixture_dir == std::filesystem::path("/base/content"));
  CHECK(c.tokens.at("alice") == "secret");
  CHECK(parse_config("lda.alpha = auto\n").lda.alpha == std::nullopt);
}

TEST_CASE("config rejects unknown keys and bad values") {
  const std::vector<std::string> bad = {
      "review.min_point = 10\n",         // unknown key
      "quality.weights.colour = 1\n",    // unknown feature
      "review.min_points = ten\n",       // not a number
      "review.min_points = 0\n",         // not positive
      "review.accept_ratio = 1.5\n",     // outside (0, 1)
      "lda.beta = -1\n",                 // not positive
      "provider.mode = cloud\n",         // bad enum
      "quality.threshold = 1\n",         // outside (0, 1)
      "relevance.threshold = 2\n",       // outside [0, 1]
      "topics.k_min = 5\ntopics.k_max = 3\n",
      "esco.skills = s.csv\n",           // partial taxonomy
      "review.min_points = 10\nreview.min_points = 11\n",
      "just a line\n",
      "lda.seed =\n",
      "auth.tokens.a = same\nauth.tokens.b = same\n",
  };
  for (const auto& text : bad) {
    CAPTURE(text);
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("InvalidConfig"), Error);
  }
  CHECK_THROWS_WITH_AS(parse_config("ok.key = 1\n"), doctest::Contains("line 1"), Error);
}

TEST_CASE("config file from the environment, redacted view") {
  const auto dir = scratch("env");
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "app.conf");
    out << "review.min_points = 7\nauth.tokens.alice = s3cret\nstore.data_dir = state\n";
  }
  ::setenv("CURRICULA_CONFIG", (dir / "app.conf").c_str(), 1);
  const AppConfig c = config_from_environment();
  ::unsetenv("CURRICULA_CONFIG");
  CHECK(c.review.min_points == 7);
  CHECK(c.data_dir == dir / "state");
  CHECK(config_from_environment().review.min_points == 10);

  const json r = redacted(c);
  CHECK(r["auth"]["tokens"]["alice"] == "***");
  CHECK(r.dump().find("s3cret") == std::string::npos);
  CHECK(r["review"]["min_points"] == 7);

  CHECK_THROWS_WITH_AS(load_config(dir / "missing.conf"), doctest::Contains("InvalidConfig"), Error);
}

TEST_CASE("timestamps round trip") {
  using namespace std::chrono;
  CHECK(format_time(sys_seconds{seconds{0}}) == "1970-01-01T00:00:00Z");
  CHECK(format_time(sys_seconds{seconds{1700000000}}) == "2023-11-14T22:13:20Z");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const sys_seconds t{seconds{static_cast<long long>(rng() % 4102444800ULL)}};
    CHECK(parse_time(format_time(t)) == t);
  }
  for (const char* bad : {"2023-02-30T00:00:00Z", "2023-11-14 22:13:20", "2023-11-14T22:13:20", "x"})
    CHECK_THROWS_AS(parse_time(bad), Error);
}

TEST_CASE("event log records round trip and detect corruption") {
  using namespace std::chrono;
  std::vector<Event> events;
  for (long i = 1; i <= 4; ++i)
    events.push_back({i, sys_seconds{seconds{1000 * i}}, "alice", "add_topic", {{"title", "T" + std::to_string(i)}}});
  std::ostringstream out;
  for (const auto& e : events) write_record(out, e);
  const std::string bytes = out.str();

  std::istringstream in(bytes);
  CHECK(read_records(in) == events);

  std::istringstream empty("");
  CHECK(read_records(empty).empty());

  // Cutting the stream anywhere inside the last record is detected and names its seq.
  const auto last_start = bytes.rfind('\n', bytes.size() - 2);
  const auto record_start = bytes.rfind('\n', last_start - 1) + 1;
  for (std::size_t cut = record_start + 1; cut < bytes.size(); ++cut) {
    std::istringstream truncated(bytes.substr(0, cut));
    CAPTURE(cut);
    CHECK_THROWS_WITH_AS(read_records(truncated), doctest::Contains("CorruptLog: seq 4"), Error);
  }

  std::ostringstream gap;
  write_record(gap, events[0]);
  write_record(gap, events[2]);
  std::istringstream gapped(gap.str());
  CHECK_THROWS_WITH_AS(read_records(gapped), doctest::Contains("seq 2"), Error);

  std::istringstream garbage("12\nnot json at\n");
  CHECK_THROWS_WITH_AS(read_records(garbage), doctest::Contains("CorruptLog"), Error);
}

TEST_CASE("workspace appends one event per successful mutation") {
  testing_support::ManualClock clock;
  Workspace ws(crowd::ReviewConfig{}, clock.fn());
  CHECK(ws.state() == replay({}, crowd::ReviewConfig{}));

  ws.execute("alice", commands::add_topic, {{"title", "Variables"}});
  clock.advance(std::chrono::seconds(5));
  CHECK_THROWS_WITH_AS(ws.execute("alice", commands::add_topic, {{"title", "variables"}}),
                       doctest::Contains("DuplicateTopicTitle"), Error);
  CHECK_THROWS_WITH_AS(ws.execute("alice", "drop_table", json::object()), doctest::Contains("BadRequest"), Error);
  CHECK_THROWS_AS(ws.execute("alice", commands::add_skill, {{"title", 3}}), Error);
  ws.execute("alice", commands::add_skill, {{"title", "Python"}, {"topics", {"topic-1"}}});
  CHECK(ws.sweep().empty());

  const auto events = ws.events();
  REQUIRE(events.size() == 2);
  CHECK(events[0].seq == 1);
  CHECK(events[1].seq == 2);
  CHECK(events[1].timestamp - events[0].timestamp == std::chrono::seconds(5));
  CHECK(events[1].actor == "alice");
  CHECK(events[1].type == "add_skill");
  CHECK(replay(events, crowd::ReviewConfig{}) == ws.state());
}

TEST_CASE("state JSON round trip") {
  testing_support::ManualClock clock;
  Workspace ws(crowd::ReviewConfig{}, clock.fn());
  ws.execute("alice", commands::add_topic, {{"title", "Variables"}, {"description", "names for values"}});
  ws.execute("alice", commands::add_topic, {{"title", "Functions"}});
  ws.execute("carol", commands::add_topic, {{"title", "Loops"}});
  ws.execute("alice", commands::add_skill, {{"title", "Python"}, {"topics", {"topic-1", "topic-2"}}});
  ws.execute("alice", commands::add_goal, {{"title", "Developer"}, {"skills", {"skill-1"}}});
  ws.execute("bob", commands::add_package,
             {{"title", "Intro"},
              {"topics", {"topic-1"}},
              {"resources", {{{"origin", {{"kind", "upload"}, {"digest", "sha256:abc"}}},
                              {"title", "Slides"},
                              {"format_type", "text"},
                              {"detail_level", "deep"},
                              {"has_theory", true}}}}});
  ws.execute("bob", commands::vote_edge, {{"parent_id", "skill-1"}, {"child_id", "topic-1"}, {"direction", "up"}});
  ws.execute("carol", commands::vote_edge, {{"parent_id", "topic-1"}, {"child_id", "package-1"}, {"direction", "up"}});
  ws.execute("bob", commands::adopt, {{"component_id", "topic-2"}});
  ws.execute("bob", commands::submit_suggestion,
             {{"parent_id", "skill-1"}, {"edit", {{"kind", "reorder"}, {"order", {"topic-2", "topic-1"}}}}});
  ws.execute("carol", commands::vote_suggestion, {{"suggestion_id", "suggestion-1"}, {"direction", "down"}});
  clock.advance(std::chrono::hours(24 * 8));
  CHECK(ws.sweep() == std::vector<std::string>{"suggestion-1"});

  const State live = ws.state();
  const json doc = state_to_json(live);
  CHECK(state_from_json(json::parse(doc.dump()), crowd::ReviewConfig{}) == live);
  CHECK(replay(ws.events(), crowd::ReviewConfig{}) == live);
}

TEST_CASE("persistent workspace snapshots and reopens") {
  const auto dir = scratch("persist");
  testing_support::ManualClock clock;
  State live{core::CurriculumStore{}, crowd::CrowdEngine{}};
  {
    Workspace ws(dir, crowd::ReviewConfig{}, 3, clock.fn());
    for (int i = 0; i < 8; ++i) {
      ws.execute("alice", commands::add_topic, {{"title", "Topic " + std::to_string(i)}});
      clock.advance(std::chrono::seconds(1));
    }
    live = ws.state();
  }
  CHECK(std::filesystem::exists(dir / "snapshot.json"));
  CHECK(json::parse(read_file(dir / "snapshot.json"))["seq"] == 6);
  {
    Workspace reopened(dir, crowd::ReviewConfig{}, 3, clock.fn());
    CHECK(reopened.state() == live);
    CHECK(reopened.events().size() == 8);
    reopened.execute("bob", commands::add_topic, {{"title", "Topic 9"}});
    CHECK(reopened.events().back().seq == 9);
  }

  // Replaying from the log alone agrees with snapshot + tail.
  std::filesystem::remove(dir / "snapshot.json");
  Workspace from_log(dir, crowd::ReviewConfig{}, 3, clock.fn());
  CHECK(from_log.events().size() == 9);
  CHECK(from_log.state().store.topics().size() == 9);

  // A log cut mid-record refuses to open.
  const std::string bytes = read_file(dir / "events.log");
  {
    std::ofstream out(dir / "events.log", std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, bytes.size() - 5);
  }
  CHECK_THROWS_WITH_AS(Workspace(dir, crowd::ReviewConfig{}, 3, clock.fn()), doctest::Contains("CorruptLog: seq 9"),
                       Error);
}

TEST_CASE("a snapshot ahead of its log is corrupt") {
  const auto dir = scratch("ahead");
  testing_support::ManualClock clock;
  {
    Workspace ws(dir, crowd::ReviewConfig{}, 2, clock.fn());
    ws.execute("alice", commands::add_topic, {{"title", "A"}});
    ws.execute("alice", commands::add_topic, {{"title", "B"}});
  }
  std::filesystem::remove(dir / "events.log");
  CHECK_THROWS_WITH_AS(Workspace(dir, crowd::ReviewConfig{}, 2, clock.fn()), doctest::Contains("CorruptLog"), Error);
}

TEST_CASE("sweeper decides nothing before the deadline") {
  testing_support::ManualClock clock;
  Workspace ws(crowd::ReviewConfig{}, clock.fn());
  Sweeper sweeper(ws, std::chrono::hours(1));
  ws.execute("alice", commands::add_topic, {{"title", "A"}});
  ws.execute("alice", commands::add_topic, {{"title", "B"}});
  ws.execute("alice", commands::add_skill, {{"title", "S"}, {"topics", {"topic-1"}}});
  ws.execute("bob", commands::submit_suggestion,
             {{"parent_id", "skill-1"}, {"edit", {{"kind", "add"}, {"child_id", "topic-2"}}}});
  for (int h = 0; h <= 168; h += 12) {
    clock.set(std::chrono::sys_seconds{std::chrono::seconds{1700000000}} + std::chrono::hours(h));
    CHECK(sweeper.tick().empty());
  }
  const auto events_before = ws.events().size();
  clock.advance(std::chrono::seconds(1));
  CHECK(sweeper.tick() == std::vector<std::string>{"suggestion-1"});
  CHECK(ws.events().size() == events_before + 1);
  CHECK(ws.events().back().type == "sweep");
  CHECK(ws.state().crowd.suggestion("suggestion-1").reason == crowd::RejectReason::expired);
}

TEST_CASE("sweeper thread ticks on its cadence") {
  testing_support::ManualClock clock;
  Workspace ws(crowd::ReviewConfig{}, clock.fn());
  Sweeper sweeper(ws, std::chrono::milliseconds(5));
  sweeper.start();
  for (int i = 0; i < 400 && sweeper.ticks() < 3; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  sweeper.stop();
  CHECK(sweeper.ticks() >= 3);
  CHECK(ws.events().empty());
}

TEST_CASE("error codes map onto HTTP statuses") {
  CHECK(http_status(ErrorCode::EmptyTitle) == 400);
  CHECK(http_status(ErrorCode::InvalidPayload) == 400);
  CHECK(http_status(ErrorCode::Unauthorized) == 401);
  CHECK(http_status(ErrorCode::UnknownSkill) == 404);
  CHECK(http_status(ErrorCode::UnknownSuggestion) == 404);
  CHECK(http_status(ErrorCode::DuplicateSkillTitle) == 409);
  CHECK(http_status(ErrorCode::DuplicateOpenSuggestion) == 409);
  CHECK(http_status(ErrorCode::AlreadyVoted) == 409);
}

TEST_CASE("API scenario over HTTP; replay equals live state") {
  const auto result = scenario::run(scratch("api"));
  for (const auto& e : result.expectations) {
    CAPTURE(e.detail);
    CHECK_MESSAGE(e.ok, e.step);
  }
  CHECK(result.expectations.size() > 60);
  CHECK(result.events.size() == result.successful_mutations);
  CHECK(result.replay_matches);
  CHECK(result.reopen_matches);
  CHECK(result.all_ok());
}
