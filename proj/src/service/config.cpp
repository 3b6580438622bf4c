#include "curricula/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "curricula/error.hpp"

namespace curricula::service {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(int line, const std::string& key, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line) + ": " + key + ": " + why);
}

double to_double(int line, const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(line, key, "expected a number, got '" + v + "'");
  return out;
}

long to_long(int line, const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(line, key, "expected an integer, got '" + v + "'");
  return out;
}

long positive(int line, const std::string& key, const std::string& v) {
  const long n = to_long(line, key, v);
  if (n <= 0) bad(line, key, "must be positive");
  return n;
}

bool is_feature(const std::string& name) {
  for (const char* f : recommender::kQualityFeatures)
    if (name == f) return true;
  return false;
}

}  // namespace

text::PreprocessConfig AppConfig::preprocess() const {
  auto p = text::PreprocessConfig::defaults();
  if (stopwords) p.stopwords = text::load_stopwords(*stopwords);
  return p;
}

recommender::TopicPipelineConfig AppConfig::pipeline() const {
  recommender::TopicPipelineConfig p;
  p.preprocess = preprocess();
  p.gibbs = lda;
  p.coherence = coherence;
  p.k_min = k_min;
  p.k_max = k_max;
  p.words_per_topic = words_per_topic;
  return p;
}

recommender::GateConfig AppConfig::gate() const {
  recommender::GateConfig g;
  g.relevance_threshold = relevance_threshold;
  g.preprocess = preprocess();
  return g;
}

void AppConfig::validate() const {
  review.validate();
  quality.validate();
  if (k_min < 1 || k_max < k_min)
    throw Error(ErrorCode::InvalidConfig, "topics.k_min/k_max must satisfy 1 <= k_min <= k_max");
  if (relevance_threshold < 0.0 || relevance_threshold > 1.0)
    throw Error(ErrorCode::InvalidConfig, "relevance.threshold must lie in [0, 1]");
  const int taxonomy_parts = (esco_occupations ? 1 : 0) + (esco_skills ? 1 : 0) + (esco_relations ? 1 : 0);
  if (taxonomy_parts != 0 && taxonomy_parts != 3)
    throw Error(ErrorCode::InvalidConfig, "esco.occupations, esco.skills and esco.relations go together");
  std::map<std::string, std::string> seen;
  for (const auto& [who, token] : tokens) {
    if (token.empty()) throw Error(ErrorCode::InvalidConfig, "empty token for " + who);
    if (!seen.emplace(token, who).second)
      throw Error(ErrorCode::InvalidConfig, "token shared by " + seen[token] + " and " + who);
  }
}

AppConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  AppConfig c;
  auto path_of = [&](const std::string& v) {
    const std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };

  using Setter = std::function<void(int, const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"review.min_points",
       [&](int l, auto& k, auto& v) { c.review.min_points = static_cast<int>(positive(l, k, v)); }},
      {"review.period_hours",
       [&](int l, auto& k, auto& v) { c.review.review_period = std::chrono::hours(positive(l, k, v)); }},
      {"review.accept_ratio", [&](int l, auto& k, auto& v) { c.review.accept_ratio = to_double(l, k, v); }},
      {"lda.alpha",
       [&](int l, auto& k, auto& v) {
         if (v == "auto") {
           c.lda.alpha.reset();
           return;
         }
         const double a = to_double(l, k, v);
         if (!(a > 0.0)) bad(l, k, "must be positive or 'auto'");
         c.lda.alpha = a;
       }},
      {"lda.beta",
       [&](int l, auto& k, auto& v) {
         c.lda.beta = to_double(l, k, v);
         if (!(c.lda.beta > 0.0)) bad(l, k, "must be positive");
       }},
      {"lda.iterations", [&](int l, auto& k, auto& v) { c.lda.iterations = static_cast<int>(positive(l, k, v)); }},
      {"lda.seed",
       [&](int l, auto& k, auto& v) {
         const long s = to_long(l, k, v);
         if (s < 0) bad(l, k, "must be non-negative");
         c.lda.seed = static_cast<std::uint64_t>(s);
       }},
      {"coherence.window",
       [&](int l, auto& k, auto& v) { c.coherence.window = static_cast<int>(positive(l, k, v)); }},
      {"topics.k_min", [&](int l, auto& k, auto& v) { c.k_min = static_cast<int>(positive(l, k, v)); }},
      {"topics.k_max", [&](int l, auto& k, auto& v) { c.k_max = static_cast<int>(positive(l, k, v)); }},
      {"topics.words_per_topic",
       [&](int l, auto& k, auto& v) { c.words_per_topic = static_cast<std::size_t>(positive(l, k, v)); }},
      {"quality.threshold", [&](int l, auto& k, auto& v) { c.quality.threshold = to_double(l, k, v); }},
      {"quality.bias", [&](int l, auto& k, auto& v) { c.quality.bias = to_double(l, k, v); }},
      {"relevance.threshold", [&](int l, auto& k, auto& v) { c.relevance_threshold = to_double(l, k, v); }},
      {"provider.mode",
       [&](int l, auto& k, auto& v) {
         if (v == "fixture")
           c.provider_mode = ProviderMode::fixture;
         else if (v == "live")
           c.provider_mode = ProviderMode::live;
         else
           bad(l, k, "must be fixture or live");
       }},
      {"provider.fixture_dir", [&](int, auto&, auto& v) { c.fixture_dir = path_of(v); }},
      {"preprocess.stopwords", [&](int, auto&, auto& v) { c.stopwords = path_of(v); }},
      {"esco.occupations", [&](int, auto&, auto& v) { c.esco_occupations = path_of(v); }},
      {"esco.skills", [&](int, auto&, auto& v) { c.esco_skills = path_of(v); }},
      {"esco.relations", [&](int, auto&, auto& v) { c.esco_relations = path_of(v); }},
      {"store.data_dir", [&](int, auto&, auto& v) { c.data_dir = path_of(v); }},
      {"store.snapshot_every",
       [&](int l, auto& k, auto& v) { c.snapshot_every = static_cast<std::size_t>(positive(l, k, v)); }},
      {"server.host", [&](int, auto&, auto& v) { c.host = v; }},
      {"server.port",
       [&](int l, auto& k, auto& v) {
         const long p = to_long(l, k, v);
         if (p < 0 || p > 65535) bad(l, k, "must lie in [0, 65535]");
         c.port = static_cast<int>(p);
       }},
      {"server.workers",
       [&](int l, auto& k, auto& v) { c.workers = static_cast<std::size_t>(positive(l, k, v)); }},
      {"sweeper.interval_seconds",
       [&](int l, auto& k, auto& v) { c.sweep_interval = std::chrono::seconds(positive(l, k, v)); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad(line, s, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) bad(line, key, "empty key");
    if (value.empty()) bad(line, key, "empty value");
    if (auto [it, fresh] = seen.emplace(key, line); !fresh)
      bad(line, key, "already set on line " + std::to_string(it->second));

    if (key.rfind("quality.weights.", 0) == 0) {
      const auto feature = key.substr(16);
      if (!is_feature(feature)) bad(line, key, "unknown quality feature");
      c.quality.weights[feature] = to_double(line, key, value);
    } else if (key.rfind("auth.tokens.", 0) == 0) {
      const auto who = key.substr(12);
      if (who.empty()) bad(line, key, "missing contributor name");
      c.tokens[who] = value;
    } else if (auto it = setters.find(key); it != setters.end()) {
      it->second(line, key, value);
    } else {
      bad(line, key, "unknown key");
    }
  }
  c.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

AppConfig config_from_environment() {
  const char* path = std::getenv("CURRICULA_CONFIG");
  if (path == nullptr || *path == '\0') return AppConfig{};
  return load_config(path);
}

nlohmann::json redacted(const AppConfig& c) {
  auto opt_path = [](const std::optional<std::filesystem::path>& p) {
    return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
  };
  nlohmann::json tokens = nlohmann::json::object();
  for (const auto& [who, _] : c.tokens) tokens[who] = "***";
  return {{"review",
           {{"min_points", c.review.min_points},
            {"period_hours", std::chrono::duration_cast<std::chrono::hours>(c.review.review_period).count()},
            {"accept_ratio", c.review.accept_ratio}}},
          {"lda",
           {{"alpha", c.lda.alpha ? nlohmann::json(*c.lda.alpha) : nlohmann::json("auto")},
            {"beta", c.lda.beta},
            {"iterations", c.lda.iterations},
            {"seed", c.lda.seed}}},
          {"coherence", {{"window", c.coherence.window}}},
          {"topics", {{"k_min", c.k_min}, {"k_max", c.k_max}, {"words_per_topic", c.words_per_topic}}},
          {"quality", {{"threshold", c.quality.threshold}, {"bias", c.quality.bias}, {"weights", c.quality.weights}}},
          {"relevance", {{"threshold", c.relevance_threshold}}},
          {"provider",
           {{"mode", c.provider_mode == ProviderMode::fixture ? "fixture" : "live"},
            {"fixture_dir", c.fixture_dir.string()}}},
          {"preprocess", {{"stopwords", opt_path(c.stopwords)}}},
          {"esco",
           {{"occupations", opt_path(c.esco_occupations)},
            {"skills", opt_path(c.esco_skills)},
            {"relations", opt_path(c.esco_relations)}}},
          {"store", {{"data_dir", c.data_dir.string()}, {"snapshot_every", c.snapshot_every}}},
          {"server", {{"host", c.host}, {"port", c.port}, {"workers", c.workers}}},
          {"sweeper", {{"interval_seconds", c.sweep_interval.count()}}},
          {"auth", {{"tokens", tokens}}}};
}

}  // namespace curricula::service
