#include <csignal>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "curricula/error.hpp"
#include "curricula/esco/taxonomy.hpp"
#include "curricula/service/config.hpp"
#include "curricula/service/recommendations.hpp"
#include "curricula/service/serialize.hpp"
#include "curricula/service/server.hpp"
#include "curricula/service/workspace.hpp"
#include "curricula/text/coherence.hpp"
#include "curricula/text/preprocess.hpp"
#include "curricula/text/topic_model.hpp"

using namespace curricula;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  bool json_output = false;
};

service::AppConfig load(const Options& o) {
  return o.config_path.empty() ? service::config_from_environment() : service::load_config(o.config_path);
}

ingest::Clock wall_clock() {
  return [] { return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()); };
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadRequest, "cannot read " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<text::TokenList> read_documents(const std::string& path, bool pretokenized,
                                            const text::PreprocessConfig& config) {
  std::vector<text::TokenList> docs;
  for (const auto& line : read_lines(path)) {
    auto tokens = pretokenized ? text::split_whitespace(line) : text::preprocess(line, config);
    if (!tokens.empty()) docs.push_back(std::move(tokens));
  }
  return docs;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::BadRequest, "cannot write " + path.string());
}

json keywords_json(const text::KeywordList& list) {
  json out = json::array();
  for (const auto& k : list) out.push_back({{"term", k.term}, {"weight", k.weight}});
  return out;
}

std::string joined_terms(const text::KeywordList& list) {
  std::string out;
  for (const auto& k : list) out += (out.empty() ? "" : " ") + k.term;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum authoring service and tools"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "Config file (default: $CURRICULA_CONFIG)");
  app.add_flag("--json", opt.json_output, "Machine-readable output");

  std::function<void()> action;

  // serve
  auto* serve = app.add_subcommand("serve", "Start the HTTP API and the review sweeper");
  std::string host;
  int port = -1;
  serve->add_option("--host", host, "Bind address (default: server.host)");
  serve->add_option("--port", port, "Port, 0 for any free port (default: server.port)");
  serve->callback([&] {
    action = [&] {
      auto config = load(opt);
      if (!host.empty()) config.host = host;
      if (port >= 0) config.port = port;
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      service::Workspace workspace(config.data_dir, config.review, config.snapshot_every, wall_clock());
      auto recs = std::make_shared<service::Recommendations>(config, service::make_provider(config, wall_clock()),
                                                             service::load_configured_taxonomy(config));
      service::ApiServer server(config, workspace, recs);
      service::Sweeper sweeper(workspace, config.sweep_interval);
      const int bound = server.bind(config.host, config.port);
      if (opt.json_output)
        std::cout << json{{"host", config.host}, {"port", bound}}.dump() << std::endl;
      else
        std::cout << "listening on " << config.host << ":" << bound << std::endl;
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
      });
      sweeper.start();
      server.listen();
      sweeper.stop();
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      workspace.write_snapshot();
    };
  });

  // load-esco
  auto* load_esco = app.add_subcommand("load-esco", "Load and validate taxonomy CSV files");
  std::vector<std::string> esco_files;
  load_esco->add_option("files", esco_files, "occupations.csv skills.csv relations.csv (default: esco.* keys)")
      ->expected(0, 3);
  load_esco->callback([&] {
    action = [&] {
      esco::Taxonomy t;
      if (esco_files.size() == 3) {
        t = esco::load_taxonomy(esco_files[0], esco_files[1], esco_files[2]);
      } else if (esco_files.empty()) {
        const auto config = load(opt);
        if (!config.has_taxonomy()) throw Error(ErrorCode::EmptyTaxonomy, "no esco.* files configured");
        t = esco::load_taxonomy(*config.esco_occupations, *config.esco_skills, *config.esco_relations);
      } else {
        throw Error(ErrorCode::BadRequest, "load-esco takes occupations, skills and relations files");
      }
      if (opt.json_output)
        std::cout << json{{"occupations", t.occupations().size()},
                          {"skills", t.skills().size()},
                          {"relations", t.links().size()}}
                         .dump()
                  << "\n";
      else
        std::cout << t.occupations().size() << " occupations, " << t.skills().size() << " skills, "
                  << t.links().size() << " relations\n";
    };
  });

  // recommend-topics
  auto* rec_topics = app.add_subcommand("recommend-topics", "Topic recommendations for a skill");
  std::string skill_id;
  rec_topics->add_option("--skill", skill_id, "Skill id")->required();
  rec_topics->callback([&] {
    action = [&] {
      const auto config = load(opt);
      service::Workspace workspace(config.data_dir, config.review, config.snapshot_every, wall_clock());
      auto [title, existing] = workspace.read([&](const service::State& st) {
        const auto* skill = st.store.skill(skill_id);
        if (skill == nullptr) throw Error(ErrorCode::UnknownSkill, skill_id);
        std::vector<std::string> topics;
        for (const auto& e : skill->topics) topics.push_back(st.store.title_of(e.child_id));
        return std::make_pair(skill->title, topics);
      });
      service::Recommendations recs(config, service::make_provider(config, wall_clock()), nullptr);
      const json result = recs.topics_for_skill(title, existing);
      if (opt.json_output) {
        std::cout << result.dump() << "\n";
        return;
      }
      for (const auto& c : result["candidates"])
        std::cout << c["term"].get<std::string>() << "\t" << c["probability"].get<double>() << "\t"
                  << c["source"].get<std::string>() << "\n";
      for (const auto& s : result["shortfalls"])
        std::cerr << "shortfall: " << s["topic"].get<std::string>() << " " << s["found"] << "/" << s["wanted"] << "\n";
    };
  });

  // recommend-resources
  auto* rec_resources = app.add_subcommand("recommend-resources", "Scored resources for a topic");
  std::string topic_id;
  rec_resources->add_option("--topic", topic_id, "Topic id")->required();
  rec_resources->callback([&] {
    action = [&] {
      const auto config = load(opt);
      service::Workspace workspace(config.data_dir, config.review, config.snapshot_every, wall_clock());
      auto [title, all] = workspace.read([&](const service::State& st) {
        const auto* topic = st.store.topic(topic_id);
        if (topic == nullptr) throw Error(ErrorCode::UnknownTopic, topic_id);
        std::vector<std::string> titles;
        for (const auto& [_, t] : st.store.topics()) titles.push_back(t.title);
        return std::make_pair(topic->title, titles);
      });
      service::Recommendations recs(config, service::make_provider(config, wall_clock()), nullptr);
      const json result = recs.resources_for_topic(title, all);
      if (opt.json_output) {
        std::cout << result.dump() << "\n";
        return;
      }
      for (const auto& r : result["resources"])
        std::cout << (r["passed"].get<bool>() ? "pass" : "fail") << "\t" << r["quality_score"].get<double>() << "\t"
                  << r["relevance_score"].get<double>() << "\t" << r["record"]["id"].get<std::string>() << "\t"
                  << r["record"]["title"].get<std::string>() << "\n";
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Reject expired suggestions");
  std::string sweep_now;
  sweep->add_option("--now", sweep_now, "Evaluate at this UTC time (YYYY-MM-DDTHH:MM:SSZ) instead of the clock");
  sweep->callback([&] {
    action = [&] {
      const auto config = load(opt);
      ingest::Clock clock = wall_clock();
      if (!sweep_now.empty()) {
        const auto at = service::parse_time(sweep_now);
        clock = [at] { return at; };
      }
      service::Workspace workspace(config.data_dir, config.review, config.snapshot_every, clock);
      const auto rejected = workspace.sweep();
      if (opt.json_output) {
        std::cout << json{{"rejected", rejected}}.dump() << "\n";
        return;
      }
      for (const auto& id : rejected) std::cout << "rejected " << id << " (expired)\n";
      std::cout << rejected.size() << (rejected.size() == 1 ? " rejection\n" : " rejections\n");
    };
  });

  // fit-lda
  auto* fit_lda = app.add_subcommand("fit-lda", "Fit LDA on a corpus file (one document per line)");
  std::string corpus_path, dump_path;
  int k = 0, k_min = 0, k_max = 0, iterations = 0, top = 10;
  long long seed = -1;
  bool select = false, pretokenized = false;
  fit_lda->add_option("--corpus", corpus_path, "Corpus file")->required()->check(CLI::ExistingFile);
  auto* k_opt = fit_lda->add_option("--k", k, "Topic count")->check(CLI::PositiveNumber);
  auto* sel_opt = fit_lda->add_flag("--select-k", select, "Choose k by C_V coherence");
  k_opt->excludes(sel_opt);
  fit_lda->add_option("--k-min", k_min, "Smallest k for --select-k (default: topics.k_min)");
  fit_lda->add_option("--k-max", k_max, "Largest k for --select-k (default: topics.k_max)");
  fit_lda->add_option("--iterations", iterations, "Gibbs sweeps (default: lda.iterations)");
  fit_lda->add_option("--seed", seed, "RNG seed (default: lda.seed)");
  fit_lda->add_option("--top", top, "Words shown per topic");
  fit_lda->add_option("--dump", dump_path, "Write the model JSON here");
  fit_lda->add_flag("--tokens", pretokenized, "Lines are already tokens; skip preprocessing");
  fit_lda->callback([&] {
    action = [&] {
      const auto config = load(opt);
      auto gibbs = config.lda;
      if (iterations > 0) gibbs.iterations = iterations;
      if (seed >= 0) gibbs.seed = static_cast<std::uint64_t>(seed);
      const auto docs = read_documents(corpus_path, pretokenized, config.preprocess());
      const auto corpus = text::Corpus::from_tokens(docs);
      text::LdaModel model;
      json out;
      if (select) {
        const auto result = text::select_k(corpus, k_min > 0 ? k_min : config.k_min, k_max > 0 ? k_max : config.k_max,
                                           gibbs, config.coherence);
        model = result.model;
        json scores = json::object();
        for (const auto& [kk, v] : result.report.scores) scores[std::to_string(kk)] = v;
        out["best_k"] = result.report.best_k;
        out["coherence"] = scores;
        if (!opt.json_output) {
          for (const auto& [kk, v] : result.report.scores) std::cout << "k=" << kk << "\tcv=" << v << "\n";
          std::cout << "best_k " << result.report.best_k << "\n";
        }
      } else {
        if (k <= 0) throw Error(ErrorCode::InvalidK, "give --k or --select-k");
        model = text::fit_lda(corpus, k, gibbs);
      }
      out["k"] = model.k;
      json topics = json::array();
      for (int t = 0; t < model.k; ++t) {
        const auto words = text::top_words(model, t, static_cast<std::size_t>(top));
        topics.push_back(keywords_json(words));
        if (!opt.json_output) std::cout << "topic " << t << ": " << joined_terms(words) << "\n";
      }
      out["topics"] = topics;
      if (!dump_path.empty()) write_text(dump_path, text::dump_model(model));
      if (opt.json_output) std::cout << out.dump() << "\n";
    };
  });

  // fit-llda
  auto* fit_llda = app.add_subcommand("fit-llda", "Fit labeled LDA on a TSV file: text<TAB>label[|label...]");
  std::string llda_path, llda_dump;
  int llda_top = 10, llda_iterations = 0;
  fit_llda->add_option("--corpus", llda_path, "TSV file")->required()->check(CLI::ExistingFile);
  fit_llda->add_option("--top", llda_top, "Words shown per label");
  fit_llda->add_option("--iterations", llda_iterations, "Gibbs sweeps (default: lda.iterations)");
  fit_llda->add_option("--dump", llda_dump, "Write the model JSON here");
  fit_llda->callback([&] {
    action = [&] {
      const auto config = load(opt);
      auto gibbs = config.lda;
      if (llda_iterations > 0) gibbs.iterations = llda_iterations;
      const auto pre = config.preprocess();
      std::vector<text::TokenList> docs;
      std::vector<std::vector<std::string>> labels;
      int line_no = 0;
      for (const auto& line : read_lines(llda_path)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos)
          throw Error(ErrorCode::MalformedRow, llda_path + ":" + std::to_string(line_no) + ": expected text<TAB>labels");
        std::vector<std::string> ls;
        std::stringstream split(line.substr(tab + 1));
        for (std::string l; std::getline(split, l, '|');)
          if (!l.empty()) ls.push_back(l);
        docs.push_back(text::preprocess(line.substr(0, tab), pre));
        labels.push_back(ls);
      }
      const auto model = text::fit_llda(text::Corpus::from_labeled(docs, labels), gibbs);
      json out = json::object();
      for (std::size_t l = 0; l < model.labels.size(); ++l) {
        const auto words = text::top_words(model, static_cast<int>(l), static_cast<std::size_t>(llda_top));
        out[model.labels[l]] = keywords_json(words);
        if (!opt.json_output) std::cout << model.labels[l] << ": " << joined_terms(words) << "\n";
      }
      if (!llda_dump.empty()) write_text(llda_dump, text::dump_model(model));
      if (opt.json_output) std::cout << json{{"labels", out}}.dump() << "\n";
    };
  });

  // coherence
  auto* coherence = app.add_subcommand("coherence", "C_V coherence of word sets against a reference corpus");
  std::string coh_corpus, coh_top;
  int window = 0;
  bool coh_tokens = false;
  coherence->add_option("--corpus", coh_corpus, "Reference corpus, one document per line")
      ->required()
      ->check(CLI::ExistingFile);
  coherence->add_option("--topwords", coh_top, "One word set per line, whitespace separated")
      ->required()
      ->check(CLI::ExistingFile);
  coherence->add_option("--window", window, "Sliding window (default: coherence.window)");
  coherence->add_flag("--tokens", coh_tokens, "Corpus lines are already tokens; skip preprocessing");
  coherence->callback([&] {
    action = [&] {
      const auto config = load(opt);
      auto options = config.coherence;
      if (window > 0) options.window = window;
      const auto reference = read_documents(coh_corpus, coh_tokens, config.preprocess());
      std::vector<text::TokenList> sets;
      for (const auto& line : read_lines(coh_top)) {
        auto words = text::split_whitespace(line);
        if (!words.empty()) sets.push_back(std::move(words));
      }
      const auto scores = text::coherence_cv(sets, reference, options);
      if (opt.json_output) {
        std::cout << json{{"per_set", scores.per_set}, {"mean", scores.mean}}.dump() << "\n";
        return;
      }
      for (std::size_t i = 0; i < scores.per_set.size(); ++i) std::cout << "set " << i << "\t" << scores.per_set[i] << "\n";
      std::cout << "mean\t" << scores.mean << "\n";
    };
  });

  // export
  auto* exp = app.add_subcommand("export", "Write state, event log and redacted config to a directory");
  std::string out_dir;
  exp->add_option("--out", out_dir, "Output directory")->required();
  exp->callback([&] {
    action = [&] {
      const auto config = load(opt);
      service::Workspace workspace(config.data_dir, config.review, config.snapshot_every, wall_clock());
      const auto events = workspace.events();
      const std::filesystem::path dir(out_dir);
      const json state = {{"seq", events.empty() ? 0 : events.back().seq},
                          {"state", service::state_to_json(workspace.state())}};
      write_text(dir / "state.json", state.dump(1) + "\n");
      std::ostringstream log;
      for (const auto& e : events) service::write_record(log, e);
      write_text(dir / "events.log", log.str());
      write_text(dir / "config.json", service::redacted(config).dump(1) + "\n");
      if (opt.json_output)
        std::cout << json{{"out", dir.string()}, {"events", events.size()}}.dump() << "\n";
      else
        std::cout << "exported " << events.size() << " events to " << dir.string() << "\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    action();
    return 0;
  } catch (const Error& e) {
    if (opt.json_output)
      std::cout << json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.detail()}}}}.dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
