#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "curricula/error.hpp"
#include "curricula/ingest/ingest.hpp"
#include "curricula/recommender/resources.hpp"
#include "curricula/recommender/topics.hpp"
#include "memory_provider.hpp"
#include "oracles.hpp"
#include "planted_corpus.hpp"

using namespace curricula;
using namespace curricula::recommender;
using testing_support::MemoryProvider;

namespace {

const std::string kContent = std::string(CURRICULA_FIXTURES) + "/content/";

text::PreprocessConfig unigrams() {
  auto config = text::PreprocessConfig::defaults();
  config.ngram_orders.clear();
  return config;
}

std::string join(const text::TokenList& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t + " ";
  return out;
}

TopicPipelineConfig quick_pipeline() {
  TopicPipelineConfig config;
  config.k_min = 2;
  config.k_max = 6;
  config.gibbs.iterations = 100;
  return config;
}

struct GatingWorld {
  nlohmann::json truth = nlohmann::json::parse(std::ifstream(kContent + "gating_truth.json"));
  ingest::FixtureProvider training{kContent + "gating/training"};
  ingest::FixtureProvider candidates{kContent + "gating/candidates"};
  text::Corpus corpus;
  text::LldaModel llda;

  GatingWorld() {
    const std::vector<std::string> topics = truth["topics"];
    corpus = ingest::labeled_corpus_for_topics(training, topics, text::PreprocessConfig::defaults()).corpus;
    text::GibbsConfig gibbs;
    gibbs.iterations = 300;
    llda = text::fit_llda(corpus, gibbs);
  }
};

}  // namespace

TEST_CASE("seed topics for a new skill match the tf-idf oracle") {
  ingest::FixtureProvider provider(kContent + "pipeline");
  const auto config = text::PreprocessConfig::defaults();
  const auto seeds = seed_topics_for_new_skill("Python programming", provider, config, 10);

  std::vector<text::TokenList> titles;
  for (const auto& v : provider.search_videos("Python programming", 1)) titles.push_back(text::preprocess(v.title, config));
  const auto expected = oracle::tfidf(titles, 10);
  REQUIRE(seeds.size() == expected.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(seeds[i].term == expected[i].first);
    CHECK(seeds[i].weight == doctest::Approx(expected[i].second).epsilon(1e-12));
  }
  std::set<std::string> terms;
  for (const auto& s : seeds) terms.insert(s.term);
  CHECK(terms.contains("loop"));
  CHECK(terms.contains("function"));

  CHECK_THROWS_WITH_AS(seed_topics_for_new_skill("Underwater basket weaving", provider, config),
                       doctest::Contains("ProviderEmpty"), Error);

  MemoryProvider same;
  for (int i = 0; i < 5; ++i) same.add_video("Rust", "Ownership basics", "");
  CHECK(seed_topics_for_new_skill("Rust", same, config).empty());
}

TEST_CASE("existing topic collisions") {
  const auto config = text::PreprocessConfig::defaults();
  const std::vector<std::string> existing = {"Hypothesis testing", "Probability"};
  CHECK(collides_with_topic("hypothesi", existing, config));
  CHECK(collides_with_topic("test", existing, config));
  CHECK(collides_with_topic("hypothesi_test", existing, config));
  CHECK(collides_with_topic("  PROBABILITY ", existing, config));
  CHECK_FALSE(collides_with_topic("varianc", existing, config));
  CHECK_FALSE(collides_with_topic("test", {}, config));
}

TEST_CASE("merge candidates keeps the best probability per term") {
  const auto merged = merge_candidates({{"b", 0.2, CandidateSource::lda},
                                        {"a", 0.2, CandidateSource::llda},
                                        {"c", 0.5, CandidateSource::lda},
                                        {"b", 0.4, CandidateSource::llda},
                                        {"c", 0.1, CandidateSource::llda}});
  REQUIRE(merged.size() == 3);
  CHECK(merged[0] == TopicCandidate{"c", 0.5, CandidateSource::lda});
  CHECK(merged[1] == TopicCandidate{"b", 0.4, CandidateSource::llda});
  CHECK(merged[2] == TopicCandidate{"a", 0.2, CandidateSource::llda});
  CHECK(merge_candidates({{"z", 0.3, CandidateSource::lda}, {"y", 0.3, CandidateSource::lda}})[0].term == "y");
}

TEST_CASE("topic pipeline without existing topics uses the skill videos only") {
  ingest::FixtureProvider provider(kContent + "pipeline");
  const auto rec = build_topic_recommendations("Python programming", {}, provider, quick_pipeline());
  REQUIRE_FALSE(rec.candidates.empty());
  for (const auto& c : rec.candidates) CHECK(c.source == CandidateSource::lda);
  CHECK(rec.coherence.scores.size() == 5);
  for (std::size_t i = 1; i < rec.candidates.size(); ++i) {
    const auto& a = rec.candidates[i - 1];
    const auto& b = rec.candidates[i];
    CHECK((a.probability > b.probability || (a.probability == b.probability && a.term < b.term)));
  }
  CHECK(rec.candidates.front().probability > 0.0);
}

TEST_CASE("topic pipeline drops existing topics") {
  ingest::FixtureProvider provider(kContent + "pipeline");
  const std::vector<std::string> existing = {"Hypothesis testing", "Probability"};
  const auto rec = build_topic_recommendations("Statistics", existing, provider, quick_pipeline());
  bool llda_seen = false;
  for (const auto& c : rec.candidates) {
    CHECK(c.term != "hypothesi");
    CHECK(c.term != "test");
    CHECK(c.term != "probabl");
    CHECK_FALSE(collides_with_topic(c.term, existing, quick_pipeline().preprocess));
    llda_seen = llda_seen || c.source == CandidateSource::llda;
  }
  CHECK(llda_seen);
  // The fixture holds 60 transcripts per topic and 200 skill videos.
  CHECK(rec.shortfalls.empty());

  CHECK_THROWS_WITH_AS(build_topic_recommendations("Knitting", {}, provider, quick_pipeline()),
                       doctest::Contains("ProviderEmpty"), Error);
}

TEST_CASE("topic pipeline on planted vocabularies favors unassociated topics") {
  planted::Spec spec;
  spec.topics = 3;
  spec.documents = 120;
  spec.doc_length = 60;
  const auto planted = planted::generate(spec);

  MemoryProvider provider;
  const std::string associated = planted.vocab[0][0];
  for (std::size_t d = 0; d < planted.documents.size(); ++d) {
    provider.add_video("Planted skill", "video", join(planted.documents[d]));
    if (planted.dominant[d] == 0) provider.add_video(associated, "labeled", join(planted.documents[d]));
  }
  TopicPipelineConfig config = quick_pipeline();
  config.preprocess = unigrams();
  config.min_labeled_per_topic = 10;
  config.min_skill_videos = 100;
  const std::vector<std::string> existing = {associated};
  const auto rec = build_topic_recommendations("Planted skill", existing, provider, config);

  REQUIRE(rec.candidates.size() >= 2);
  const std::set<std::string> unassociated_heads = {planted.vocab[1][0], planted.vocab[2][0]};
  CHECK(unassociated_heads.contains(rec.candidates[0].term));
  CHECK(unassociated_heads.contains(rec.candidates[1].term));
  for (const auto& c : rec.candidates) CHECK(c.term != associated);
}

TEST_CASE("quality score") {
  QualityFeatures zeros;
  for (const char* f : kQualityFeatures) zeros[f] = 0.0;
  QualityModel flat;
  for (const char* f : kQualityFeatures) flat.weights[f] = 0.0;
  CHECK(quality_score(zeros, flat) == 0.5);

  QualityModel transcript{{{"has_transcript", 2.0}}, -1.0, 0.5};
  QualityFeatures with = zeros;
  with["has_transcript"] = 1.0;
  CHECK(quality_score(with, transcript) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(quality_score({}, QualityModel{{}, 0.0, 0.5}) == 0.5);
  CHECK_THROWS_WITH_AS(quality_score({{"log_views", 1.0}}, transcript), doctest::Contains("MissingFeature"), Error);

  CHECK_THROWS_WITH_AS((QualityModel{{}, 0.0, 1.0}.validate()), doctest::Contains("InvalidConfig"), Error);
  CHECK_NOTHROW(QualityModel::defaults().validate());

  ingest::ContentRecord r;
  r.title = "Recursion in five minutes";
  r.description = "a short clip";
  r.view_count = 99;
  r.like_count = 33;
  r.duration_seconds = 300;
  r.transcript_or_body = "hello";
  const auto f = quality_features(r);
  CHECK(f.at("log_views") == 2.0);
  CHECK(f.at("like_ratio") == doctest::Approx(1.0 / 3.0));
  CHECK(f.at("duration_minutes") == 5.0);
  CHECK(f.at("description_length_words") == 3.0);
  CHECK(f.at("title_length_words") == 4.0);
  CHECK(f.at("has_transcript") == 1.0);
  ingest::ContentRecord bare;
  const auto b = quality_features(bare);
  CHECK(b.at("log_views") == 0.0);
  CHECK(b.at("like_ratio") == 0.0);
  CHECK(b.at("has_transcript") == 0.0);
}

TEST_CASE("relevance score") {
  planted::Spec spec;
  spec.topics = 3;
  spec.documents = 90;
  spec.doc_length = 50;
  const auto planted = planted::generate(spec);
  std::vector<std::vector<std::string>> labels;
  for (int d : planted.dominant) labels.push_back({"topic" + std::to_string(d)});
  const auto corpus = text::Corpus::from_labeled(planted.documents, labels);
  text::GibbsConfig gibbs;
  gibbs.iterations = 100;
  const auto llda = text::fit_llda(corpus, gibbs);

  const text::TokenList doc = planted::top_planted(planted, 1, 8);
  const auto rel = relevance_score(doc, "topic1", llda);
  CHECK(rel.posterior > 0.999);
  CHECK(rel.is_top);
  CHECK(rel.posteriors.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(relevance_score(doc, "topic0", llda).is_top);

  std::mt19937 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    text::TokenList tokens;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 12); ++i) {
      const int t = static_cast<int>(rng() % 3);
      tokens.push_back(rng() % 5 == 0 ? "unseen" + std::to_string(i) : planted.vocab[t][rng() % 20]);
    }
    const auto expected = oracle::label_posterior(tokens, corpus, llda);
    const auto actual = relevance_score(tokens, "topic2", llda);
    for (std::size_t l = 0; l < expected.size(); ++l)
      CHECK(actual.posteriors(static_cast<Eigen::Index>(l)) == doctest::Approx(expected[l]).epsilon(1e-9));
    CHECK(actual.posteriors.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  CHECK_THROWS_WITH_AS(relevance_score({}, "topic1", llda), doctest::Contains("EmptyTokenList"), Error);
  CHECK_THROWS_WITH_AS(relevance_score(doc, "topic9", llda), doctest::Contains("UnknownLabel"), Error);

  const std::vector<text::TokenList> one_doc = {{"a", "b"}};
  const std::vector<std::vector<std::string>> one_label = {{"only"}};
  const auto single = text::fit_llda(text::Corpus::from_labeled(one_doc, one_label), gibbs);
  const auto r1 = relevance_score({"zzz", "a"}, "only", single);
  CHECK(r1.posterior == 1.0);
  CHECK(r1.is_top);
}

TEST_CASE("resource gate agrees with an independent computation") {
  GatingWorld w;
  const auto quality = QualityModel::defaults();
  const auto recs = recommend_resources(w.truth["topic"], w.candidates, w.llda, quality);
  REQUIRE(recs.size() == 40);

  const auto target = static_cast<std::size_t>(*w.llda.label_index(w.truth["topic"]));
  const auto config = text::PreprocessConfig::defaults();
  std::set<std::string> passed;
  for (const auto& r : recs) {
    const auto& rec = r.record;
    const double views = static_cast<double>(rec.view_count.value_or(0));
    const double z = quality.bias + 0.9 * std::log10(1.0 + views) +
                     25.0 * (views > 0 ? static_cast<double>(rec.like_count.value_or(0)) / views : 0.0) +
                     0.02 * static_cast<double>(rec.duration_seconds.value_or(0)) / 60.0 +
                     0.03 * static_cast<double>(oracle::simple_tokens(rec.description).size()) +
                     0.05 * static_cast<double>(oracle::simple_tokens(rec.title).size()) +
                     (rec.transcript_or_body.empty() ? 0.0 : 1.0);
    CHECK(r.quality_score == doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-12));

    const auto tokens = text::preprocess(rec.title + "\n" + rec.description + "\n" + rec.transcript_or_body, config);
    const auto post = oracle::label_posterior(tokens, w.corpus, w.llda);
    const bool top = std::count_if(post.begin(), post.end(), [&](double p) { return p >= post[target]; }) == 1;
    CHECK(r.relevance_score == doctest::Approx(post[target]).epsilon(1e-9));
    CHECK(r.passed == (r.quality_score >= 0.5 && top && post[target] >= 0.3));
    if (r.passed) passed.insert(rec.id);
  }
  const std::set<std::string> valid(w.truth["valid"].begin(), w.truth["valid"].end());
  CHECK(passed == valid);

  for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i - 1].quality_score >= recs[i].quality_score);
}

TEST_CASE("raising the quality threshold never adds a passed resource") {
  GatingWorld w;
  const auto recs = recommend_resources(w.truth["topic"], w.candidates, w.llda, QualityModel::defaults());
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    double lo = unit(rng), hi = unit(rng);
    if (lo > hi) std::swap(lo, hi);
    const double rel = unit(rng);
    for (const auto& r : recs)
      if (passes_gate(r, hi, rel)) CHECK(passes_gate(r, lo, rel));
  }

  ResourceRecommendation relevant_but_poor;
  relevant_but_poor.quality_score = 0.2;
  relevant_but_poor.relevance_score = 0.9;
  relevant_but_poor.is_top = true;
  CHECK_FALSE(passes_gate(relevant_but_poor, 0.5, 0.3));

  MemoryProvider empty;
  CHECK(recommend_resources(w.truth["topic"], empty, w.llda, QualityModel::defaults()).empty());
  CHECK_THROWS_WITH_AS(recommend_resources("Knitting", empty, w.llda, QualityModel::defaults()),
                       doctest::Contains("UnknownLabel"), Error);
}

TEST_CASE("duplicate candidates are scored once") {
  GatingWorld w;
  MemoryProvider twice;
  twice.add_video("Recursion", "Recursion explained", "recursion recursion base case");
  twice.records.push_back(twice.records.front());
  twice.records.back().id = "copy";
  CHECK(recommend_resources("Recursion", twice, w.llda, QualityModel::defaults()).size() == 1);
}

TEST_CASE("topics for a package") {
  GatingWorld w;
  const auto config = text::PreprocessConfig::defaults();
  const std::vector<std::string> texts = {"hash tables use a hash function", "hash hash tables hash01q hash07q"};
  const auto ranked = recommend_topics_for_package(texts, w.llda, config, 5);
  REQUIRE(ranked.size() == 5);
  CHECK(ranked[0].label == "Hash tables");
  double total = 0.0;
  for (const auto& r : ranked) total += r.posterior;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(recommend_topics_for_package(texts, w.llda, config, 50).size() == 5);
  CHECK(recommend_topics_for_package(texts, w.llda, config, 2).size() == 2);
  CHECK_THROWS_WITH_AS(recommend_topics_for_package({"   "}, w.llda, config), doctest::Contains("EmptyTokenList"),
                       Error);
}
