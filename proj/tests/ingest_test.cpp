#include "rtgraph/ingest.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace rtgraph {
namespace {

ParseResult parse(const std::string& text, TweetFormat format) {
  std::istringstream in(text);
  return parse_stream(in, format);
}

TEST(Timestamp, Formats) {
  EXPECT_EQ(parse_timestamp("1400000000"), 1400000000);
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(parse_timestamp("2014-05-13T16:53:20Z"), 1400000000);
  EXPECT_EQ(parse_timestamp("2014-05-13T18:53:20+02:00"), 1400000000);
  EXPECT_EQ(parse_timestamp("2014-05-13T16:53:20.250"), 1400000000);
  EXPECT_EQ(parse_timestamp("2000-02-29T00:00:00Z"), 951782400);
  EXPECT_THROW(parse_timestamp("2014-02-30T00:00:00Z"), std::invalid_argument);
  EXPECT_THROW(parse_timestamp("yesterday"), std::invalid_argument);
  EXPECT_THROW(parse_timestamp("2014-05-13T16:53:20 CET"), std::invalid_argument);
}

TEST(Parse, JsonLinesDedupAndSort) {
  const auto r = parse(
      R"({"tweet_id":"3","user_id":"b","timestamp":20,"retweet_of_tweet_id":"1","retweet_of_user_id":"a"})"
      "\n"
      R"({"tweet_id":"1","user_id":"a","timestamp":10})"
      "\n"
      R"({"tweet_id":"1","user_id":"z","timestamp":5})"
      "\n"
      "garbage\n"
      R"({"tweet_id":"2","user_id":"c","timestamp":"1970-01-01T00:00:10Z"})"
      "\n",
      TweetFormat::JsonLines);
  EXPECT_EQ(r.duplicates, 1u);
  EXPECT_EQ(r.malformed_lines, 1u);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.records[0].tweet_id, "1");
  EXPECT_EQ(r.records[0].user_id, "a");  // first occurrence wins
  EXPECT_EQ(r.records[1].tweet_id, "2");  // same timestamp, ordered by id
  EXPECT_TRUE(r.records[2].is_retweet());
}

TEST(Parse, CsvWithHeader) {
  const auto r = parse(
      "tweet_id,user_id,timestamp,retweet_of_tweet_id,retweet_of_user_id\n"
      "1,a,100,,\n"
      "2,b,101,1,a\n"
      "3,c,102,1\n"
      "4,d,103\n",
      TweetFormat::Csv);
  EXPECT_EQ(r.malformed_lines, 1u);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(*r.records[1].retweet_of_user_id, "a");
  EXPECT_FALSE(r.records[2].is_retweet());
  EXPECT_THROW(tweet_format_from_string("xml"), std::invalid_argument);
}

TweetRecord tweet(std::string id, std::string user, std::int64_t ts) { return {id, user, ts, {}, {}}; }
TweetRecord rt(std::string id, std::string user, std::int64_t ts, std::string of_id, std::string of_user) {
  return {id, user, ts, of_id, of_user};
}

TEST(Classify, OriginalThenRetweets) {
  // A posts, B retweets A (T2), B retweets A again (T3 onto an existing edge pair)
  const std::vector records{tweet("1", "A", 0), rt("2", "B", 1, "1", "A"), rt("3", "B", 2, "1", "A")};
  const auto r = build_progression(records);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[0], ArrivalEvent::t1(0, 0));
  EXPECT_EQ(r.events[1], ArrivalEvent::t2(0, 1, 0));
  EXPECT_EQ(r.events[2], ArrivalEvent::t3(0, 1, 0));
  EXPECT_EQ(r.user_names, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(r.counters.t1, 1u);
  EXPECT_EQ(r.counters.t2, 1u);
  EXPECT_EQ(r.counters.t3, 1u);
}

TEST(Classify, SkipsRepeatOriginalsAndSelfRetweets) {
  const std::vector records{tweet("1", "A", 0), tweet("2", "A", 1), rt("3", "A", 2, "1", "A"),
                            rt("4", "C", 3, "2", "A")};
  const auto r = build_progression(records);
  EXPECT_EQ(r.counters.skipped_originals, 1u);
  EXPECT_EQ(r.counters.self_retweets, 1u);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[1], ArrivalEvent::t2(0, 1, 0));  // A's second tweet lives in A's tree
  EXPECT_EQ(r.record_steps, (std::vector<std::optional<std::uint64_t>>{0, 0, 0, 1}));
}

TEST(Classify, UnseenAuthorMaterializedAsRoot) {
  const std::vector records{rt("9", "B", 5, "1", "A"), rt("10", "C", 6, "9", "B")};
  const auto r = build_progression(records);
  EXPECT_EQ(r.counters.materialized_authors, 1u);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[0], ArrivalEvent::t1(0, 0));
  EXPECT_EQ(r.events[1], ArrivalEvent::t2(0, 1, 0));
  EXPECT_EQ(r.events[2], ArrivalEvent::t2(1, 2, 0));  // B belongs to A's tree
  EXPECT_EQ(r.state.forest().tree(0).parent(2), 1u);
}

TEST(Classify, CountIdentitiesAndReplay) {
  std::vector<TweetRecord> records;
  for (int i = 0; i < 300; ++i) {
    const std::string user = "u" + std::to_string((i * 7919) % 97);
    if (i % 3 == 0) {
      records.push_back(tweet(std::to_string(i), user, i));
    } else {
      const int of = (i / 3) * 3;
      records.push_back(rt(std::to_string(i), user, i, std::to_string(of), "u" + std::to_string((of * 7919) % 97)));
    }
  }
  const auto r = build_progression(records);
  const auto& g = r.state.graph();
  EXPECT_EQ(g.node_count(), r.counters.t1 + r.counters.t2);
  EXPECT_EQ(g.edge_count(), r.counters.t2 + r.counters.t3);
  EXPECT_EQ(r.counters.t1 + r.counters.t2 + r.counters.t3 + r.counters.skipped_originals + r.counters.self_retweets,
            records.size() + r.counters.materialized_authors);
  const auto rebuilt = GrowthState::from_events(r.events);
  EXPECT_EQ(ProgressionRow::capture(rebuilt), ProgressionRow::capture(r.state));
  EXPECT_EQ(replay_progression(r.events), r.progression);
}

TEST(Hourly, BucketsAndGaps) {
  const std::vector records{tweet("1", "A", 10), rt("2", "B", 20, "1", "A"), rt("3", "B", 7300, "1", "A"),
                            rt("4", "B", 7400, "1", "A")};
  const auto r = build_progression(records);
  const auto rows = hourly_stats(records, r);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].hour_start, 0);
  EXPECT_EQ(rows[0].tweets, 2u);
  EXPECT_EQ(rows[0].nodes, 2u);
  EXPECT_EQ(rows[0].edges, 1u);
  EXPECT_EQ(rows[1].tweets, 0u);
  EXPECT_EQ(rows[1].cumulative_tweets, 2u);
  EXPECT_EQ(rows[1].edges, 1u);
  EXPECT_EQ(rows[2].hour_start, 7200);
  EXPECT_EQ(rows[2].edges, 3u);
  EXPECT_EQ(rows[2].lcc_edges, 3u);
  // densification (3 edges on 2 users) happens in the last hour only
  EXPECT_FALSE(rows[1].densified);
  EXPECT_TRUE(rows[2].densified);
  EXPECT_EQ(*densification_time(r.progression), 3u);
  std::ostringstream out;
  write_hourly_csv(out, rows);
  EXPECT_NE(out.str().find("7200,2,4,2,3,2,3,1.500000,1"), std::string::npos) << out.str();
}

}  // namespace
}  // namespace rtgraph
