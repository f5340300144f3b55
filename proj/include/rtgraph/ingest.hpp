#pragma once

// Builds retweet-graph progressions from tweet files. Each record is
// classified against the users seen so far:
//   original by an unseen user           -> T1 (opens a message tree)
//   original by a seen user              -> skipped
//   retweet by an unseen user            -> T2
//   retweet by a seen user of another    -> T3
//   self-retweet                         -> skipped
// A retweet whose author has not been seen materializes the author as a
// tree root (a T1 event) first.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtgraph/graph.hpp"
#include "rtgraph/progression.hpp"

namespace rtgraph {

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  std::int64_t timestamp = 0;  // seconds since the epoch, UTC
  std::optional<std::string> retweet_of_tweet_id;
  std::optional<std::string> retweet_of_user_id;

  bool is_retweet() const { return retweet_of_user_id.has_value(); }
};

enum class TweetFormat { JsonLines, Csv };

TweetFormat tweet_format_from_string(std::string_view text);

struct ParseResult {
  std::vector<TweetRecord> records;  // sorted by (timestamp, tweet_id)
  std::uint64_t malformed_lines = 0;
  std::uint64_t duplicates = 0;
};

/// Integer seconds or ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+hh:mm|-hh:mm]".
std::int64_t parse_timestamp(std::string_view text);

/// Reads JSON-lines or the fixed-column CSV
/// tweet_id,user_id,timestamp,retweet_of_tweet_id,retweet_of_user_id
/// (optional header line). Malformed lines are counted and skipped; the
/// first occurrence of a tweet_id wins.
ParseResult parse_stream(std::istream& in, TweetFormat format);

struct IngestCounters {
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  std::uint64_t t3 = 0;
  std::uint64_t skipped_originals = 0;
  std::uint64_t self_retweets = 0;
  std::uint64_t materialized_authors = 0;  // included in t1
};

struct IngestResult {
  std::vector<ArrivalEvent> events;
  GrowthState state;
  ProgressionStats progression;
  std::vector<std::string> user_names;  // dense id -> original user_id
  /// Per input record: time index of the state after the record, or
  /// nullopt while the graph is still empty.
  std::vector<std::optional<std::uint64_t>> record_steps;
  IngestCounters counters;
};

/// `records` must be sorted as parse_stream returns them.
IngestResult build_progression(const std::vector<TweetRecord>& records, StateOptions options = {},
                               std::uint64_t checkpoint_every = 1);

struct HourlyRow {
  std::int64_t hour_start = 0;  // epoch seconds, multiple of 3600
  std::uint64_t tweets = 0;
  std::uint64_t cumulative_tweets = 0;
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t lcc_nodes = 0;
  std::uint64_t lcc_edges = 0;
  bool densified = false;  // first LCC densification happened by the end of this hour

  double lcc_density() const {
    return lcc_nodes == 0 ? 0.0 : static_cast<double>(lcc_edges) / static_cast<double>(lcc_nodes);
  }
};

/// Per-hour tweet counts and end-of-hour graph metrics; hours without
/// tweets inside the covered span are included with zero counts.
std::vector<HourlyRow> hourly_stats(const std::vector<TweetRecord>& records, const IngestResult& ingest);

void write_hourly_csv(std::ostream& out, const std::vector<HourlyRow>& rows);

}  // namespace rtgraph
