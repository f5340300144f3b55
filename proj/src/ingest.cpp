#include "rtgraph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace rtgraph {

TweetFormat tweet_format_from_string(std::string_view text) {
  if (text == "jsonl" || text == "json") return TweetFormat::JsonLines;
  if (text == "csv") return TweetFormat::Csv;
  throw std::invalid_argument("unknown tweet format '" + std::string(text) + "' (expected jsonl or csv)");
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

void check_record(const TweetRecord& r) {
  if (r.tweet_id.empty() || r.user_id.empty()) throw std::invalid_argument("missing tweet_id or user_id");
  if (r.retweet_of_tweet_id.has_value() != r.retweet_of_user_id.has_value())
    throw std::invalid_argument("retweet fields must be both present or both absent");
}

std::optional<std::string> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const auto& v = j[key];
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.empty()) return std::nullopt;
  return s;
}

std::string id_field(const nlohmann::json& j, const char* key) {
  const auto v = optional_field(j, key);
  if (!v) throw std::invalid_argument(std::string("missing ") + key);
  return *v;
}

TweetRecord parse_json_line(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  TweetRecord r;
  r.tweet_id = id_field(j, "tweet_id");
  r.user_id = id_field(j, "user_id");
  const auto& ts = j.at("timestamp");
  if (ts.is_number_integer()) {
    r.timestamp = ts.get<std::int64_t>();
  } else if (ts.is_string()) {
    r.timestamp = parse_timestamp(ts.get<std::string>());
  } else {
    throw std::invalid_argument("timestamp must be an integer or ISO-8601 string");
  }
  r.retweet_of_tweet_id = optional_field(j, "retweet_of_tweet_id");
  r.retweet_of_user_id = optional_field(j, "retweet_of_user_id");
  check_record(r);
  return r;
}

TweetRecord parse_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() == 3) fields.resize(5);
  if (fields.size() != 5) throw std::invalid_argument("expected 5 CSV fields");
  TweetRecord r;
  r.tweet_id = fields[0];
  r.user_id = fields[1];
  r.timestamp = parse_timestamp(fields[2]);
  if (!fields[3].empty()) r.retweet_of_tweet_id = std::string(fields[3]);
  if (!fields[4].empty()) r.retweet_of_user_id = std::string(fields[4]);
  check_record(r);
  return r;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty timestamp");
  if (text.find('-', 1) == std::string_view::npos && text.find(':') == std::string_view::npos)
    return parse_int(text, "timestamp");

  // YYYY-MM-DD[T ]HH:MM:SS
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    throw std::invalid_argument("bad ISO-8601 timestamp '" + std::string(text) + "'");
  const auto year = static_cast<int>(parse_int(text.substr(0, 4), "year"));
  const auto month = static_cast<unsigned>(parse_int(text.substr(5, 2), "month"));
  const auto day = static_cast<unsigned>(parse_int(text.substr(8, 2), "day"));
  const auto hour = parse_int(text.substr(11, 2), "hour");
  const auto minute = parse_int(text.substr(14, 2), "minute");
  const auto second = parse_int(text.substr(17, 2), "second");
  const std::chrono::year_month_day ymd{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60)
    throw std::invalid_argument("invalid date/time '" + std::string(text) + "'");

  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest.front() == '.') {
    std::size_t k = 1;
    while (k < rest.size() && rest[k] >= '0' && rest[k] <= '9') ++k;
    rest.remove_prefix(k);
  }
  std::int64_t offset = 0;
  if (rest == "Z" || rest.empty()) {
    offset = 0;
  } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
    offset = parse_int(rest.substr(1, 2), "offset") * 3600 + parse_int(rest.substr(4, 2), "offset") * 60;
    if (rest.front() == '-') offset = -offset;
  } else {
    throw std::invalid_argument("bad timezone suffix in '" + std::string(text) + "'");
  }
  const std::int64_t days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

ParseResult parse_stream(std::istream& in, TweetFormat format) {
  if (!in) throw std::runtime_error("unreadable tweet input");
  ParseResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const bool header = first && format == TweetFormat::Csv && trim(line).starts_with("tweet_id");
    first = false;
    if (header || trim(line).empty()) continue;
    try {
      TweetRecord r = format == TweetFormat::JsonLines ? parse_json_line(line) : parse_csv_line(line);
      if (!seen.insert(r.tweet_id).second) {
        ++result.duplicates;
        continue;
      }
      result.records.push_back(std::move(r));
    } catch (const std::exception&) {
      ++result.malformed_lines;
    }
  }
  if (in.bad()) throw std::runtime_error("error while reading tweet input");
  std::stable_sort(result.records.begin(), result.records.end(), [](const TweetRecord& a, const TweetRecord& b) {
    return std::tie(a.timestamp, a.tweet_id) < std::tie(b.timestamp, b.tweet_id);
  });
  return result;
}

namespace {

class Classifier {
 public:
  Classifier(IngestResult& out, std::uint64_t every) : out_(out), recorder_(every) {}

  void consume(const TweetRecord& r) {
    if (!r.is_retweet()) {
      original(r);
    } else {
      retweet(r);
    }
    out_.record_steps.push_back(out_.state.initialized() ? std::optional(out_.state.t()) : std::nullopt);
  }

  void finish() {
    recorder_.finish(out_.state);
    out_.progression = recorder_.take();
  }

 private:
  void emit(const ArrivalEvent& e) {
    out_.state.apply(e);
    out_.events.push_back(e);
    recorder_.observe(out_.state);
    switch (e.type) {
      case ArrivalType::T1: ++out_.counters.t1; break;
      case ArrivalType::T2: ++out_.counters.t2; break;
      case ArrivalType::T3: ++out_.counters.t3; break;
    }
  }

  std::optional<UserId> lookup(const std::string& name) const {
    const auto it = users_.find(name);
    if (it == users_.end()) return std::nullopt;
    return it->second;
  }

  UserId register_user(const std::string& name) {
    const auto id = static_cast<UserId>(out_.user_names.size());
    users_.emplace(name, id);
    out_.user_names.push_back(name);
    return id;
  }

  TreeId open_root(const std::string& name) {
    const UserId u = register_user(name);
    const auto tree = static_cast<TreeId>(out_.state.forest().tree_count());
    emit(ArrivalEvent::t1(u, tree));
    return tree;
  }

  // Tree a user's messages belong to: the one they root, else their
  // lowest-id membership.
  TreeId home_tree(UserId u) const {
    if (const auto rooted = out_.state.forest().rooted_tree(u)) return *rooted;
    TreeId best = std::numeric_limits<TreeId>::max();
    for (const auto& m : out_.state.forest().memberships(u)) best = std::min(best, m.tree);
    return best;
  }

  void original(const TweetRecord& r) {
    if (const auto u = lookup(r.user_id)) {
      ++out_.counters.skipped_originals;
      tweet_tree_.try_emplace(r.tweet_id, home_tree(*u));
      return;
    }
    tweet_tree_.try_emplace(r.tweet_id, open_root(r.user_id));
  }

  void retweet(const TweetRecord& r) {
    const std::string& author_name = *r.retweet_of_user_id;
    if (author_name == r.user_id) {
      ++out_.counters.self_retweets;
      return;
    }
    auto author = lookup(author_name);
    if (!author) {
      ++out_.counters.materialized_authors;
      tweet_tree_.try_emplace(*r.retweet_of_tweet_id, open_root(author_name));
      author = lookup(author_name);
    }
    TreeId tree = home_tree(*author);
    if (const auto it = tweet_tree_.find(*r.retweet_of_tweet_id);
        it != tweet_tree_.end() && out_.state.forest().position_in(*author, it->second))
      tree = it->second;
    else
      tweet_tree_.try_emplace(*r.retweet_of_tweet_id, tree);

    if (const auto retweeter = lookup(r.user_id)) {
      emit(ArrivalEvent::t3(*author, *retweeter, tree));
    } else {
      emit(ArrivalEvent::t2(*author, register_user(r.user_id), tree));
    }
  }

  IngestResult& out_;
  ProgressionRecorder recorder_;
  std::unordered_map<std::string, UserId> users_;
  std::unordered_map<std::string, TreeId> tweet_tree_;
};

}  // namespace

IngestResult build_progression(const std::vector<TweetRecord>& records, StateOptions options,
                               std::uint64_t checkpoint_every) {
  IngestResult out;
  out.state = GrowthState(options);
  Classifier classifier(out, checkpoint_every);
  for (const TweetRecord& r : records) classifier.consume(r);
  classifier.finish();
  return out;
}

std::vector<HourlyRow> hourly_stats(const std::vector<TweetRecord>& records, const IngestResult& ingest) {
  std::vector<HourlyRow> rows;
  if (records.empty()) return rows;
  if (ingest.record_steps.size() != records.size())
    throw std::invalid_argument("hourly_stats: ingest result does not match the records");

  const auto hour_of = [](std::int64_t ts) {
    const std::int64_t h = ts >= 0 ? ts / 3600 : -((-ts + 3599) / 3600);
    return h * 3600;
  };
  const auto dens = densification_time(ingest.progression);
  const auto& prog = ingest.progression.rows;

  std::uint64_t cumulative = 0;
  std::optional<std::uint64_t> last_step;
  std::size_t i = 0;
  for (std::int64_t hour = hour_of(records.front().timestamp); i < records.size(); hour += 3600) {
    HourlyRow row;
    row.hour_start = hour;
    for (; i < records.size() && records[i].timestamp < hour + 3600; ++i) {
      ++row.tweets;
      if (ingest.record_steps[i]) last_step = ingest.record_steps[i];
    }
    cumulative += row.tweets;
    row.cumulative_tweets = cumulative;
    if (last_step) {
      // latest checkpoint at or before the end-of-hour step
      const auto it = std::upper_bound(prog.begin(), prog.end(), *last_step,
                                       [](std::uint64_t s, const ProgressionRow& r) { return s < r.t; });
      if (it != prog.begin()) {
        const ProgressionRow& r = *std::prev(it);
        row.nodes = r.nodes;
        row.edges = r.edges;
        row.lcc_nodes = r.lcc_nodes;
        row.lcc_edges = r.lcc_edges;
      }
      row.densified = dens && *dens <= *last_step;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_hourly_csv(std::ostream& out, const std::vector<HourlyRow>& rows) {
  out << "hour_start,tweets,cumulative_tweets,V,E,V_lcc,E_lcc,lcc_density,densified\n";
  char buf[32];
  for (const HourlyRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.lcc_density());
    out << r.hour_start << ',' << r.tweets << ',' << r.cumulative_tweets << ',' << r.nodes << ',' << r.edges << ','
        << r.lcc_nodes << ',' << r.lcc_edges << ',' << buf << ',' << (r.densified ? 1 : 0) << '\n';
  }
}

}  // namespace rtgraph
